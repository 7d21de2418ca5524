//! `L_{E,W}(X) = k𝒞(X, E) ⊗_{R_E} W`.

use std::sync::{Arc, OnceLock};

use super::modules::{InducedModule, RModule};
use super::{FunctorData, FunctorRep};
use crate::kernel::Matrix;
use crate::relations::Correspondence;

pub struct LData {
    w: RModule,
    evaluations: Vec<OnceLock<InducedModule>>,
}

impl LData {
    /// The presentation of `L_{E,W}(X)` for `|X| = n`, built on first use.
    pub fn evaluation(&self, n: usize) -> &InducedModule {
        self.evaluations[n].get_or_init(|| InducedModule::build(&self.w, n).expect("induction within enumeration limits"))
    }

    pub fn module(&self) -> &RModule {
        &self.w
    }
}

impl FunctorData for LData {
    fn describe(&self) -> String {
        format!("L[{},{}]", self.w.ground(), self.w.name())
    }
    fn dim(&self, n: usize) -> usize {
        self.evaluation(n).dim()
    }
    fn act(&self, u: &Correspondence) -> Matrix {
        self.evaluation(u.source()).left_compose(self.evaluation(u.target()), u)
    }
    fn generation_degree(&self) -> Option<usize> {
        self.w.is_regular().then_some(self.w.ground())
    }
}

/// `L_{E,W}` together with access to its per-size presentations.
#[derive(Clone)]
pub struct LFunctor {
    pub rep: FunctorRep,
    pub data: Arc<LData>,
}

impl LFunctor {
    pub fn evaluation(&self, n: usize) -> &InducedModule {
        self.data.evaluation(n)
    }
}

/// `L_{E,W}` on sizes `0..=bound`, where `E` is the ground set of `w`.
pub fn l_functor(w: &RModule, bound: usize) -> LFunctor {
    let data = Arc::new(LData {
        w: w.clone(),
        evaluations: (0..=bound).map(|_| OnceLock::new()).collect(),
    });
    LFunctor {
        rep: FunctorRep::from_arc(bound, data.clone()),
        data,
    }
}
