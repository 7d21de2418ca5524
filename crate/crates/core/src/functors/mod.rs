//! Correspondence functors truncated at a set-size bound.
//!
//! A [`FunctorRep`] knows its dimension at each size `0..=bound` and can
//! produce the matrix of any correspondence between sets within the bound.
//! Actions are memoized behind a shared lock.

mod basic;
mod internal_hom;
mod lfunctor;
mod modules;
mod morphism;
mod solver;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

pub use basic::{
    constant, direct_sum, from_table, functor_ft, representable, shift, tensor, zero, TableData,
};
pub use internal_hom::{internal_hom, InternalHom, InternalHomData};
pub use lfunctor::{l_functor, LData, LFunctor};
pub use modules::{induced_module, InducedModule, RModule};
pub use morphism::{
    morphism_from_pairing, pairing_from_morphism, shift_morphism, Morphism, Pairing,
};
pub use solver::{hom_solver, pairing_solver, tensor_hom, HomSpace, PairingSpace};

use crate::kernel::Matrix;
use crate::relations::Correspondence;
use crate::sweep::{run_cases, CaseCount, Execution, SweepPlan};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctorError {
    #[error("bounds differ: {0} vs {1}")]
    BoundMismatch(usize, usize),
    #[error("bound exhausted: need sets of size {needed} but the bound is {bound}")]
    BoundExhausted { needed: usize, bound: usize },
    #[error("ground sets differ: {0} vs {1}")]
    GroundMismatch(usize, usize),
    #[error("{0}")]
    Invalid(String),
}

/// The data behind a functor: dimensions and uncached actions.
pub trait FunctorData: Send + Sync {
    fn describe(&self) -> String;
    fn dim(&self, n: usize) -> usize;
    /// Matrix of `U ∈ 𝒞(Y, X)`, of shape `dim(|Y|) × dim(|X|)`.
    fn act(&self, u: &Correspondence) -> Matrix;
    /// A size `g` such that the functor is a direct sum of representables
    /// `k𝒞(-, E)` with `|E| ≤ g`, when known. Hom out of such a functor is
    /// determined by its values on sizes `≤ g`.
    fn generation_degree(&self) -> Option<usize> {
        None
    }
    fn label(&self, _n: usize, i: usize) -> String {
        format!("e{i}")
    }
}

type ActionCache = RwLock<HashMap<Correspondence, Arc<Matrix>>>;

/// A correspondence functor represented on sets of size `0..=bound`.
#[derive(Clone)]
pub struct FunctorRep {
    bound: usize,
    data: Arc<dyn FunctorData>,
    cache: Arc<ActionCache>,
}

impl FunctorRep {
    pub fn new<D: FunctorData + 'static>(bound: usize, data: D) -> Self {
        FunctorRep {
            bound,
            data: Arc::new(data),
            cache: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    pub fn from_arc(bound: usize, data: Arc<dyn FunctorData>) -> Self {
        FunctorRep {
            bound,
            data,
            cache: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn describe(&self) -> String {
        self.data.describe()
    }

    pub fn data(&self) -> &Arc<dyn FunctorData> {
        &self.data
    }

    pub fn dim(&self, n: usize) -> usize {
        assert!(n <= self.bound, "size {n} beyond bound {}", self.bound);
        self.data.dim(n)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.bound).map(|n| self.dim(n)).collect()
    }

    pub fn label(&self, n: usize, i: usize) -> String {
        self.data.label(n, i)
    }

    pub fn generation_degree(&self) -> Option<usize> {
        self.data.generation_degree()
    }

    /// Whether Hom computations out of this functor are exact at truncation `t`.
    pub fn exact_at(&self, t: usize) -> bool {
        self.generation_degree().is_some_and(|g| g <= t)
    }

    pub fn in_range(&self, u: &Correspondence) -> bool {
        u.target() <= self.bound && u.source() <= self.bound
    }

    /// The action of `u`. Panics if `u` leaves the bound.
    pub fn act(&self, u: &Correspondence) -> Arc<Matrix> {
        assert!(
            self.in_range(u),
            "correspondence {}x{} beyond bound {} of {}",
            u.target(),
            u.source(),
            self.bound,
            self.describe()
        );
        if let Some(m) = self.cache.read().expect("cache lock").get(u) {
            return m.clone();
        }
        let m = Arc::new(self.data.act(u));
        debug_assert_eq!(m.shape(), (self.data.dim(u.target()), self.data.dim(u.source())));
        self.cache
            .write()
            .expect("cache lock")
            .entry(u.clone())
            .or_insert(m)
            .clone()
    }

    /// The same functor seen only on sizes `0..=t`.
    pub fn truncate(&self, t: usize) -> FunctorRep {
        assert!(t <= self.bound);
        FunctorRep {
            bound: t,
            data: self.data.clone(),
            cache: self.cache.clone(),
        }
    }

    /// Checks identities and `act(V∘U) = act(V)·act(U)` over the plan's pairs.
    pub fn check_functoriality(&self, plan: &SweepPlan, exec: Execution) -> Result<CaseCount, String> {
        for n in 0..=self.bound {
            if !self.act(&Correspondence::identity(n)).is_identity() {
                return Err(format!("action of the identity on size {n} is not the identity"));
            }
        }
        let plan = SweepPlan {
            bound: plan.bound.min(self.bound),
            ..plan.clone()
        };
        let (pairs, count) = plan.composable_pairs();
        run_cases(exec, &pairs, |(v, u)| {
            let vu = v.compose(u).expect("composable");
            if *self.act(&vu) == self.act(v).mul(&self.act(u)) {
                Ok(())
            } else {
                Err(format!("act(V∘U) ≠ act(V)·act(U) for V={v:?}, U={u:?}"))
            }
        })
        .map_err(|(_, w)| w)?;
        Ok(count)
    }
}

impl fmt::Debug for FunctorRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[N={}]", self.describe(), self.bound)
    }
}

/// Checks that the same correspondences act compatibly through `theta`:
/// `act_b(U)·θ_X = θ_Y·act_a(U)` for a family of per-size matrices.
pub fn check_intertwines(
    a: &FunctorRep,
    b: &FunctorRep,
    theta: &[Matrix],
    cases: &[Correspondence],
    exec: Execution,
) -> Result<usize, String> {
    run_cases(exec, cases, |u| {
        let lhs = b.act(u).mul(&theta[u.source()]);
        let rhs = theta[u.target()].mul(&a.act(u));
        if lhs == rhs {
            Ok(())
        } else {
            Err(format!("naturality fails for U={u:?}"))
        }
    })
    .map_err(|(_, w)| w)
}

#[cfg(test)]
mod tests;
