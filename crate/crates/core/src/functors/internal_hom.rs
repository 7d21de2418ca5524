//! The internal hom `H(M, M')(E) = Hom(M, M'_E)`, computed on a common truncation.
//!
//! Each evaluation is a solved [`HomSpace`] between `M` and `M'_E`, both cut
//! to sizes `0..=t` with `t = bound(M') − out_bound`, so every shift needed
//! for `|E| ≤ out_bound` stays within the bound of `M'`.

use std::sync::Arc;

use super::morphism::Morphism;
use super::solver::{hom_solver, HomSpace};
use super::{shift, FunctorData, FunctorError, FunctorRep};
use crate::kernel::{Matrix, SparseVec};
use crate::relations::Correspondence;
use crate::sweep::Execution;

pub struct InternalHomData {
    source: FunctorRep,
    target: FunctorRep,
    truncation: usize,
    spaces: Vec<HomSpace>,
}

impl InternalHomData {
    pub fn space(&self, e: usize) -> &HomSpace {
        &self.spaces[e]
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Post-composition with `M'(Δ_X ⊔ V)`, sending `Hom(M, M'_E)` to `Hom(M, M'_F)`.
    pub fn push_forward(&self, v: &Correspondence, psi: &Morphism) -> Morphism {
        let f = v.target();
        let components = (0..=self.truncation)
            .map(|n| {
                self.target
                    .act(&Correspondence::block_diag(&Correspondence::identity(n), v))
                    .mul(&psi.components[n])
            })
            .collect();
        Morphism {
            source: psi.source.clone(),
            target: self.spaces[f].target.clone(),
            components,
        }
    }
}

impl FunctorData for InternalHomData {
    fn describe(&self) -> String {
        format!("H({}, {})", self.source.describe(), self.target.describe())
    }

    fn dim(&self, n: usize) -> usize {
        self.spaces[n].dim()
    }

    fn act(&self, v: &Correspondence) -> Matrix {
        let (f, e) = (v.target(), v.source());
        let to = &self.spaces[f];
        let cols: Vec<SparseVec> = self.spaces[e]
            .basis
            .iter()
            .map(|psi| {
                let image = self.push_forward(v, psi);
                let coords = to
                    .coordinates(&image)
                    .unwrap_or_else(|| panic!("push-forward along {v:?} left the solved space"));
                SparseVec::from_dense(&coords)
            })
            .collect();
        Matrix::from_columns(to.dim(), cols)
    }
}

/// `H(M, M')` on sizes `0..=out_bound`, together with its solved evaluations.
#[derive(Clone)]
pub struct InternalHom {
    pub rep: FunctorRep,
    pub data: Arc<InternalHomData>,
}

impl InternalHom {
    pub fn truncation(&self) -> usize {
        self.data.truncation
    }

    pub fn space(&self, e: usize) -> &HomSpace {
        self.data.space(e)
    }

    /// Whether every evaluation is exact (the source is generated within the truncation).
    pub fn exact(&self) -> bool {
        self.data.spaces.iter().all(|s| s.exact)
    }
}

pub fn internal_hom(
    m: &FunctorRep,
    m2: &FunctorRep,
    out_bound: usize,
    exec: Execution,
) -> Result<InternalHom, FunctorError> {
    if out_bound > m2.bound() {
        return Err(FunctorError::BoundExhausted {
            needed: out_bound,
            bound: m2.bound(),
        });
    }
    let t = m2.bound() - out_bound;
    if t > m.bound() {
        return Err(FunctorError::BoundExhausted {
            needed: t,
            bound: m.bound(),
        });
    }
    let source = m.truncate(t);
    let spaces = (0..=out_bound)
        .map(|e| hom_solver(&source, &shift(m2, e)?.truncate(t), exec))
        .collect::<Result<Vec<_>, _>>()?;
    let data = Arc::new(InternalHomData {
        source,
        target: m2.clone(),
        truncation: t,
        spaces,
    });
    Ok(InternalHom {
        rep: FunctorRep::from_arc(out_bound, data.clone()),
        data,
    })
}
