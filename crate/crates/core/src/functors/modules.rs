//! Modules over relation algebras `R_E = k𝒞(E, E)` and induction between them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use super::FunctorError;
use crate::kernel::{quotient_presentation, Accumulator, Matrix, Quotient, Scalar, SparseVec};
use crate::relations::{enumerate_correspondences, Correspondence};

type ActionFn = dyn Fn(&Correspondence) -> Matrix + Send + Sync;

/// A left `R_E`-module, given by the action of each relation on `E`.
#[derive(Clone)]
pub struct RModule {
    ground: usize,
    dim: usize,
    name: String,
    regular: bool,
    action: Arc<ActionFn>,
    cache: Arc<RwLock<HashMap<Correspondence, Arc<Matrix>>>>,
}

impl RModule {
    pub fn from_fn<F>(name: &str, ground: usize, dim: usize, action: F) -> Self
    where
        F: Fn(&Correspondence) -> Matrix + Send + Sync + 'static,
    {
        RModule {
            ground,
            dim,
            name: name.to_string(),
            regular: false,
            action: Arc::new(action),
            cache: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    /// `R_E` acting on itself by left multiplication; basis = relations by code.
    pub fn regular(e: usize) -> Self {
        let dim = 1usize << (e * e);
        let mut m = Self::from_fn(&format!("R_{e}"), e, dim, move |r| {
            let map = (0..dim as u64)
                .map(|code| Some(r.compose(&Correspondence::from_code(e, e, code)).expect("same ground").code() as usize))
                .collect();
            Matrix::from_basis_map(dim, map)
        });
        m.regular = true;
        m
    }

    /// `k` with every relation acting as the identity.
    pub fn trivial(e: usize) -> Self {
        Self::from_fn(&format!("k_{e}"), e, 1, |_| Matrix::identity(1))
    }

    pub fn zero(e: usize) -> Self {
        Self::from_fn(&format!("0_{e}"), e, 0, |_| Matrix::zeros(0, 0))
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn act(&self, r: &Correspondence) -> Arc<Matrix> {
        assert!(
            r.target() == self.ground && r.source() == self.ground,
            "relation is not on the ground set of {}",
            self.name
        );
        if let Some(m) = self.cache.read().expect("lock").get(r) {
            return m.clone();
        }
        let m = Arc::new((self.action)(r));
        self.cache.write().expect("lock").entry(r.clone()).or_insert(m).clone()
    }

    /// `V ⊗_k W` with `R` acting as `R ⊗ R`.
    pub fn tensor(&self, other: &RModule) -> Result<RModule, FunctorError> {
        if self.ground != other.ground {
            return Err(FunctorError::GroundMismatch(self.ground, other.ground));
        }
        let (a, b) = (self.clone(), other.clone());
        Ok(Self::from_fn(
            &format!("({} ⊗ {})", self.name, other.name),
            self.ground,
            self.dim * other.dim,
            move |r| a.act(r).kron(&b.act(r)),
        ))
    }

    /// Checks `Δ_E ↦ id` and multiplicativity on every pair of relations.
    pub fn check(&self) -> Result<usize, String> {
        let e = self.ground;
        if !self.act(&Correspondence::identity(e)).is_identity() {
            return Err(format!("Δ does not act as the identity on {}", self.name));
        }
        let rels: Vec<Correspondence> = enumerate_correspondences(e, e).map_err(|x| x.to_string())?.collect();
        for r in &rels {
            for s in &rels {
                if *self.act(&r.compose(s).expect("same ground")) != self.act(r).mul(&self.act(s)) {
                    return Err(format!("action of {r:?}∘{s:?} is not the product"));
                }
            }
        }
        Ok(rels.len() * rels.len() + 1)
    }
}

impl fmt::Debug for RModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[E={}, dim={}]", self.name, self.ground, self.dim)
    }
}

/// Presentation of `k𝒞(F, E) ⊗_{R_E} W`.
///
/// The ambient space has basis `A ⊗ w_i` for `A ∈ 𝒞(F, E)`, indexed
/// `code(A)·dim W + i`; it is divided by `AR ⊗ w − A ⊗ Rw`.
#[derive(Clone, Debug)]
pub struct InducedModule {
    pub base: RModule,
    pub target: usize,
    pub quotient: Quotient,
}

impl InducedModule {
    /// Relators `AR ⊗ w_i − A ⊗ R·w_i` for all `A`, `R`, `i`, in a fixed order.
    pub fn relators(base: &RModule, target: usize) -> Result<(usize, Vec<SparseVec>), FunctorError> {
        let e = base.ground();
        let d = base.dim();
        let homs: Vec<Correspondence> = enumerate_correspondences(target, e)
            .map_err(|x| FunctorError::Invalid(x.to_string()))?
            .collect();
        let rels: Vec<Correspondence> = enumerate_correspondences(e, e)
            .map_err(|x| FunctorError::Invalid(x.to_string()))?
            .collect();
        let mut relators = Vec::with_capacity(homs.len() * rels.len() * d);
        for r in &rels {
            let act = base.act(r);
            for a in &homs {
                let ar = a.compose(r).expect("shapes");
                let (ia, iar) = (a.code() as usize * d, ar.code() as usize * d);
                for i in 0..d {
                    let mut pairs: Vec<(usize, Scalar)> = vec![(iar + i, Scalar::ONE)];
                    pairs.extend(act.column(i).entries().iter().map(|(j, c)| (ia + j, -c)));
                    let v = SparseVec::from_pairs(pairs);
                    if !v.is_zero() {
                        relators.push(v);
                    }
                }
            }
        }
        Ok((homs.len() * d, relators))
    }

    pub fn build(base: &RModule, target: usize) -> Result<Self, FunctorError> {
        let (ambient, relators) = Self::relators(base, target)?;
        let quotient = quotient_presentation(ambient, &relators).map_err(|x| FunctorError::Invalid(x.to_string()))?;
        Ok(InducedModule {
            base: base.clone(),
            target,
            quotient,
        })
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Ambient index of `A ⊗ w_i`.
    pub fn ambient_index(&self, a: &Correspondence, i: usize) -> usize {
        a.code() as usize * self.base.dim() + i
    }

    /// Ambient coordinates `(A, i)` of an ambient index.
    pub fn ambient_pair(&self, index: usize) -> (Correspondence, usize) {
        let d = self.base.dim();
        (
            Correspondence::from_code(self.target, self.base.ground(), (index / d) as u64),
            index % d,
        )
    }

    /// Class of `A ⊗ v` for a vector `v` of `W`.
    pub fn class_of(&self, a: &Correspondence, v: &SparseVec) -> SparseVec {
        let base = a.code() as usize * self.base.dim();
        self.quotient.projection.apply(&v.map_indices(|i| base + i))
    }

    /// The map `self → other` induced by `A ⊗ w ↦ UA ⊗ w` for `U ∈ 𝒞(other.target, self.target)`.
    pub fn left_compose(&self, other: &InducedModule, u: &Correspondence) -> Matrix {
        assert_eq!(u.source(), self.target);
        assert_eq!(u.target(), other.target);
        let d = self.base.dim();
        let e = self.base.ground();
        let amb = other.quotient.ambient_dim();
        let mut acc = Accumulator::new(amb);
        let cols = (0..self.dim())
            .map(|b| {
                for (idx, c) in self.quotient.section.column(b).entries() {
                    let a = Correspondence::from_code(self.target, e, (idx / d) as u64);
                    let ua = u.compose(&a).expect("shapes");
                    acc.add(ua.code() as usize * d + idx % d, c);
                }
                other.quotient.projection.apply(&acc.take())
            })
            .collect();
        Matrix::from_columns(other.dim(), cols)
    }

    /// `V↑_E^F` as an `R_F`-module.
    pub fn module(&self) -> RModule {
        let me = self.clone();
        RModule::from_fn(
            &format!("{}↑{}", self.base.name(), self.target),
            self.target,
            self.dim(),
            move |c| me.left_compose(&me, c),
        )
    }
}

/// `W↑_E^F = k𝒞(F, E) ⊗_{R_E} W` as an `R_F`-module.
pub fn induced_module(w: &RModule, f: usize) -> Result<RModule, FunctorError> {
    Ok(InducedModule::build(w, f)?.module())
}
