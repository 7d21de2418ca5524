//! Natural transformations and bilinear pairings between truncated functors.

use std::collections::BTreeMap;

use super::{shift, tensor, FunctorError, FunctorRep};
use crate::kernel::{Matrix, Scalar};
use crate::relations::Correspondence;
use crate::sweep::{run_cases, Execution};

/// A family `ψ_n: M(n) → M'(n)` for `n = 0..=bound`.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: FunctorRep,
    pub target: FunctorRep,
    pub components: Vec<Matrix>,
}

impl Morphism {
    pub fn new(source: &FunctorRep, target: &FunctorRep, components: Vec<Matrix>) -> Result<Self, FunctorError> {
        if source.bound() != target.bound() {
            return Err(FunctorError::BoundMismatch(source.bound(), target.bound()));
        }
        if components.len() != source.bound() + 1 {
            return Err(FunctorError::Invalid(format!(
                "expected {} components, got {}",
                source.bound() + 1,
                components.len()
            )));
        }
        for (n, c) in components.iter().enumerate() {
            if c.shape() != (target.dim(n), source.dim(n)) {
                return Err(FunctorError::Invalid(format!("component {n} has shape {:?}", c.shape())));
            }
        }
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn identity(m: &FunctorRep) -> Self {
        Morphism {
            source: m.clone(),
            target: m.clone(),
            components: m.dims().into_iter().map(Matrix::identity).collect(),
        }
    }

    pub fn zero(source: &FunctorRep, target: &FunctorRep) -> Self {
        Morphism {
            source: source.clone(),
            target: target.clone(),
            components: (0..=source.bound()).map(|n| Matrix::zeros(target.dim(n), source.dim(n))).collect(),
        }
    }

    pub fn bound(&self) -> usize {
        self.components.len() - 1
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Morphism) -> Result<Morphism, FunctorError> {
        if self.bound() != first.bound() {
            return Err(FunctorError::BoundMismatch(self.bound(), first.bound()));
        }
        let components: Vec<Matrix> = self.components.iter().zip(&first.components).map(|(a, b)| a.mul(b)).collect();
        Ok(Morphism {
            source: first.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism, FunctorError> {
        if self.bound() != other.bound() {
            return Err(FunctorError::BoundMismatch(self.bound(), other.bound()));
        }
        Ok(Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Morphism {
        Morphism {
            components: self.components.iter().map(|m| m.scale(c)).collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    /// The same components restricted to sizes `0..=t`.
    pub fn truncate(&self, t: usize) -> Morphism {
        Morphism {
            source: self.source.truncate(t),
            target: self.target.truncate(t),
            components: self.components[..=t].to_vec(),
        }
    }

    /// `act_{M'}(U)·ψ_X = ψ_Y·act_M(U)` for every case in range.
    pub fn check_naturality(&self, cases: &[Correspondence], exec: Execution) -> Result<usize, String> {
        let n = self.bound();
        let cases: Vec<&Correspondence> = cases.iter().filter(|u| u.target() <= n && u.source() <= n).collect();
        run_cases(exec, &cases, |u| {
            let lhs = self.target.act(u).mul(&self.components[u.source()]);
            let rhs = self.components[u.target()].mul(&self.source.act(u));
            if lhs == rhs {
                Ok(())
            } else {
                Err(format!("not natural at U={u:?}"))
            }
        })
        .map_err(|(_, w)| w)
    }
}

/// A family `η_{X,Y}: M'(X) ⊗ M(Y) → M''(X ⊔ Y)` for `|X| + |Y| ≤ bound`.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub left: FunctorRep,
    pub right: FunctorRep,
    pub target: FunctorRep,
    pub components: BTreeMap<(usize, usize), Matrix>,
}

impl Pairing {
    pub fn zero(left: &FunctorRep, right: &FunctorRep, target: &FunctorRep) -> Self {
        let components = super::solver::pair_sizes(target.bound())
            .into_iter()
            .map(|(x, y)| ((x, y), Matrix::zeros(target.dim(x + y), left.dim(x) * right.dim(y))))
            .collect();
        Pairing {
            left: left.clone(),
            right: right.clone(),
            target: target.clone(),
            components,
        }
    }

    pub fn bound(&self) -> usize {
        self.target.bound()
    }

    pub fn component(&self, x: usize, y: usize) -> &Matrix {
        &self.components[&(x, y)]
    }

    pub fn add(&self, other: &Pairing) -> Pairing {
        let components = self
            .components
            .iter()
            .map(|(k, m)| (*k, m.add(&other.components[k])))
            .collect();
        Pairing {
            components,
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &Scalar) -> Pairing {
        Pairing {
            components: self.components.iter().map(|(k, m)| (*k, m.scale(c))).collect(),
            ..self.clone()
        }
    }

    /// `act''(U ⊔ V)·η_{X,Y} = η_{X',Y'}·(act'(U) ⊗ act(V))` for every pair in range.
    pub fn check_binaturality(
        &self,
        cases: &[(Correspondence, Correspondence)],
        exec: Execution,
    ) -> Result<usize, String> {
        let n = self.bound();
        let cases: Vec<&(Correspondence, Correspondence)> = cases
            .iter()
            .filter(|(u, v)| u.target() + v.target() <= n && u.source() + v.source() <= n)
            .collect();
        run_cases(exec, &cases, |(u, v)| {
            let lhs = self
                .target
                .act(&Correspondence::block_diag(u, v))
                .mul(self.component(u.source(), v.source()));
            let rhs = self
                .component(u.target(), v.target())
                .mul(&self.left.act(u).kron(&self.right.act(v)));
            if lhs == rhs {
                Ok(())
            } else {
                Err(format!("not binatural at U={u:?}, V={v:?}"))
            }
        })
        .map_err(|(_, w)| w)
    }
}

/// `ψ ↦ ψ̂` with `ψ̂_{X,Y} = ψ_{X⊔Y}∘(M'(ι_X) ⊗ M(ι_Y))`, where `ι` are the
/// inclusions of the two summands viewed as correspondences.
pub fn pairing_from_morphism(
    psi: &Morphism,
    left: &FunctorRep,
    right: &FunctorRep,
) -> Result<Pairing, FunctorError> {
    let n = psi.bound();
    if left.bound() < n || right.bound() < n {
        return Err(FunctorError::BoundExhausted {
            needed: n,
            bound: left.bound().min(right.bound()),
        });
    }
    for k in 0..=n {
        if psi.source.dim(k) != left.dim(k) * right.dim(k) {
            return Err(FunctorError::Invalid(format!("source of ψ is not the tensor at size {k}")));
        }
    }
    let components = super::solver::pair_sizes(n)
        .into_iter()
        .map(|(x, y)| {
            let inc = left
                .act(&Correspondence::left_inclusion(x, y))
                .kron(&right.act(&Correspondence::right_inclusion(x, y)));
            ((x, y), psi.components[x + y].mul(&inc))
        })
        .collect();
    Ok(Pairing {
        left: left.truncate(n),
        right: right.truncate(n),
        target: psi.target.clone(),
        components,
    })
}

/// `η ↦ η̃` with `η̃_X = M''(∇_X)∘η_{X,X}`, `∇_X ∈ 𝒞(X, X ⊔ X)` the fold.
/// Defined on sizes with `2|X| ≤ bound`, so the result has bound `⌊bound/2⌋`.
pub fn morphism_from_pairing(eta: &Pairing) -> Result<Morphism, FunctorError> {
    let h = eta.bound() / 2;
    let components = (0..=h)
        .map(|x| eta.target.act(&Correspondence::fold(x)).mul(eta.component(x, x)))
        .collect();
    let source = tensor(&eta.left.truncate(h), &eta.right.truncate(h))?;
    Morphism::new(&source, &eta.target.truncate(h), components)
}

/// `M_V: M_E → M_F` for `V ∈ 𝒞(F, E)`, with component `M(Δ_X ⊔ V)` at `X`.
/// Both shifts are cut to the common bound `N − max(|E|, |F|)`.
pub fn shift_morphism(m: &FunctorRep, v: &Correspondence) -> Result<Morphism, FunctorError> {
    let (f, e) = (v.target(), v.source());
    let top = e.max(f);
    if top > m.bound() {
        return Err(FunctorError::BoundExhausted {
            needed: top,
            bound: m.bound(),
        });
    }
    let b = m.bound() - top;
    let source = shift(m, e)?.truncate(b);
    let target = shift(m, f)?.truncate(b);
    let components = (0..=b)
        .map(|x| (*m.act(&Correspondence::block_diag(&Correspondence::identity(x), v))).clone())
        .collect();
    Morphism::new(&source, &target, components)
}
