//! Algebra correspondence functors: every `A(X)` is a commutative algebra and
//! every correspondence acts by algebra maps. The lattice functors `F_T` are
//! the examples, and [`reconstruct_lattice`] recovers `T` from any algebra
//! functor with the exponential and splitting properties.

mod coalgebra;
mod format;
mod reconstruct;
mod split;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use coalgebra::{check_comultiplication, check_counit, comultiplication, counit};
pub use format::{parse_algebra, write_algebra};
pub use reconstruct::{
    match_reference, reconstruct_lattice, verify_product_union, verify_reconstruction, Reconstruction,
};
pub use split::{characteristic_polynomial, rational_roots, split_idempotents, SplitBasis};

use crate::functors::{functor_ft, FunctorError, FunctorRep};
use crate::kernel::{rank, KernelError, Matrix, SparseVec};
use crate::lattices::Lattice;
use crate::relations::Correspondence;
use crate::sweep::{run_cases, CaseCount};
use crate::theorems::{SweepConfig, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("shape: {0}")]
    Shape(String),
    #[error("not an algebra functor: {0}")]
    Axiom(String),
    #[error("not commutative: {0}")]
    NotCommutative(String),
    #[error("not split: {0}")]
    NotSplit(String),
    #[error("hypothesis violated ({hypothesis}): {detail}")]
    Hypothesis { hypothesis: &'static str, detail: String },
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub(crate) fn hypothesis(hypothesis: &'static str, detail: impl Into<String>) -> AlgebraError {
    AlgebraError::Hypothesis {
        hypothesis,
        detail: detail.into(),
    }
}

/// A correspondence functor with a multiplication and unit at every size.
///
/// `mul[n]` has shape `d × d²` with `d = dim(n)`; column `i·d + j` is `e_i·e_j`.
#[derive(Clone, Debug)]
pub struct AlgebraFunctorRep {
    pub name: String,
    pub carrier: FunctorRep,
    pub mul: Vec<Matrix>,
    pub unit: Vec<SparseVec>,
}

/// Associativity is checked on every triple up to this many, otherwise sampled.
const EXHAUSTIVE_TRIPLES: usize = 1 << 18;
const SAMPLED_TRIPLES: usize = 4096;
/// Per correspondence, basis pairs checked against the algebra-map diagram.
const EXHAUSTIVE_PAIRS: usize = 1 << 12;
const SAMPLED_PAIRS: usize = 256;

impl AlgebraFunctorRep {
    /// Checks shapes only; [`AlgebraFunctorRep::validate`] checks the axioms.
    pub fn new(name: &str, carrier: FunctorRep, mul: Vec<Matrix>, unit: Vec<SparseVec>) -> Result<Self, AlgebraError> {
        let bound = carrier.bound();
        if mul.len() != bound + 1 || unit.len() != bound + 1 {
            return Err(AlgebraError::Shape(format!("expected {} sizes of structure constants", bound + 1)));
        }
        for n in 0..=bound {
            let d = carrier.dim(n);
            if mul[n].shape() != (d, d * d) {
                return Err(AlgebraError::Shape(format!(
                    "multiplication at size {n} has shape {:?}, expected {:?}",
                    mul[n].shape(),
                    (d, d * d)
                )));
            }
            if unit[n].support_bound() > d {
                return Err(AlgebraError::Shape(format!("unit at size {n} has entries beyond dimension {d}")));
            }
        }
        Ok(AlgebraFunctorRep {
            name: name.to_string(),
            carrier,
            mul,
            unit,
        })
    }

    pub fn bound(&self) -> usize {
        self.carrier.bound()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.carrier.dim(n)
    }

    pub fn act(&self, u: &Correspondence) -> Arc<Matrix> {
        self.carrier.act(u)
    }

    /// `a·b` in `A(n)`.
    pub fn product(&self, n: usize, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let d = self.dim(n);
        let mut acc = crate::kernel::Accumulator::new(d);
        for (i, x) in a.entries() {
            for (j, y) in b.entries() {
                acc.add_scaled(&(x * y), self.mul[n].column(i * d + j));
            }
        }
        acc.take()
    }

    /// The same algebra functor on sizes `0..=t`.
    pub fn truncate(&self, t: usize) -> AlgebraFunctorRep {
        AlgebraFunctorRep {
            name: self.name.clone(),
            carrier: self.carrier.truncate(t),
            mul: self.mul[..=t].to_vec(),
            unit: self.unit[..=t].to_vec(),
        }
    }

    /// Associativity, commutativity and unit at every size, then the two
    /// algebra-map diagrams and functoriality over the plan's correspondences.
    pub fn validate(&self, cfg: &SweepConfig) -> Result<CaseCount, AlgebraError> {
        let mut count = CaseCount::default();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for n in 0..=self.bound() {
            let d = self.dim(n);
            let e = SparseVec::unit;
            for i in 0..d {
                if self.product(n, &self.unit[n], &e(i)) != e(i) {
                    return Err(AlgebraError::Axiom(format!("unit fails on basis element {i} at size {n}")));
                }
                for j in i + 1..d {
                    if self.mul[n].column(i * d + j) != self.mul[n].column(j * d + i) {
                        return Err(AlgebraError::NotCommutative(format!("e{i}·e{j} ≠ e{j}·e{i} at size {n}")));
                    }
                }
            }
            count.exhaustive += d + d * d.saturating_sub(1) / 2;
            let triples: Vec<(usize, usize, usize)> = if d * d * d <= EXHAUSTIVE_TRIPLES {
                count.exhaustive += d * d * d;
                (0..d * d * d).map(|k| (k / (d * d), k / d % d, k % d)).collect()
            } else {
                count.random += SAMPLED_TRIPLES;
                (0..SAMPLED_TRIPLES)
                    .map(|_| (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d)))
                    .collect()
            };
            run_cases(cfg.exec, &triples, |&(i, j, k)| {
                let left = self.product(n, self.mul[n].column(i * d + j), &e(k));
                let right = self.product(n, &e(i), self.mul[n].column(j * d + k));
                if left == right {
                    Ok(())
                } else {
                    Err(format!("(e{i}·e{j})·e{k} ≠ e{i}·(e{j}·e{k}) at size {n}"))
                }
            })
            .map_err(|(_, w)| AlgebraError::Axiom(w))?;
        }
        let plan = cfg.plan(self.bound());
        count = count + self.carrier.check_functoriality(&plan, cfg.exec).map_err(AlgebraError::Axiom)?;
        let (cases, c) = plan.correspondences();
        let pair_lists: Vec<Vec<(usize, usize)>> = cases
            .iter()
            .map(|u| {
                let d = self.dim(u.source());
                if d * d <= EXHAUSTIVE_PAIRS {
                    (0..d * d).map(|k| (k / d, k % d)).collect()
                } else {
                    (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..d), rng.gen_range(0..d))).collect()
                }
            })
            .collect();
        let indexed: Vec<usize> = (0..cases.len()).collect();
        run_cases(cfg.exec, &indexed, |&k| {
            let u = &cases[k];
            let (x, y) = (u.source(), u.target());
            let a = self.act(u);
            if a.apply(&self.unit[x]) != self.unit[y] {
                return Err(format!("{u:?} does not preserve the unit"));
            }
            let dx = self.dim(x);
            for &(i, j) in &pair_lists[k] {
                let left = a.apply(self.mul[x].column(i * dx + j));
                let right = self.product(y, a.column(i), a.column(j));
                if left != right {
                    return Err(format!("{u:?} is not multiplicative on e{i}, e{j}"));
                }
            }
            Ok(())
        })
        .map_err(|(_, w)| AlgebraError::Axiom(w))?;
        Ok(count + c)
    }
}

/// `F_T` with the pointwise join as product and the constant `0̂` map as unit.
pub fn algebra_ft(lattice: Arc<Lattice>, bound: usize) -> AlgebraFunctorRep {
    let carrier = functor_ft(lattice.clone(), bound);
    let t = lattice.size();
    let mut mul = Vec::with_capacity(bound + 1);
    let mut unit = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let d = t.pow(n as u32);
        let map = (0..d * d)
            .map(|k| {
                let (mut a, mut b) = (k / d, k % d);
                let (mut out, mut place) = (0, 1);
                for _ in 0..n {
                    out += lattice.join(a % t, b % t) * place;
                    place *= t;
                    a /= t;
                    b /= t;
                }
                Some(out)
            })
            .collect();
        mul.push(Matrix::from_basis_map(d, map));
        let zero: usize = (0..n).map(|x| lattice.bottom() * t.pow(x as u32)).sum();
        unit.push(SparseVec::unit(zero));
    }
    let name = carrier.describe();
    AlgebraFunctorRep::new(&name, carrier, mul, unit).expect("shapes of F_T")
}

/// `μ̂_{X,Y} = μ_{X⊔Y} ∘ (act(ι_X) ⊗ act(ι_Y))`: `A(X) ⊗ A(Y) → A(X ⊔ Y)`.
pub fn mu_hat(a: &AlgebraFunctorRep, x: usize, y: usize) -> Result<Matrix, AlgebraError> {
    if x + y > a.bound() {
        return Err(FunctorError::BoundExhausted {
            needed: x + y,
            bound: a.bound(),
        }
        .into());
    }
    let left = a.act(&Correspondence::left_inclusion(x, y));
    let right = a.act(&Correspondence::right_inclusion(x, y));
    Ok(a.mul[x + y].mul(&left.kron(&right)))
}

pub(crate) fn is_invertible(m: &Matrix) -> bool {
    if !m.is_square() {
        return false;
    }
    if let Some(map) = m.basis_map() {
        let mut seen = vec![false; m.rows()];
        return map.iter().all(|x| x.is_some_and(|i| !std::mem::replace(&mut seen[i], true)));
    }
    rank(m) == m.rows()
}

/// `dim A(∅) = 1` and every `μ̂_{X,Y}` with `|X|+|Y| ≤ N` is invertible.
pub fn check_exponential(a: &AlgebraFunctorRep) -> VerificationReport {
    crate::theorems::run_report("exponential", a.name.clone(), a.bound(), |tally| {
        tally.exhaustive(1);
        if a.dim(0) != 1 {
            return Err(format!("dim A(∅) = {}, expected 1", a.dim(0)));
        }
        for x in 0..=a.bound() {
            for y in 0..=a.bound() - x {
                let m = mu_hat(a, x, y).map_err(|e| e.to_string())?;
                if !is_invertible(&m) {
                    return Err(format!("μ̂ at sizes ({x}, {y}) has shape {:?} and is not invertible", m.shape()));
                }
                tally.exhaustive(1);
            }
        }
        Ok(())
    })
}

/// The algebra axioms, then the split idempotents (orthogonal, summing to
/// the unit) and the laws of `δ_•` and `η_•`.
pub fn verify_algebra_structure(a: &AlgebraFunctorRep, cfg: &SweepConfig) -> VerificationReport {
    crate::theorems::run_report("algebra-structure", a.name.clone(), a.bound(), |tally| {
        tally.add(a.validate(cfg).map_err(|e| e.to_string())?);
        let split = split_idempotents(a).map_err(|e| e.to_string())?;
        let f = &split.idempotents;
        for (i, x) in f.iter().enumerate() {
            for (j, y) in f.iter().enumerate() {
                let p = a.product(1, x, y);
                let want = if i == j { x.clone() } else { SparseVec::new() };
                if p != want {
                    return Err(format!("f{i}·f{j} ≠ {}", if i == j { "f" } else { "0" }));
                }
            }
        }
        if f.iter().fold(SparseVec::new(), |acc, x| acc.add(x)) != a.unit[1] {
            return Err("the idempotents do not sum to the unit".into());
        }
        tally.exhaustive(f.len() * f.len() + 1);
        let delta = comultiplication(a).map_err(|e| e.to_string())?;
        tally.exhaustive(check_comultiplication(a, &delta)?);
        let eta = counit(a).map_err(|e| e.to_string())?;
        tally.exhaustive(check_counit(a, &delta, &eta)?);
        Ok(())
    })
}

#[cfg(test)]
mod tests;
