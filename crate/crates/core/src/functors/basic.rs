//! Lattice functors, representables, constants and the constructions that
//! build new functors from old ones without solving anything.

use std::collections::HashMap;
use std::sync::Arc;

use super::{FunctorData, FunctorError, FunctorRep};
use crate::kernel::Matrix;
use crate::lattices::{powerset, Lattice};
use crate::relations::Correspondence;

/// Index of `φ: X → T` is `Σ_x φ(x)·|T|^x`.
pub(crate) fn decode_function(mut index: usize, size: usize, base: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(size);
    for _ in 0..size {
        out.push(index % base);
        index /= base;
    }
    out
}

pub(crate) fn encode_function(values: &[usize], base: usize) -> usize {
    values.iter().rev().fold(0, |acc, &v| acc * base + v)
}

struct FtData {
    lattice: Arc<Lattice>,
    name: String,
    degree: Option<usize>,
}

impl FunctorData for FtData {
    fn describe(&self) -> String {
        self.name.clone()
    }

    fn dim(&self, n: usize) -> usize {
        self.lattice.size().pow(n as u32)
    }

    fn act(&self, u: &Correspondence) -> Matrix {
        let t = self.lattice.size();
        let (ny, nx) = (u.target(), u.source());
        let rows: Vec<Vec<usize>> = (0..ny).map(|y| u.related_to(y).collect()).collect();
        let mut image = vec![0usize; ny];
        let map = (0..self.dim(nx))
            .map(|idx| {
                let phi = decode_function(idx, nx, t);
                for (y, xs) in rows.iter().enumerate() {
                    image[y] = self.lattice.join_of_subset(xs.iter().map(|&x| phi[x]));
                }
                Some(encode_function(&image, t))
            })
            .collect();
        Matrix::from_basis_map(self.dim(ny), map)
    }

    fn generation_degree(&self) -> Option<usize> {
        self.degree
    }

    fn label(&self, n: usize, i: usize) -> String {
        let phi = decode_function(i, n, self.lattice.size());
        let parts: Vec<String> = phi.iter().map(|v| v.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

/// `F_T`: basis the maps `X → T`, acted on by joins over related points.
pub fn functor_ft(lattice: Arc<Lattice>, bound: usize) -> FunctorRep {
    let degree = (0..=6).find(|&k| lattice.size() == 1 << k && lattice.is_isomorphic(&powerset(k)));
    let name = format!("F_T[{}]", lattice.size());
    FunctorRep::new(bound, FtData { lattice, name, degree })
}

/// `k𝒞(-, E)`. The basis of `𝒞(X, E)` is indexed like `F_T` for `T` the
/// subsets of `E`, with subsets as bitmasks: the code of `A` is `Σ_x A_x·2^(|E|·x)`.
pub fn representable(e: usize, bound: usize) -> FunctorRep {
    FunctorRep::new(
        bound,
        FtData {
            lattice: Arc::new(powerset(e)),
            name: format!("rep({e})"),
            degree: Some(e),
        },
    )
}

struct ConstantData;

impl FunctorData for ConstantData {
    fn describe(&self) -> String {
        "const".into()
    }
    fn dim(&self, _n: usize) -> usize {
        1
    }
    fn act(&self, _u: &Correspondence) -> Matrix {
        Matrix::identity(1)
    }
    fn generation_degree(&self) -> Option<usize> {
        Some(0)
    }
}

/// The constant functor `k̄`: `k` everywhere, every correspondence acting as `1`.
pub fn constant(bound: usize) -> FunctorRep {
    FunctorRep::new(bound, ConstantData)
}

struct ZeroData;

impl FunctorData for ZeroData {
    fn describe(&self) -> String {
        "zero".into()
    }
    fn dim(&self, _n: usize) -> usize {
        0
    }
    fn act(&self, _u: &Correspondence) -> Matrix {
        Matrix::zeros(0, 0)
    }
    fn generation_degree(&self) -> Option<usize> {
        Some(0)
    }
}

pub fn zero(bound: usize) -> FunctorRep {
    FunctorRep::new(bound, ZeroData)
}

struct TensorData {
    left: FunctorRep,
    right: FunctorRep,
}

impl FunctorData for TensorData {
    fn describe(&self) -> String {
        format!("({} * {})", self.left.describe(), self.right.describe())
    }
    fn dim(&self, n: usize) -> usize {
        self.left.dim(n) * self.right.dim(n)
    }
    fn act(&self, u: &Correspondence) -> Matrix {
        self.left.act(u).kron(&self.right.act(u))
    }
    fn generation_degree(&self) -> Option<usize> {
        Some(self.left.generation_degree()? + self.right.generation_degree()?)
    }
    fn label(&self, n: usize, i: usize) -> String {
        let d = self.right.dim(n);
        format!("{}⊗{}", self.left.label(n, i / d), self.right.label(n, i % d))
    }
}

/// `M ⊗ M'`: evaluations tensored, correspondences acting diagonally.
/// The basis index of `m_i ⊗ m'_j` is `i·dim M'(X) + j`.
pub fn tensor(m: &FunctorRep, m2: &FunctorRep) -> Result<FunctorRep, FunctorError> {
    if m.bound() != m2.bound() {
        return Err(FunctorError::BoundMismatch(m.bound(), m2.bound()));
    }
    Ok(FunctorRep::new(
        m.bound(),
        TensorData {
            left: m.clone(),
            right: m2.clone(),
        },
    ))
}

struct ShiftData {
    inner: FunctorRep,
    e: usize,
}

impl FunctorData for ShiftData {
    fn describe(&self) -> String {
        format!("{}_[{}]", self.inner.describe(), self.e)
    }
    fn dim(&self, n: usize) -> usize {
        self.inner.dim(n + self.e)
    }
    fn act(&self, u: &Correspondence) -> Matrix {
        let t = Correspondence::block_diag(u, &Correspondence::identity(self.e));
        (*self.inner.act(&t)).clone()
    }
    fn generation_degree(&self) -> Option<usize> {
        self.inner.generation_degree()
    }
    fn label(&self, n: usize, i: usize) -> String {
        self.inner.label(n + self.e, i)
    }
}

/// `M_E = M ∘ t_E` with `t_E(X) = X ⊔ E`; the bound drops by `|E|`.
pub fn shift(m: &FunctorRep, e: usize) -> Result<FunctorRep, FunctorError> {
    if e > m.bound() {
        return Err(FunctorError::BoundExhausted {
            needed: e,
            bound: m.bound(),
        });
    }
    Ok(FunctorRep::new(
        m.bound() - e,
        ShiftData {
            inner: m.clone(),
            e,
        },
    ))
}

struct SumData {
    left: FunctorRep,
    right: FunctorRep,
}

impl FunctorData for SumData {
    fn describe(&self) -> String {
        format!("({} + {})", self.left.describe(), self.right.describe())
    }
    fn dim(&self, n: usize) -> usize {
        self.left.dim(n) + self.right.dim(n)
    }
    fn act(&self, u: &Correspondence) -> Matrix {
        self.left.act(u).direct_sum(&self.right.act(u))
    }
    fn generation_degree(&self) -> Option<usize> {
        Some(self.left.generation_degree()?.max(self.right.generation_degree()?))
    }
}

pub fn direct_sum(m: &FunctorRep, m2: &FunctorRep) -> Result<FunctorRep, FunctorError> {
    if m.bound() != m2.bound() {
        return Err(FunctorError::BoundMismatch(m.bound(), m2.bound()));
    }
    Ok(FunctorRep::new(
        m.bound(),
        SumData {
            left: m.clone(),
            right: m2.clone(),
        },
    ))
}

/// A functor given by explicit matrices for every correspondence in range.
pub struct TableData {
    pub name: String,
    pub dims: Vec<usize>,
    pub table: HashMap<Correspondence, Matrix>,
}

impl FunctorData for TableData {
    fn describe(&self) -> String {
        self.name.clone()
    }
    fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }
    fn act(&self, u: &Correspondence) -> Matrix {
        self.table
            .get(u)
            .cloned()
            .unwrap_or_else(|| panic!("no matrix recorded for {u:?}"))
    }
}

/// Wraps a complete action table. Every correspondence between sets of size
/// `≤ dims.len() - 1` must be present with the right shape.
pub fn from_table(
    name: &str,
    dims: Vec<usize>,
    table: HashMap<Correspondence, Matrix>,
) -> Result<FunctorRep, FunctorError> {
    let bound = dims.len().checked_sub(1).ok_or_else(|| FunctorError::Invalid("no sizes".into()))?;
    for y in 0..=bound {
        for x in 0..=bound {
            for u in crate::relations::enumerate_correspondences(y, x)
                .map_err(|e| FunctorError::Invalid(e.to_string()))?
            {
                match table.get(&u) {
                    None => return Err(FunctorError::Invalid(format!("missing action of {u:?}"))),
                    Some(m) if m.shape() != (dims[y], dims[x]) => {
                        return Err(FunctorError::Invalid(format!(
                            "action of {u:?} has shape {:?}, expected {:?}",
                            m.shape(),
                            (dims[y], dims[x])
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(FunctorRep::new(
        bound,
        TableData {
            name: name.to_string(),
            dims,
            table,
        },
    ))
}
