//! Solving for natural transformations and bilinear pairings.
//!
//! Unknowns are a list of matrix blocks flattened row-major into one vector.
//! Each constraint reads `post · X_src = X_dst · pre`. Constraints are added
//! lazily: a constraint is only expanded into equations once the current
//! solution space is seen to violate it, and the loop ends with an exact check
//! of every basis vector against every constraint.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::morphism::{Morphism, Pairing};
use super::{tensor, FunctorError, FunctorRep};
use crate::kernel::{Matrix, RowEchelon, Scalar, SparseVec};
use crate::relations::{enumerate_correspondences, Correspondence};
use crate::sweep::{map_cases, Execution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Block {
    pub rows: usize,
    pub cols: usize,
    pub offset: usize,
}

pub(crate) fn layout(shapes: &[(usize, usize)]) -> (Vec<Block>, usize) {
    let mut offset = 0;
    let blocks = shapes
        .iter()
        .map(|&(rows, cols)| {
            let b = Block { rows, cols, offset };
            offset += rows * cols;
            b
        })
        .collect();
    (blocks, offset)
}

/// Reads block `b` of a flat vector as a matrix.
pub(crate) fn block_matrix(b: &Block, x: &SparseVec) -> Matrix {
    let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); b.cols];
    let lo = b.offset;
    let hi = b.offset + b.rows * b.cols;
    let start = x.entries().partition_point(|(i, _)| *i < lo);
    for (i, v) in &x.entries()[start..] {
        if *i >= hi {
            break;
        }
        let k = i - lo;
        cols[k % b.cols].push((k / b.cols, v.clone()));
    }
    Matrix::from_columns(b.rows, cols.into_iter().map(SparseVec::from_pairs).collect())
}

/// Flattens matrices into the layout, block by block.
pub(crate) fn flatten(blocks: &[Block], mats: &[&Matrix]) -> SparseVec {
    let mut pairs = Vec::new();
    for (b, m) in blocks.iter().zip(mats) {
        assert_eq!(m.shape(), (b.rows, b.cols));
        for (j, col) in m.columns().iter().enumerate() {
            for (i, v) in col.entries() {
                pairs.push((b.offset + i * b.cols + j, v.clone()));
            }
        }
    }
    SparseVec::from_pairs(pairs)
}

pub(crate) struct Constraint {
    pub post: Arc<Matrix>,
    pub src: usize,
    pub dst: usize,
    pub pre: Arc<Matrix>,
}

impl Constraint {
    fn residual_is_zero(&self, blocks: &[Block], x: &SparseVec) -> bool {
        let xs = block_matrix(&blocks[self.src], x);
        let xd = block_matrix(&blocks[self.dst], x);
        self.post.mul(&xs) == xd.mul(&self.pre)
    }

    fn equations(&self, blocks: &[Block]) -> Vec<SparseVec> {
        let (bs, bd) = (&blocks[self.src], &blocks[self.dst]);
        let (r, c) = (bd.rows, bs.cols);
        let mut eqs: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); r * c];
        for (k, col) in self.post.columns().iter().enumerate() {
            for (i, a) in col.entries() {
                for j in 0..c {
                    eqs[i * c + j].push((bs.offset + k * bs.cols + j, a.clone()));
                }
            }
        }
        for (j, col) in self.pre.columns().iter().enumerate() {
            for (l, b) in col.entries() {
                for i in 0..r {
                    eqs[i * c + j].push((bd.offset + i * bd.cols + l, -b));
                }
            }
        }
        eqs.into_iter().map(SparseVec::from_pairs).filter(|v| !v.is_zero()).collect()
    }
}

/// Result of a lazy solve.
pub(crate) struct Solution {
    pub basis: Vec<SparseVec>,
    pub free: Vec<usize>,
    pub constraints_used: usize,
}

const BATCH: usize = 12;

pub(crate) fn solve_lazy<F>(
    blocks: &[Block],
    total: usize,
    n_constraints: usize,
    make: F,
    seed: &[usize],
    exec: Execution,
) -> Solution
where
    F: Fn(usize) -> Constraint + Sync,
{
    let mut ech = RowEchelon::new(total);
    let mut added = vec![false; n_constraints];
    let mut used = 0;
    let mut add = |ech: &mut RowEchelon, i: usize, added: &mut Vec<bool>| {
        if !added[i] {
            added[i] = true;
            used += 1;
            for eq in make(i).equations(blocks) {
                ech.insert(&eq);
            }
        }
    };
    for &i in seed {
        add(&mut ech, i, &mut added);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let pending = |added: &Vec<bool>| -> Vec<usize> { (0..n_constraints).filter(|&i| !added[i]).collect() };
    loop {
        let kernel = ech.kernel_basis();
        if kernel.is_empty() {
            break;
        }
        // A random combination finds violations cheaply; the exact pass confirms.
        let mut probe = SparseVec::new();
        for k in &kernel {
            probe = probe.add_scaled(&Scalar::from(rng.gen_range(1..=997i64)), k);
        }
        let todo = pending(&added);
        let flags = map_cases(exec, &todo, |&i| !make(i).residual_is_zero(blocks, &probe));
        let violated: Vec<usize> = todo.iter().zip(&flags).filter(|(_, f)| **f).map(|(i, _)| *i).collect();
        if !violated.is_empty() {
            let step = (violated.len() / BATCH).max(1);
            for &i in violated.iter().step_by(step).take(BATCH) {
                add(&mut ech, i, &mut added);
            }
            continue;
        }
        let flags = map_cases(exec, &todo, |&i| {
            let c = make(i);
            kernel.iter().any(|k| !c.residual_is_zero(blocks, k))
        });
        let violated: Vec<usize> = todo.iter().zip(&flags).filter(|(_, f)| **f).map(|(i, _)| *i).collect();
        if violated.is_empty() {
            break;
        }
        for &i in violated.iter().take(BATCH) {
            add(&mut ech, i, &mut added);
        }
    }
    Solution {
        basis: ech.kernel_basis(),
        free: ech.free_columns(),
        constraints_used: used,
    }
}

/// A basis of `Hom(M, M')` at the common bound of the two functors.
#[derive(Clone)]
pub struct HomSpace {
    pub source: FunctorRep,
    pub target: FunctorRep,
    pub basis: Vec<Morphism>,
    /// True when the source is a sum of representables generated within the bound.
    pub exact: bool,
    pub constraints_used: usize,
    pub constraints_total: usize,
    blocks: Vec<Block>,
    free: Vec<usize>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn truncation(&self) -> usize {
        self.source.bound()
    }

    pub fn flatten(&self, m: &Morphism) -> SparseVec {
        let mats: Vec<&Matrix> = m.components.iter().collect();
        flatten(&self.blocks, &mats)
    }

    /// Coordinates of `m` in the basis, or `None` if `m` is not in the space.
    pub fn coordinates(&self, m: &Morphism) -> Option<Vec<Scalar>> {
        let x = self.flatten(m);
        let coords: Vec<Scalar> = self.free.iter().map(|&f| x.get(f)).collect();
        (self.combination(&coords).components == m.components).then_some(coords)
    }

    pub fn combination(&self, coeffs: &[Scalar]) -> Morphism {
        assert_eq!(coeffs.len(), self.dim());
        let mut out = Morphism::zero(&self.source, &self.target);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c)).expect("same shape");
            }
        }
        out
    }

    /// A combination with small random integer coefficients.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Morphism {
        let coeffs: Vec<Scalar> = (0..self.dim()).map(|_| Scalar::from(rng.gen_range(-5i64..=5))).collect();
        self.combination(&coeffs)
    }
}

/// Natural transformations `M → M'` on sizes `0..=N`: all solutions of
/// `act_{M'}(U)·ψ_X = ψ_Y·act_M(U)` for every `U` between sets within the bound.
pub fn hom_solver(m: &FunctorRep, m2: &FunctorRep, exec: Execution) -> Result<HomSpace, FunctorError> {
    if m.bound() != m2.bound() {
        return Err(FunctorError::BoundMismatch(m.bound(), m2.bound()));
    }
    let n = m.bound();
    let shapes: Vec<(usize, usize)> = (0..=n).map(|k| (m2.dim(k), m.dim(k))).collect();
    let (blocks, total) = layout(&shapes);
    let mut cases: Vec<Correspondence> = Vec::new();
    for y in 0..=n {
        for x in 0..=n {
            cases.extend(enumerate_correspondences(y, x).map_err(|e| FunctorError::Invalid(e.to_string()))?);
        }
    }
    let seed: Vec<usize> = (0..cases.len()).filter(|&i| cases[i].target() <= 1 && cases[i].source() <= 1).collect();
    let make = |i: usize| {
        let u = &cases[i];
        Constraint {
            post: m2.act(u),
            src: u.source(),
            dst: u.target(),
            pre: m.act(u),
        }
    };
    let sol = solve_lazy(&blocks, total, cases.len(), make, &seed, exec);
    let basis = sol
        .basis
        .iter()
        .map(|v| Morphism {
            source: m.clone(),
            target: m2.clone(),
            components: blocks.iter().map(|b| block_matrix(b, v)).collect(),
        })
        .collect();
    Ok(HomSpace {
        source: m.clone(),
        target: m2.clone(),
        basis,
        exact: m.exact_at(n),
        constraints_used: sol.constraints_used,
        constraints_total: cases.len(),
        blocks,
        free: sol.free,
    })
}

/// A basis of bilinear pairings `M' × M → M''` on `x + y ≤ N`.
#[derive(Clone)]
pub struct PairingSpace {
    pub left: FunctorRep,
    pub right: FunctorRep,
    pub target: FunctorRep,
    pub basis: Vec<Pairing>,
}

impl PairingSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Pairing {
        let mut out = Pairing::zero(&self.left, &self.right, &self.target);
        for b in &self.basis {
            out = out.add(&b.scale(&Scalar::from(rng.gen_range(-5i64..=5))));
        }
        out
    }
}

/// All pairs `(x, y)` with `x + y ≤ n`, in lexicographic order.
pub(crate) fn pair_sizes(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|x| (0..=n - x).map(move |y| (x, y))).collect()
}

/// Solves for pairings `η_{X,Y}: M'(X) ⊗ M(Y) → M''(X ⊔ Y)` satisfying
/// `diag(U, V)·η_{X,Y} = η_{X',Y'}·(U ⊗ V)` for all `U, V` within the bound.
pub fn pairing_solver(
    left: &FunctorRep,
    right: &FunctorRep,
    target: &FunctorRep,
    exec: Execution,
) -> Result<PairingSpace, FunctorError> {
    let n = target.bound();
    if left.bound() != n || right.bound() != n {
        return Err(FunctorError::BoundMismatch(left.bound().min(right.bound()), n));
    }
    let sizes = pair_sizes(n);
    let index: BTreeMap<(usize, usize), usize> = sizes.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let shapes: Vec<(usize, usize)> = sizes
        .iter()
        .map(|&(x, y)| (target.dim(x + y), left.dim(x) * right.dim(y)))
        .collect();
    let (blocks, total) = layout(&shapes);
    let mut cases: Vec<(Correspondence, Correspondence)> = Vec::new();
    for &(x, y) in &sizes {
        for &(x2, y2) in &sizes {
            for u in enumerate_correspondences(x2, x).map_err(|e| FunctorError::Invalid(e.to_string()))? {
                for v in enumerate_correspondences(y2, y).map_err(|e| FunctorError::Invalid(e.to_string()))? {
                    cases.push((u.clone(), v));
                }
            }
        }
    }
    let seed: Vec<usize> = (0..cases.len())
        .filter(|&i| {
            let (u, v) = &cases[i];
            u.target() + v.target() <= 1 && u.source() + v.source() <= 1
        })
        .collect();
    let make = |i: usize| {
        let (u, v) = &cases[i];
        Constraint {
            post: target.act(&Correspondence::block_diag(u, v)),
            src: index[&(u.source(), v.source())],
            dst: index[&(u.target(), v.target())],
            pre: Arc::new(left.act(u).kron(&right.act(v))),
        }
    };
    let sol = solve_lazy(&blocks, total, cases.len(), make, &seed, exec);
    let basis = sol
        .basis
        .iter()
        .map(|v| Pairing {
            left: left.clone(),
            right: right.clone(),
            target: target.clone(),
            components: sizes
                .iter()
                .zip(&blocks)
                .map(|(s, b)| (*s, block_matrix(b, v)))
                .collect(),
        })
        .collect();
    Ok(PairingSpace {
        left: left.clone(),
        right: right.clone(),
        target: target.clone(),
        basis,
    })
}

/// `Hom(M' ⊗ M, M'')` solved directly, for comparison with pairings.
pub fn tensor_hom(
    left: &FunctorRep,
    right: &FunctorRep,
    target: &FunctorRep,
    exec: Execution,
) -> Result<HomSpace, FunctorError> {
    hom_solver(&tensor(left, right)?, target, exec)
}
