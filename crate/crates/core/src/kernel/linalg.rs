//! Exact elimination: echelon forms, kernels, solving, inversion, quotients.

use super::sparse::Accumulator;
use super::{KernelError, Matrix, Scalar, SparseVec};

/// Incrementally maintained reduced row echelon form.
///
/// Every stored row has a leading coefficient of one at its pivot column and
/// is zero at every other row's pivot column. Pivots are taken as the first
/// nonzero entry of a row after reduction, so the final form does not depend
/// on insertion order.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<Option<usize>>,
}

impl RowEchelon {
    pub fn new(ncols: usize) -> Self {
        RowEchelon {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseVec> {
        self.pivot_row[col].map(|r| &self.rows[r])
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    /// Non-pivot columns in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_none()).collect()
    }

    /// Residue of `v` modulo the current row space.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, &Scalar)> = v
            .entries()
            .iter()
            .filter_map(|(c, x)| self.pivot_row[*c].map(|r| (r, x)))
            .collect();
        if hits.is_empty() {
            return v.clone();
        }
        if hits.len() == 1 {
            let (r, x) = hits[0];
            return v.add_scaled(&-x, &self.rows[r]);
        }
        let mut acc = Accumulator::new(self.ncols);
        acc.add_scaled(&Scalar::ONE, v);
        for (r, x) in hits {
            acc.add_scaled(&-x, &self.rows[r]);
        }
        acc.take()
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        debug_assert!(v.support_bound() <= self.ncols);
        let r = self.reduce(v);
        let Some((p, lead)) = r.leading().cloned() else {
            return false;
        };
        let r = if lead.is_one() {
            r
        } else {
            r.scale(&lead.recip().expect("nonzero pivot"))
        };
        for row in &mut self.rows {
            let c = row.get(p);
            if !c.is_zero() {
                *row = row.add_scaled(&-c, &r);
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Basis of the solution space of `row · x = 0` for every stored row,
    /// one vector per free column (value one there, zero at other free columns).
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let free = self.free_columns();
        let mut slot = vec![usize::MAX; self.ncols];
        for (k, &f) in free.iter().enumerate() {
            slot[f] = k;
        }
        let mut parts: Vec<Vec<(usize, Scalar)>> =
            free.iter().map(|&f| vec![(f, Scalar::ONE)]).collect();
        for (col, pr) in self.pivot_row.iter().enumerate() {
            let Some(r) = pr else { continue };
            for (f, c) in self.rows[*r].entries() {
                if *f != col {
                    parts[slot[*f]].push((col, -c));
                }
            }
        }
        parts.into_iter().map(SparseVec::from_pairs).collect()
    }
}

/// Rank of a matrix.
pub fn rank(a: &Matrix) -> usize {
    let mut ech = RowEchelon::new(a.cols());
    for row in a.sparse_rows() {
        ech.insert(&row);
    }
    ech.rank()
}

/// Solves `a · x = b`; `None` when the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, KernelError> {
    if a.rows() != b.len() {
        return Err(KernelError::ShapeMismatch {
            op: "solve_linear",
            left: a.shape(),
            right: (b.len(), 1),
        });
    }
    let n = a.cols();
    let mut ech = RowEchelon::new(n + 1);
    for (row, rhs) in a.sparse_rows().into_iter().zip(b) {
        let aug = row.add(&SparseVec::scaled_unit(n, rhs.clone()));
        ech.insert(&aug);
    }
    if ech.is_pivot(n) {
        return Ok(None);
    }
    let mut x = vec![Scalar::ZERO; n];
    for p in ech.pivots() {
        x[p] = ech.pivot_row(p).expect("pivot").get(n);
    }
    Ok(Some(x))
}

/// Basis of the null space of `a`.
pub fn kernel_basis(a: &Matrix) -> Vec<SparseVec> {
    let mut ech = RowEchelon::new(a.cols());
    for row in a.sparse_rows() {
        ech.insert(&row);
    }
    ech.kernel_basis()
}

/// Exact inverse of a square matrix.
pub fn invert(a: &Matrix) -> Result<Matrix, KernelError> {
    if !a.is_square() {
        return Err(KernelError::NotSquare(a.shape()));
    }
    let n = a.rows();
    if let Some(map) = a.basis_map() {
        // Permutation matrices invert by transposition.
        let mut inv = vec![None; n];
        for (j, t) in map.iter().enumerate() {
            match t {
                Some(i) if inv[*i].is_none() => inv[*i] = Some(j),
                _ => return Err(KernelError::NotInvertible),
            }
        }
        return Ok(Matrix::from_basis_map(n, inv));
    }
    let mut ech = RowEchelon::new(2 * n);
    for (i, row) in a.sparse_rows().into_iter().enumerate() {
        let aug = row.add(&SparseVec::unit(n + i));
        ech.insert(&aug);
    }
    if (0..n).any(|c| !ech.is_pivot(c)) {
        return Err(KernelError::NotInvertible);
    }
    let inv_rows: Vec<SparseVec> = (0..n)
        .map(|p| {
            let row = ech.pivot_row(p).expect("pivot");
            SparseVec::from_sorted_unchecked(
                row.entries()
                    .iter()
                    .filter(|(c, _)| *c >= n)
                    .map(|(c, v)| (c - n, v.clone()))
                    .collect(),
            )
        })
        .collect();
    Ok(Matrix::from_sparse_rows(n, &inv_rows))
}

/// A free quotient `k^n / span(relators)` with a chosen splitting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    /// `dim × ambient` map onto the quotient.
    pub projection: Matrix,
    /// `ambient × dim` right inverse of the projection.
    pub section: Matrix,
    /// Ambient coordinates used as the quotient basis (the free columns).
    pub basis: Vec<usize>,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.projection.cols()
    }
}

/// Presents `k^ambient_dim / span(relators)` as a free module.
///
/// The quotient basis is indexed by the free columns of the reduced echelon
/// form of the relators, so the result is canonical: it depends only on the
/// span of the relators, not on their order or on the method used.
pub fn quotient_presentation(
    ambient_dim: usize,
    relators: &[SparseVec],
) -> Result<Quotient, KernelError> {
    if let Some(bad) = relators.iter().find(|r| r.support_bound() > ambient_dim) {
        return Err(KernelError::ShapeMismatch {
            op: "quotient_presentation",
            left: (ambient_dim, 1),
            right: (bad.support_bound(), 1),
        });
    }
    if relators.iter().all(is_binomial) {
        return Ok(binomial_quotient(ambient_dim, relators));
    }
    Ok(echelon_quotient(ambient_dim, relators))
}

/// Relators of the shape `c·e_a`, `c·(e_a − e_b)`, or zero.
fn is_binomial(r: &SparseVec) -> bool {
    match r.entries() {
        [] | [_] => true,
        [(_, x), (_, y)] => (x + y).is_zero(),
        _ => false,
    }
}

pub(crate) fn echelon_quotient(ambient_dim: usize, relators: &[SparseVec]) -> Quotient {
    let mut ech = RowEchelon::new(ambient_dim);
    for r in relators {
        ech.insert(r);
    }
    let basis = ech.free_columns();
    let mut slot = vec![usize::MAX; ambient_dim];
    for (k, &f) in basis.iter().enumerate() {
        slot[f] = k;
    }
    let proj_cols = (0..ambient_dim)
        .map(|j| match ech.pivot_row(j) {
            None => SparseVec::unit(slot[j]),
            Some(row) => SparseVec::from_sorted_unchecked(
                row.entries()
                    .iter()
                    .filter(|(c, _)| *c != j)
                    .map(|(c, v)| (slot[*c], -v))
                    .collect(),
            ),
        })
        .collect();
    quotient_from_parts(ambient_dim, basis, proj_cols)
}

/// Union-find evaluation of a quotient by binomial relators. The class of a
/// surviving component is its largest index, which is exactly the free column
/// the echelon form would pick.
fn binomial_quotient(ambient_dim: usize, relators: &[SparseVec]) -> Quotient {
    let mut parent: Vec<usize> = (0..ambient_dim).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut killed = vec![false; ambient_dim];
    for r in relators {
        match r.entries() {
            [] => {}
            [(a, _)] => killed[*a] = true,
            [(a, _), (b, _)] => {
                let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
                if ra != rb {
                    // Keep the larger index as the root.
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent[lo] = hi;
                }
            }
            _ => unreachable!("non-binomial relator"),
        }
    }
    let mut root_killed = vec![false; ambient_dim];
    for x in 0..ambient_dim {
        if killed[x] {
            let r = find(&mut parent, x);
            root_killed[r] = true;
        }
    }
    let roots: Vec<usize> = (0..ambient_dim).map(|x| find(&mut parent, x)).collect();
    let basis: Vec<usize> = (0..ambient_dim)
        .filter(|&x| roots[x] == x && !root_killed[x])
        .collect();
    let mut slot = vec![usize::MAX; ambient_dim];
    for (k, &f) in basis.iter().enumerate() {
        slot[f] = k;
    }
    let proj_map: Vec<Option<usize>> = roots
        .iter()
        .map(|&r| if root_killed[r] { None } else { Some(slot[r]) })
        .collect();
    let dim = basis.len();
    let section = Matrix::from_basis_map(ambient_dim, basis.iter().map(|&b| Some(b)).collect());
    Quotient {
        projection: Matrix::from_basis_map(dim, proj_map),
        section,
        basis,
    }
}

fn quotient_from_parts(ambient_dim: usize, basis: Vec<usize>, proj_cols: Vec<SparseVec>) -> Quotient {
    let dim = basis.len();
    let section = Matrix::from_basis_map(ambient_dim, basis.iter().map(|&b| Some(b)).collect());
    Quotient {
        projection: Matrix::from_columns(dim, proj_cols),
        section,
        basis,
    }
}
