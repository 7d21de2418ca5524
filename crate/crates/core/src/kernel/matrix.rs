use std::fmt;
use std::sync::OnceLock;

use super::sparse::Accumulator;
use super::{Scalar, SparseVec};

/// Exact rational matrix stored column by column.
///
/// Most linear maps in this crate send basis vectors to basis vectors (or to
/// zero), so storage is sparse per column and such "basis maps" get a cached
/// index view that multiplication and comparisons short-circuit through.
#[derive(Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
    basis_map: OnceLock<Option<Vec<Option<usize>>>>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.columns == other.columns
    }
}

impl Eq for Matrix {}

impl Matrix {
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.support_bound() <= rows));
        Matrix {
            rows,
            cols: columns.len(),
            columns,
            basis_map: OnceLock::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_columns(rows, vec![SparseVec::new(); cols])
    }

    pub fn identity(n: usize) -> Self {
        let m = Self::from_columns(n, (0..n).map(SparseVec::unit).collect());
        let _ = m.basis_map.set(Some((0..n).map(Some).collect()));
        m
    }

    /// The matrix whose column `j` is `e_{map[j]}`, or zero for `None`.
    pub fn from_basis_map(rows: usize, map: Vec<Option<usize>>) -> Self {
        let columns = map
            .iter()
            .map(|t| match t {
                Some(i) => {
                    assert!(*i < rows, "basis map target {i} out of range {rows}");
                    SparseVec::unit(*i)
                }
                None => SparseVec::new(),
            })
            .collect();
        let m = Matrix {
            rows,
            cols: map.len(),
            columns,
            basis_map: OnceLock::new(),
        };
        let _ = m.basis_map.set(Some(map));
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut cols = vec![Vec::new(); c];
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                if !v.is_zero() {
                    cols[j].push((i, v));
                }
            }
        }
        Self::from_columns(r, cols.into_iter().map(SparseVec::from_sorted_unchecked).collect())
    }

    /// Convenience constructor from small integer rows.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from(v)).collect())
                .collect(),
        )
    }

    /// Builds a matrix from sparse row vectors of length `cols`.
    pub fn from_sparse_rows(cols: usize, rows: &[SparseVec]) -> Self {
        let mut columns = vec![Vec::new(); cols];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.entries() {
                columns[*j].push((i, v.clone()));
            }
        }
        Self::from_columns(
            rows.len(),
            columns.into_iter().map(SparseVec::from_sorted_unchecked).collect(),
        )
    }

    pub fn column_vector(values: &[Scalar]) -> Self {
        Self::from_columns(values.len(), vec![SparseVec::from_dense(values)])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.columns[j].get(i)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.columns.iter().enumerate().all(|(j, c)| c.as_unit() == Some(j))
    }

    /// Index view for matrices whose columns are all unit vectors or zero.
    pub fn basis_map(&self) -> Option<&[Option<usize>]> {
        self.basis_map
            .get_or_init(|| {
                self.columns
                    .iter()
                    .map(|c| {
                        if c.is_zero() {
                            Some(None)
                        } else {
                            c.as_unit().map(Some)
                        }
                    })
                    .collect()
            })
            .as_deref()
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::ZERO; self.cols]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.entries() {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    /// The rows as sparse vectors of length `cols`.
    pub fn sparse_rows(&self) -> Vec<SparseVec> {
        let mut rows = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.entries() {
                rows[*i].push((j, v.clone()));
            }
        }
        rows.into_iter().map(SparseVec::from_sorted_unchecked).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_columns(self.cols, self.sparse_rows())
    }

    /// `self · v` for a sparse column vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        if let Some(i) = v.as_unit() {
            return self.columns[i].clone();
        }
        if let Some(map) = self.basis_map() {
            return SparseVec::from_pairs(
                v.entries()
                    .iter()
                    .filter_map(|(j, c)| map[*j].map(|i| (i, c.clone()))),
            );
        }
        let mut acc = Accumulator::new(self.rows);
        for (j, c) in v.entries() {
            acc.add_scaled(c, &self.columns[*j]);
        }
        acc.take()
    }

    /// Matrix product `self · other`. Panics on a shape mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {:?} · {:?}",
            self.shape(),
            other.shape()
        );
        if let (Some(a), Some(b)) = (self.basis_map(), other.basis_map()) {
            let map = b.iter().map(|j| j.and_then(|j| a[j])).collect();
            return Matrix::from_basis_map(self.rows, map);
        }
        let mut acc = Accumulator::new(self.rows);
        let columns = other
            .columns
            .iter()
            .map(|col| {
                if let Some(i) = col.as_unit() {
                    return self.columns[i].clone();
                }
                for (k, c) in col.entries() {
                    acc.add_scaled(c, &self.columns[*k]);
                }
                acc.take()
            })
            .collect();
        Matrix::from_columns(self.rows, columns)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        Matrix::from_columns(
            self.rows,
            self.columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        Matrix::from_columns(
            self.rows,
            self.columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_columns(self.rows, self.columns.iter().map(|v| v.scale(c)).collect())
    }

    /// Kronecker product; basis index of `e_i ⊗ f_j` is `i * dim_f + j`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r2, c2) = other.shape();
        if let (Some(a), Some(b)) = (self.basis_map(), other.basis_map()) {
            let mut map = Vec::with_capacity(self.cols * c2);
            for ja in a {
                for jb in b {
                    map.push(match (ja, jb) {
                        (Some(x), Some(y)) => Some(x * r2 + y),
                        _ => None,
                    });
                }
            }
            return Matrix::from_basis_map(self.rows * r2, map);
        }
        let mut columns = Vec::with_capacity(self.cols * c2);
        for ca in &self.columns {
            for cb in &other.columns {
                columns.push(ca.kron(cb, r2));
            }
        }
        Matrix::from_columns(self.rows * r2, columns)
    }

    /// Block diagonal sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut columns = self.columns.clone();
        columns.extend(
            other
                .columns
                .iter()
                .map(|c| c.map_indices(|i| i + self.rows)),
        );
        Matrix::from_columns(self.rows + other.rows, columns)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hconcat row mismatch");
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Matrix::from_columns(self.rows, columns)
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_columns(self.rows, cols.iter().map(|&j| self.columns[j].clone()).collect())
    }

    /// A position where `self` and `other` differ, if any.
    pub fn first_difference(&self, other: &Matrix) -> Option<(usize, usize)> {
        if self.shape() != other.shape() {
            return Some((usize::MAX, usize::MAX));
        }
        for (j, (a, b)) in self.columns.iter().zip(&other.columns).enumerate() {
            if a != b {
                let d = a.sub(b);
                let i = d.leading().map_or(0, |(i, _)| *i);
                return Some((i, j));
            }
        }
        None
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        if self.rows * self.cols <= 64 {
            f.debug_list().entries(self.to_dense()).finish()
        } else {
            write!(f, "(nnz {})", self.nnz())
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_dense() {
        let a = Matrix::from_i64_rows(&[&[1, 2], &[0, 3]]);
        let b = Matrix::from_i64_rows(&[&[4, 0, 1], &[1, -1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_i64_rows(&[&[6, -2, 1], &[3, -3, 0]]));
    }

    #[test]
    fn basis_map_fast_path_agrees() {
        let a = Matrix::from_basis_map(3, vec![Some(2), None, Some(0)]);
        let b = Matrix::from_basis_map(3, vec![Some(1), Some(2), Some(1)]);
        let fast = a.mul(&b);
        let slow = Matrix::from_rows(a.to_dense()).mul(&Matrix::from_rows(b.to_dense()));
        assert_eq!(fast, slow);
        assert_eq!(a.kron(&b), Matrix::from_rows(a.to_dense()).kron(&Matrix::from_rows(b.to_dense())));
    }

    #[test]
    fn kron_index_convention() {
        let a = Matrix::from_i64_rows(&[&[1, 2]]);
        let b = Matrix::from_i64_rows(&[&[0], &[1]]);
        assert_eq!(a.kron(&b), Matrix::from_i64_rows(&[&[0, 0], &[1, 2]]));
    }

    #[test]
    fn transpose_twice() {
        let a = Matrix::from_i64_rows(&[&[1, 0, 5], &[0, 7, 0]]);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().shape(), (3, 2));
    }
}
