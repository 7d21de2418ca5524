//! Primitive idempotents of a split commutative algebra over ℚ, by refining a
//! decomposition into simultaneous eigenspaces of the multiplication operators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{AlgebraError, AlgebraFunctorRep};
use crate::kernel::{kernel_basis, solve_linear, Matrix, Scalar, SparseVec};

/// Orthogonal idempotents of `A(•)` summing to the unit, sorted by coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBasis {
    pub idempotents: Vec<SparseVec>,
    pub labels: Vec<usize>,
}

impl SplitBasis {
    pub fn len(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idempotents.is_empty()
    }
}

/// Coefficients `c_0, …, c_k` of `det(λI − M) = Σ c_i λ^i`, by Faddeev–LeVerrier.
pub fn characteristic_polynomial(m: &Matrix) -> Vec<Scalar> {
    assert!(m.is_square());
    let k = m.rows();
    let a = m.to_dense();
    let mut c = vec![Scalar::ZERO; k + 1];
    c[k] = Scalar::ONE;
    // M_0 = 0; M_i = A·M_{i−1} + c_{k−i+1}·I; c_{k−i} = −tr(A·M_i)/i.
    let mut mi = vec![vec![Scalar::ZERO; k]; k];
    for i in 1..=k {
        let mut next = mat_mul(&a, &mi);
        for (d, row) in next.iter_mut().enumerate() {
            row[d] += &c[k - i + 1];
        }
        mi = next;
        let am = mat_mul(&a, &mi);
        let trace: Scalar = (0..k).map(|d| am[d][d].clone()).sum();
        c[k - i] = -(trace / Scalar::from(i));
    }
    c
}

fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let k = a.len();
    let mut out = vec![vec![Scalar::ZERO; k]; k];
    for i in 0..k {
        for (l, ail) in a[i].iter().enumerate() {
            if ail.is_zero() {
                continue;
            }
            for j in 0..k {
                if !b[l][j].is_zero() {
                    out[i][j] += &(ail * &b[l][j]);
                }
            }
        }
    }
    out
}

fn divisors(n: &BigInt) -> Result<Vec<u64>, String> {
    let n = n.abs().to_u64().ok_or_else(|| format!("coefficient {n} too large for the rational-root search"))?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

fn evaluate(poly: &[Scalar], x: &Scalar) -> Scalar {
    poly.iter().rev().fold(Scalar::ZERO, |acc, c| acc * x + c)
}

/// Distinct rational roots, sorted, by the rational-root theorem on the
/// polynomial cleared of denominators.
pub fn rational_roots(poly: &[Scalar]) -> Result<Vec<Scalar>, String> {
    let mut coeffs: Vec<Scalar> = poly.to_vec();
    while coeffs.last().is_some_and(Scalar::is_zero) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Ok(Vec::new());
    }
    let mut roots = Vec::new();
    let low = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    if low > 0 {
        roots.push(Scalar::ZERO);
        coeffs.drain(..low);
    }
    if coeffs.len() > 1 {
        let lcm = coeffs.iter().fold(BigInt::from(1), |l, c| l.lcm(&c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let (c0, lead) = (&ints[0], ints.last().expect("nonempty"));
        debug_assert!(!c0.is_zero());
        for p in divisors(c0)? {
            for q in divisors(lead)? {
                if p.gcd(&q) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let r = Scalar::from_ratio(BigInt::from(p) * sign, BigInt::from(q));
                    if evaluate(&coeffs, &r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Coordinates of the columns of `image` in the basis `block` (full column rank).
fn restrict(block: &Matrix, image: &Matrix) -> Result<Matrix, AlgebraError> {
    let cols = image
        .columns()
        .iter()
        .map(|c| {
            let rhs = c.to_dense(block.rows());
            solve_linear(block, &rhs)?
                .map(|x| SparseVec::from_dense(&x))
                .ok_or_else(|| AlgebraError::NotCommutative("a block is not stable under multiplication".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_columns(block.cols(), cols))
}

/// Splits `A(•)` into primitive orthogonal idempotents.
///
/// Each block of the current decomposition is stable under every multiplication
/// operator `L_b`. It is replaced by the eigenspaces of `L_b` on it; if those
/// do not fill the block the algebra is not split over ℚ.
pub fn split_idempotents(a: &AlgebraFunctorRep) -> Result<SplitBasis, AlgebraError> {
    if a.bound() < 1 || a.dim(1) == 0 {
        return Err(AlgebraError::Shape("A(•) must be defined and nonzero".into()));
    }
    let d = a.dim(1);
    let e = SparseVec::unit;
    for i in 0..d {
        for j in i + 1..d {
            if a.product(1, &e(i), &e(j)) != a.product(1, &e(j), &e(i)) {
                return Err(AlgebraError::NotCommutative(format!("e{i}·e{j} ≠ e{j}·e{i} in A(•)")));
            }
        }
    }
    let mut blocks = vec![Matrix::identity(d)];
    for b in 0..d {
        let lb = Matrix::from_columns(d, (0..d).map(|j| a.product(1, &e(b), &e(j))).collect());
        let mut next = Vec::new();
        for block in blocks {
            if block.cols() == 1 {
                next.push(block);
                continue;
            }
            let k = block.cols();
            let m = restrict(&block, &lb.mul(&block))?;
            let roots = rational_roots(&characteristic_polynomial(&m)).map_err(AlgebraError::NotSplit)?;
            let mut filled = 0;
            for r in roots {
                let shifted = m.sub(&Matrix::identity(k).scale(&r));
                let kernel = kernel_basis(&shifted);
                filled += kernel.len();
                next.push(block.mul(&Matrix::from_columns(k, kernel)));
            }
            if filled != k {
                return Err(AlgebraError::NotSplit(format!(
                    "multiplication by e{b} has rational eigenspaces of total dimension {filled} on a block of dimension {k}"
                )));
            }
        }
        blocks = next;
    }
    let mut idempotents = Vec::with_capacity(blocks.len());
    for block in &blocks {
        if block.cols() != 1 {
            return Err(AlgebraError::NotSplit(format!(
                "a block of dimension {} is not separated by any multiplication operator",
                block.cols()
            )));
        }
        let s = block.column(0);
        let sq = a.product(1, s, s);
        // s² = α·s on a one-dimensional stable block; e = s/α.
        let alpha = solve_linear(block, &sq.to_dense(d))?
            .map(|x| x[0].clone())
            .ok_or_else(|| AlgebraError::NotCommutative("s² leaves the span of s".into()))?;
        let inv = alpha
            .recip()
            .ok_or_else(|| AlgebraError::NotSplit("a block squares to zero (nilpotent element)".into()))?;
        idempotents.push(s.scale(&inv));
    }
    idempotents.sort_by(|x, y| x.entries().cmp(y.entries()));
    let sum = idempotents.iter().fold(SparseVec::new(), |acc, f| acc.add(f));
    if sum != a.unit[1] {
        return Err(AlgebraError::NotSplit("the idempotents do not sum to the unit".into()));
    }
    for (i, f) in idempotents.iter().enumerate() {
        for (j, g) in idempotents.iter().enumerate().skip(i) {
            let p = a.product(1, f, g);
            if (i == j && p != *f) || (i != j && !p.is_zero()) {
                return Err(AlgebraError::NotSplit(format!("f{i}·f{j} has the wrong value")));
            }
        }
    }
    let labels = (0..idempotents.len()).collect();
    Ok(SplitBasis { idempotents, labels })
}
