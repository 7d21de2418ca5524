//! The comultiplication `δ_• = μ̂_{•,•}⁻¹ ∘ act(Δ;Δ)` and counit `η_• = act(∅)` on `A(•)`.

use super::{hypothesis, mu_hat, AlgebraError, AlgebraFunctorRep};
use crate::kernel::{invert, Matrix, Scalar, SparseVec};
use crate::relations::Correspondence;

/// `δ_•: A(•) → A(•) ⊗ A(•)`, of shape `d² × d`.
pub fn comultiplication(a: &AlgebraFunctorRep) -> Result<Matrix, AlgebraError> {
    if a.bound() < 2 {
        return Err(hypothesis("bound", "the comultiplication needs sets of size 2"));
    }
    let inv = invert(&mu_hat(a, 1, 1)?)?;
    let diag = Correspondence::stack(&Correspondence::identity(1), &Correspondence::identity(1)).expect("shapes");
    Ok(inv.mul(&a.act(&diag)))
}

/// `η_•: A(•) → A(∅) ≅ k` as the coefficients `η(e_i)`, with `A(∅)`
/// identified with `k` by sending its unit to 1.
pub fn counit(a: &AlgebraFunctorRep) -> Result<Vec<Scalar>, AlgebraError> {
    if a.bound() < 1 || a.dim(0) != 1 {
        return Err(hypothesis("exponential", "dim A(∅) must be 1"));
    }
    let unit = a.unit[0]
        .get(0)
        .recip()
        .ok_or_else(|| hypothesis("exponential", "the unit of A(∅) is zero"))?;
    let row = a.act(&Correspondence::empty(0, 1));
    Ok((0..a.dim(1)).map(|i| row.column(i).get(0) * &unit).collect())
}

fn swap_tensor(d: usize) -> Matrix {
    Matrix::from_basis_map(d * d, (0..d * d).map(|k| Some((k % d) * d + k / d)).collect())
}

/// `μδ = I`, coassociativity, cocommutativity, `δ` multiplicative and `δ(1) = 1 ⊗ 1`.
/// Returns the number of identities checked.
pub fn check_comultiplication(a: &AlgebraFunctorRep, delta: &Matrix) -> Result<usize, String> {
    let d = a.dim(1);
    let id = Matrix::identity(d);
    if !a.mul[1].mul(delta).is_identity() {
        return Err("μ∘δ ≠ id".into());
    }
    if delta.kron(&id).mul(delta) != id.kron(delta).mul(delta) {
        return Err("δ is not coassociative".into());
    }
    if swap_tensor(d).mul(delta) != *delta {
        return Err("δ is not cocommutative".into());
    }
    // (a⊗b)(c⊗e) = ac ⊗ be: reorder (a⊗b)⊗(c⊗e) to (a⊗c)⊗(b⊗e) and multiply.
    let dd = d * d;
    let shuffle = Matrix::from_basis_map(
        dd * dd,
        (0..dd * dd)
            .map(|k| {
                let (ab, ce) = (k / dd, k % dd);
                let (x, b, c, e) = (ab / d, ab % d, ce / d, ce % d);
                Some((x * d + c) * dd + b * d + e)
            })
            .collect(),
    );
    let mul2 = a.mul[1].kron(&a.mul[1]).mul(&shuffle);
    if delta.mul(&a.mul[1]) != mul2.mul(&delta.kron(delta)) {
        return Err("δ is not multiplicative".into());
    }
    let one = &a.unit[1];
    if delta.apply(one) != one.kron(one, d) {
        return Err("δ(1) ≠ 1 ⊗ 1".into());
    }
    Ok(5)
}

fn eta_of(eta: &[Scalar], v: &SparseVec) -> Scalar {
    v.dot_dense(eta)
}

/// `(η ⊗ I)δ = I`, `(I ⊗ η)δ = I`, `η` multiplicative and `η(1) = 1`.
pub fn check_counit(a: &AlgebraFunctorRep, delta: &Matrix, eta: &[Scalar]) -> Result<usize, String> {
    let d = a.dim(1);
    let eta_row = SparseVec::from_dense(eta);
    let left = Matrix::from_sparse_rows(d, std::slice::from_ref(&eta_row)).kron(&Matrix::identity(d));
    let right = Matrix::identity(d).kron(&Matrix::from_sparse_rows(d, &[eta_row]));
    if !left.mul(delta).is_identity() {
        return Err("(η⊗id)∘δ ≠ id".into());
    }
    if !right.mul(delta).is_identity() {
        return Err("(id⊗η)∘δ ≠ id".into());
    }
    let e = SparseVec::unit;
    for i in 0..d {
        for j in i..d {
            if eta_of(eta, &a.product(1, &e(i), &e(j))) != &eta[i] * &eta[j] {
                return Err(format!("η(e{i}·e{j}) ≠ η(e{i})η(e{j})"));
            }
        }
    }
    if !eta_of(eta, &a.unit[1]).is_one() {
        return Err("η(1) ≠ 1".into());
    }
    Ok(3 + d * (d + 1) / 2)
}
