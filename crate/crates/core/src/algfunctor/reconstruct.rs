//! Recovering a lattice `T` with `A ≅ F_T` from an algebra functor with the
//! exponential and splitting properties, following the proof step by step.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    algebra_ft, check_comultiplication, check_counit, check_exponential, comultiplication, counit, hypothesis,
    is_invertible, split_idempotents, AlgebraError, AlgebraFunctorRep, SplitBasis,
};
use crate::functors::check_intertwines;
use crate::kernel::{invert, Matrix, Scalar, SparseVec};
use crate::lattices::Lattice;
use crate::relations::{enumerate_correspondences, Correspondence};
use crate::sweep::{run_cases, CaseCount};
use crate::theorems::{run_report, SweepConfig, VerificationReport};

/// Per-size basis pairs checked for `λ` multiplicative beyond the exhaustive sizes.
const LAMBDA_SAMPLED_PAIRS: usize = 200;

/// The output of [`reconstruct_lattice`]. Element `t` of `lattice` is the
/// idempotent `split.idempotents[t]`.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub lattice: Lattice,
    pub split: SplitBasis,
    pub delta: Matrix,
    pub eta: Vec<Scalar>,
    /// `g_t = Σ_{s ≥ t} f_s`.
    pub g: Vec<SparseVec>,
    /// `λ_X: F_T(X) → A(X)` for every size in range.
    pub lambda: Vec<Matrix>,
    pub checked: CaseCount,
}

/// Runs the reconstruction, failing with the first violated hypothesis.
pub fn reconstruct_lattice(a: &AlgebraFunctorRep, cfg: &SweepConfig) -> Result<Reconstruction, AlgebraError> {
    let mut checked = CaseCount::default();
    let exp = check_exponential(a);
    if let Some(w) = exp.witness {
        return Err(hypothesis("exponential", w));
    }
    checked.exhaustive += exp.checked_cases;
    let split = split_idempotents(a)?;
    let f = &split.idempotents;
    let n = f.len();
    let d = a.dim(1);

    let delta = comultiplication(a)?;
    checked.exhaustive += check_comultiplication(a, &delta).map_err(|w| hypothesis("comultiplication", w))?;
    let basis = Matrix::from_columns(d, f.clone());
    let to_ff = invert(&basis.kron(&basis))?;
    let mut owner: Vec<Option<usize>> = vec![None; n * n];
    for (t, ft) in f.iter().enumerate() {
        let coords = to_ff.apply(&delta.apply(ft));
        for (k, c) in coords.entries() {
            if !c.is_one() {
                return Err(hypothesis(
                    "0/1 coefficients",
                    format!("δ(f{t}) has coefficient {c} on f{}⊗f{}", k / n, k % n),
                ));
            }
            if let Some(s) = owner[*k].replace(t) {
                return Err(hypothesis("partition", format!("f{}⊗f{} occurs in δ(f{s}) and δ(f{t})", k / n, k % n)));
            }
        }
    }
    let meet: Vec<usize> = owner
        .iter()
        .enumerate()
        .map(|(k, o)| o.ok_or_else(|| hypothesis("partition", format!("f{}⊗f{} occurs in no δ(f_t)", k / n, k % n))))
        .collect::<Result<_, _>>()?;
    let m = |x: usize, y: usize| meet[x * n + y];
    for x in 0..n {
        if m(x, x) != x {
            return Err(hypothesis("meet semilattice", format!("{x} ∧ {x} = {}", m(x, x))));
        }
        for y in 0..n {
            if m(x, y) != m(y, x) {
                return Err(hypothesis("meet semilattice", format!("{x} ∧ {y} ≠ {y} ∧ {x}")));
            }
            for z in 0..n {
                if m(m(x, y), z) != m(x, m(y, z)) {
                    return Err(hypothesis("meet semilattice", format!("∧ is not associative on {x}, {y}, {z}")));
                }
            }
        }
    }
    checked.exhaustive += n * n * n;

    let eta = counit(a)?;
    checked.exhaustive += check_counit(a, &delta, &eta).map_err(|w| hypothesis("counit", w))?;
    let mut top = None;
    for (t, ft) in f.iter().enumerate() {
        let v = ft.dot_dense(&eta);
        if v.is_one() {
            if let Some(u) = top.replace(t) {
                return Err(hypothesis("counit", format!("η(f{u}) = η(f{t}) = 1")));
            }
        } else if !v.is_zero() {
            return Err(hypothesis("counit", format!("η(f{t}) = {v}")));
        }
    }
    let u = top.ok_or_else(|| hypothesis("counit", "no idempotent has η = 1"))?;
    if let Some(t) = (0..n).find(|&t| m(u, t) != t) {
        return Err(hypothesis("top", format!("{t} is not below the counit element {u}")));
    }

    let leq: Vec<bool> = (0..n * n).map(|k| m(k / n, k % n) == k / n).collect();
    let lattice = Lattice::from_order(n, leq).map_err(|e| hypothesis("lattice", e.to_string()))?;
    for x in 0..n {
        for y in 0..n {
            // The join is the meet of all common upper bounds, nonempty because of the top.
            let j = (0..n)
                .filter(|&c| lattice.leq(x, c) && lattice.leq(y, c))
                .fold(u, &m);
            if !lattice.leq(x, j) || !lattice.leq(y, j) || lattice.join(x, y) != j {
                return Err(hypothesis("lattice", format!("no join for {x} and {y}")));
            }
            if lattice.meet(x, y) != m(x, y) {
                return Err(hypothesis("lattice", format!("order meet of {x} and {y} differs from δ")));
            }
        }
    }

    let g: Vec<SparseVec> = (0..n)
        .map(|t| (0..n).filter(|&s| lattice.leq(t, s)).fold(SparseVec::new(), |acc, s| acc.add(&f[s])))
        .collect();
    if g[lattice.bottom()] != a.unit[1] {
        return Err(hypothesis("g-basis", "g at the bottom is not the unit"));
    }
    for x in 0..n {
        for y in 0..n {
            if a.product(1, &g[x], &g[y]) != g[lattice.join(x, y)] {
                return Err(hypothesis("g-basis", format!("g{x}·g{y} ≠ g of the join")));
            }
        }
    }
    checked.exhaustive += n * n + 1;

    let lambda = build_lambda(a, n, &g)?;
    let ft = algebra_ft(Arc::new(lattice.clone()), a.bound());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (k, l) in lambda.iter().enumerate() {
        if !is_invertible(l) {
            return Err(hypothesis("λ invertible", format!("λ at size {k} is singular")));
        }
        if l.apply(&ft.unit[k]) != a.unit[k] {
            return Err(hypothesis("λ algebra map", format!("λ does not preserve the unit at size {k}")));
        }
        let dk = l.cols();
        let pairs: Vec<(usize, usize)> = if k <= 2 {
            checked.exhaustive += dk * dk;
            (0..dk * dk).map(|p| (p / dk, p % dk)).collect()
        } else {
            checked.random += LAMBDA_SAMPLED_PAIRS;
            (0..LAMBDA_SAMPLED_PAIRS).map(|_| (rng.gen_range(0..dk), rng.gen_range(0..dk))).collect()
        };
        run_cases(cfg.exec, &pairs, |&(i, j)| {
            let left = l.apply(ft.mul[k].column(i * dk + j));
            if left == a.product(k, l.column(i), l.column(j)) {
                Ok(())
            } else {
                Err(format!("λ(e{i}·e{j}) ≠ λ(e{i})·λ(e{j}) at size {k}"))
            }
        })
        .map_err(|(_, w)| hypothesis("λ algebra map", w))?;
    }
    let (cases, count) = cfg.plan(a.bound()).correspondences();
    check_intertwines(&ft.carrier, &a.carrier, &lambda, &cases, cfg.exec)
        .map_err(|w| hypothesis("λ natural", w))?;
    checked = checked + count;
    Ok(Reconstruction {
        lattice,
        split,
        delta,
        eta,
        g,
        lambda,
        checked,
    })
}

/// `λ_X(φ) = Π_x C_x g_{φ(x)}` with `C_x = {(x, •)}`; the empty product is the unit.
fn build_lambda(a: &AlgebraFunctorRep, t: usize, g: &[SparseVec]) -> Result<Vec<Matrix>, AlgebraError> {
    let mut out = Vec::with_capacity(a.bound() + 1);
    for k in 0..=a.bound() {
        let images: Vec<Vec<SparseVec>> = (0..k)
            .map(|x| {
                let c = a.act(&Correspondence::from_pairs(k, 1, &[(x, 0)]));
                g.iter().map(|gt| c.apply(gt)).collect()
            })
            .collect();
        let cols = (0..t.pow(k as u32))
            .map(|mut idx| {
                let mut v = a.unit[k].clone();
                for img in &images {
                    v = a.product(k, &v, &img[idx % t]);
                    idx /= t;
                }
                v
            })
            .collect();
        let l = Matrix::from_columns(a.dim(k), cols);
        if !l.is_square() {
            return Err(hypothesis("λ invertible", format!("dim A at size {k} is {} but |T|^{k} = {}", a.dim(k), l.cols())));
        }
        out.push(l);
    }
    Ok(out)
}

/// Matches the recovered idempotents with the `f_t` of a known lattice whose
/// functor is the input, and checks the relabeling carries meets to meets.
/// Returns `perm` with recovered element `i` corresponding to `perm[i]` in `t`.
pub fn match_reference(r: &Reconstruction, t: &Lattice) -> Result<Vec<usize>, String> {
    let n = t.size();
    if r.lattice.size() != n {
        return Err(format!("recovered {} elements, expected {n}", r.lattice.size()));
    }
    // In F_T(•) the basis functions are the g_s, so these are the f_t coordinates.
    let reference = t.idempotent_basis().f_in_g;
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for (i, f) in r.split.idempotents.iter().enumerate() {
        let s = (0..n)
            .find(|&s| !used[s] && reference.column(s) == f)
            .ok_or_else(|| format!("recovered idempotent {i} matches no f_t"))?;
        used[s] = true;
        perm.push(s);
    }
    for x in 0..n {
        for y in 0..n {
            if perm[r.lattice.meet(x, y)] != t.meet(perm[x], perm[y]) {
                return Err(format!("meet of {x} and {y} is not preserved by the relabeling"));
            }
        }
    }
    if perm[r.lattice.top()] != t.top() {
        return Err("the counit element is not the top".into());
    }
    Ok(perm)
}

/// The round trip `reconstruct(F_T) ≅ T`: validation of `F_T` as an algebra
/// functor, reconstruction with every check, and the meet-table comparison.
pub fn verify_reconstruction(t: &Arc<Lattice>, label: &str, bound: usize, cfg: &SweepConfig) -> VerificationReport {
    run_report("reconstruction", label.to_string(), bound, |tally| {
        let a = algebra_ft(t.clone(), bound);
        tally.add(a.validate(cfg).map_err(|e| e.to_string())?);
        let r = reconstruct_lattice(&a, cfg).map_err(|e| e.to_string())?;
        tally.add(r.checked);
        match_reference(&r, t)?;
        tally.exhaustive(t.size() * t.size());
        Ok(())
    })
}

/// `(W g_t)(Z g_t) = (W ∪ Z) g_t` in `A(Y)` for all `W, Z ⊆ Y × •` with
/// `|Y| ≤ min(N, 3)` and every `t`, given the `g` basis of `A(•)`.
pub fn verify_product_union(a: &AlgebraFunctorRep, g: &[SparseVec], cfg: &SweepConfig) -> VerificationReport {
    run_report("product-union", a.name.clone(), a.bound(), |tally| {
        for y in 0..=a.bound().min(3) {
            let rels: Vec<Correspondence> = enumerate_correspondences(y, 1).expect("small").collect();
            let cases: Vec<(usize, usize, usize)> = (0..rels.len() * rels.len() * g.len())
                .map(|k| (k / (rels.len() * g.len()), k / g.len() % rels.len(), k % g.len()))
                .collect();
            run_cases(cfg.exec, &cases, |&(w, z, t)| {
                let (w, z) = (&rels[w], &rels[z]);
                let lhs = a.product(y, &a.act(w).apply(&g[t]), &a.act(z).apply(&g[t]));
                let rhs = a.act(&w.union(z).expect("same shape")).apply(&g[t]);
                if lhs == rhs {
                    Ok(())
                } else {
                    Err(format!("(W g{t})(Z g{t}) ≠ (W∪Z) g{t} for W={w:?}, Z={z:?}"))
                }
            })
            .map_err(|(_, w)| w)?;
            tally.exhaustive(cases.len());
        }
        Ok(())
    })
}
