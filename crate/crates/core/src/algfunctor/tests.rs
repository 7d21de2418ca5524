use std::sync::Arc;

use super::*;
use crate::functors::{constant, direct_sum};
use crate::kernel::Scalar;
use crate::lattices::{chain, corpus, n5, powerset};
use crate::sweep::Execution;

fn cfg() -> SweepConfig {
    SweepConfig {
        samples: 40,
        seed: 3,
        exec: Execution::Parallel,
    }
}

fn s(n: i64) -> Scalar {
    Scalar::from(n)
}

/// A two-dimensional algebra on `•` with `e1·e1 = c0·e0 + c1·e1` and unit `e0`.
/// Only `A(•)` matters to the splitting code.
fn two_dim(c0: i64, c1: i64) -> AlgebraFunctorRep {
    let carrier = direct_sum(&constant(1), &constant(1)).unwrap();
    let sq = SparseVec::from_pairs([(0, s(c0)), (1, s(c1))]);
    let m1 = Matrix::from_columns(2, vec![SparseVec::unit(0), SparseVec::unit(1), SparseVec::unit(1), sq]);
    let m0 = Matrix::from_columns(2, vec![SparseVec::unit(0), SparseVec::unit(1), SparseVec::unit(1), SparseVec::unit(1)]);
    AlgebraFunctorRep::new("two", carrier, vec![m0, m1], vec![SparseVec::unit(0); 2]).unwrap()
}

#[test]
fn one_point_lattice_is_trivial() {
    let a = algebra_ft(Arc::new(chain(0)), 3);
    assert_eq!(a.carrier.dims(), vec![1, 1, 1, 1]);
    for m in &a.mul {
        assert_eq!(*m, Matrix::identity(1));
    }
    a.validate(&cfg()).unwrap();
    let r = reconstruct_lattice(&a, &cfg()).unwrap();
    assert_eq!(r.lattice.size(), 1);
    assert!(r.lambda.iter().all(Matrix::is_identity));
    assert_eq!(comultiplication(&a).unwrap(), Matrix::identity(1));
}

#[test]
fn chain_product_is_join() {
    let a = algebra_ft(Arc::new(chain(1)), 2);
    // 0 ∨ 1 = 1 in the two-element chain.
    assert_eq!(a.product(1, &SparseVec::unit(0), &SparseVec::unit(1)), SparseVec::unit(1));
    assert_eq!(a.product(1, &SparseVec::unit(0), &SparseVec::unit(0)), SparseVec::unit(0));
}

#[test]
fn unit_is_constant_bottom() {
    // act(∅ ∈ 𝒞(X, ∅)) sends the empty function to the constant map onto the empty join.
    for (_, t) in corpus() {
        let a = algebra_ft(Arc::new(t), 2);
        for n in 0..=2 {
            let empty = a.act(&Correspondence::empty(n, 0));
            assert_eq!(a.unit[n], *empty.column(0));
        }
    }
}

#[test]
fn validation_on_corpus() {
    for (name, t) in corpus() {
        let a = algebra_ft(Arc::new(t), 2);
        a.validate(&cfg()).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    let big = algebra_ft(Arc::new(powerset(3)), 3);
    let c = big.validate(&cfg()).unwrap();
    assert!(c.random > 0);
}

#[test]
fn meet_product_is_rejected() {
    let t = Arc::new(chain(1));
    let good = algebra_ft(t.clone(), 2);
    // Same carrier, product by meet: the top becomes the unit, which actions do not preserve.
    let mul: Vec<Matrix> = (0..=2)
        .map(|n| {
            let d = good.dim(n);
            let map = (0..d * d)
                .map(|k| {
                    let (mut a, mut b) = (k / d, k % d);
                    let (mut out, mut place) = (0, 1);
                    for _ in 0..n {
                        out += t.meet(a % 2, b % 2) * place;
                        place *= 2;
                        a /= 2;
                        b /= 2;
                    }
                    Some(out)
                })
                .collect();
            Matrix::from_basis_map(d, map)
        })
        .collect();
    let unit = (0..=2).map(|n| SparseVec::unit((1 << n) - 1)).collect();
    let bad = AlgebraFunctorRep::new("meet", good.carrier.clone(), mul, unit).unwrap();
    assert!(matches!(bad.validate(&cfg()), Err(AlgebraError::Axiom(_))));
}

#[test]
fn mu_hat_glues_functions() {
    let t = Arc::new(chain(2));
    let a = algebra_ft(t, 3);
    for (x, y) in [(0, 0), (1, 1), (1, 2), (2, 1), (0, 3)] {
        let m = mu_hat(&a, x, y).unwrap();
        let dx = 3usize.pow(x as u32);
        let dy = 3usize.pow(y as u32);
        // φ on X then ψ on Y: index φ + ψ·|T|^|X|.
        let expected: Vec<Option<usize>> = (0..dx * dy).map(|k| Some(k / dy + (k % dy) * dx)).collect();
        assert_eq!(m, Matrix::from_basis_map(dx * dy, expected), "sizes {x},{y}");
    }
    assert_eq!(mu_hat(&a, 0, 0).unwrap(), Matrix::identity(1));
    assert!(mu_hat(&a, 2, 2).is_err());
}

#[test]
fn fold_after_mu_hat_is_mu() {
    for (_, t) in corpus().into_iter().take(6) {
        let a = algebra_ft(Arc::new(t), 2);
        for x in 0..=1 {
            let lhs = a.act(&Correspondence::fold(x)).mul(&mu_hat(&a, x, x).unwrap());
            assert_eq!(lhs, a.mul[x]);
        }
    }
}

#[test]
fn exponential_property() {
    for (name, t) in corpus() {
        let r = check_exponential(&algebra_ft(Arc::new(t), 3));
        assert!(r.passed(), "{name}: {r}");
    }
    // F_T ⊕ F_T with the componentwise product: dim A(∅) = 2.
    let a = algebra_ft(Arc::new(chain(1)), 2);
    let carrier = direct_sum(&a.carrier, &a.carrier).unwrap();
    let mul = (0..=2)
        .map(|n| {
            let d = a.dim(n);
            let cols = (0..4 * d * d)
                .map(|k| {
                    let (i, j) = (k / (2 * d), k % (2 * d));
                    if i / d != j / d {
                        return SparseVec::new();
                    }
                    let off = (i / d) * d;
                    a.mul[n].column((i - off) * d + (j - off)).map_indices(|r| r + off)
                })
                .collect();
            Matrix::from_columns(2 * d, cols)
        })
        .collect();
    let unit = (0..=2).map(|n| a.unit[n].add(&a.unit[n].map_indices(|r| r + a.dim(n)))).collect();
    let sum = AlgebraFunctorRep::new("sum", carrier, mul, unit).unwrap();
    let r = check_exponential(&sum);
    assert!(!r.passed());
    assert!(r.witness.unwrap().contains("dim A(∅) = 2"));
}

#[test]
fn characteristic_polynomial_oracle() {
    // det(λI − [[a, b], [c, d]]) = λ² − (a+d)λ + (ad − bc).
    let m = Matrix::from_i64_rows(&[&[2, 3], &[5, 7]]);
    assert_eq!(characteristic_polynomial(&m), vec![s(-1), s(-9), s(1)]);
    let m = Matrix::from_i64_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
    // (λ−1)(λ−2)² = λ³ − 5λ² + 8λ − 4
    assert_eq!(characteristic_polynomial(&m), vec![s(-4), s(8), s(-5), s(1)]);
}

#[test]
fn rational_roots_oracle() {
    // (x − 1/2)(x + 3)·x = x³ + 5/2 x² − 3/2 x
    let p = vec![s(0), Scalar::new(-3, 2), Scalar::new(5, 2), s(1)];
    assert_eq!(rational_roots(&p).unwrap(), vec![s(-3), s(0), Scalar::new(1, 2)]);
    // x² − 2 has no rational roots.
    assert!(rational_roots(&[s(-2), s(0), s(1)]).unwrap().is_empty());
    assert_eq!(rational_roots(&[s(4), s(-4), s(1)]).unwrap(), vec![s(2)]);
}

#[test]
fn splitting_small_algebras() {
    // v² = v: idempotents v and 1 − v.
    let b = split_idempotents(&two_dim(0, 1)).unwrap();
    let mut got = b.idempotents.clone();
    got.sort_by(|x, y| x.entries().cmp(y.entries()));
    let one_minus_v = SparseVec::from_pairs([(0, s(1)), (1, s(-1))]);
    let mut want = vec![SparseVec::unit(1), one_minus_v];
    want.sort_by(|x, y| x.entries().cmp(y.entries()));
    assert_eq!(got, want);

    // u² = 0 and x² = 2 are not split over ℚ.
    assert!(matches!(split_idempotents(&two_dim(0, 0)), Err(AlgebraError::NotSplit(_))));
    assert!(matches!(split_idempotents(&two_dim(2, 0)), Err(AlgebraError::NotSplit(_))));

    // dim A(•) = 1: the unit.
    let one = split_idempotents(&algebra_ft(Arc::new(chain(0)), 1)).unwrap();
    assert_eq!(one.idempotents, vec![SparseVec::unit(0)]);
}

#[test]
fn splitting_matches_reference_idempotents() {
    for (name, t) in corpus() {
        let a = algebra_ft(Arc::new(t.clone()), 1);
        let got = split_idempotents(&a).unwrap();
        let reference = t.idempotent_basis().f_in_g;
        let mut want: Vec<SparseVec> = reference.columns().to_vec();
        want.sort_by(|x, y| x.entries().cmp(y.entries()));
        assert_eq!(got.idempotents, want, "{name}");
    }
}

#[test]
fn comultiplication_on_g_and_f() {
    for (name, t) in corpus() {
        let a = algebra_ft(Arc::new(t.clone()), 2);
        let delta = comultiplication(&a).unwrap();
        check_comultiplication(&a, &delta).unwrap_or_else(|w| panic!("{name}: {w}"));
        let n = t.size();
        for g in 0..n {
            // g_t is the basis function with value t.
            assert_eq!(delta.apply(&SparseVec::unit(g)), SparseVec::unit(g * n + g), "{name}");
        }
        let f = t.idempotent_basis().f_in_g;
        for x in 0..n {
            let mut want = SparseVec::new();
            for p in 0..n {
                for q in 0..n {
                    if t.meet(p, q) == x {
                        want = want.add(&f.column(p).kron(f.column(q), n));
                    }
                }
            }
            assert_eq!(delta.apply(f.column(x)), want, "{name}: δ(f{x})");
        }
    }
}

#[test]
fn counit_values() {
    for (name, t) in corpus() {
        let a = algebra_ft(Arc::new(t.clone()), 2);
        let eta = counit(&a).unwrap();
        // Every basis function restricts to the empty function, so η(g_t) = 1.
        assert!(eta.iter().all(Scalar::is_one), "{name}");
        check_counit(&a, &comultiplication(&a).unwrap(), &eta).unwrap();
        let f = t.idempotent_basis().f_in_g;
        for x in 0..t.size() {
            let v = f.column(x).dot_dense(&eta);
            assert_eq!(v.is_one(), x == t.top(), "{name}: η(f{x}) = {v}");
        }
    }
}

#[test]
fn round_trip_small() {
    for t in [chain(0), chain(1), chain(2), powerset(2), n5()] {
        let t = Arc::new(t);
        let a = algebra_ft(t.clone(), 2);
        let r = reconstruct_lattice(&a, &cfg()).unwrap();
        let perm = match_reference(&r, &t).unwrap();
        assert!(r.lattice.is_isomorphic(&t));
        // λ sends the basis function with value t to g_t, relabeled.
        for (i, &p) in perm.iter().enumerate() {
            assert_eq!(r.lambda[1].column(p), &r.g[i]);
            assert_eq!(r.g[i], SparseVec::unit(p));
        }
        assert!(r.lambda[2].basis_map().is_some());
    }
    let r = verify_reconstruction(&Arc::new(n5()), "n5", 3, &cfg());
    assert!(r.passed(), "{r}");
}

#[test]
fn reconstruction_reports_violated_hypothesis() {
    let mut a = algebra_ft(Arc::new(chain(1)), 2);
    a.unit[0] = SparseVec::new();
    a.mul[0] = Matrix::zeros(1, 1);
    // μ̂_{∅,∅} = 0 is not invertible.
    assert!(matches!(
        reconstruct_lattice(&a, &cfg()),
        Err(AlgebraError::Hypothesis { hypothesis: "exponential", .. })
    ));
}

#[test]
fn product_union_on_corpus() {
    for (name, t) in corpus() {
        let n = t.size();
        let a = algebra_ft(Arc::new(t), 3);
        let g: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
        let r = verify_product_union(&a, &g, &cfg());
        assert!(r.passed(), "{name}: {r}");
        // Σ_{|Y| ≤ 3} 4^|Y| pairs, times |T|.
        assert_eq!(r.exhaustive_cases, (1 + 4 + 16 + 64) * n);
    }
}

#[test]
fn file_round_trip() {
    let a = algebra_ft(Arc::new(chain(1)), 2);
    let text = write_algebra(&a).unwrap();
    let b = parse_algebra(&text).unwrap();
    assert_eq!(b.carrier.dims(), vec![1, 2, 4]);
    assert_eq!(b.mul, a.mul);
    assert_eq!(b.unit, a.unit);
    b.validate(&cfg()).unwrap();
    let r = reconstruct_lattice(&b, &cfg()).unwrap();
    assert!(r.lattice.is_isomorphic(&chain(1)));
}

/// Drops every action of a correspondence that factors through a smaller set.
fn generators_only(text: &str) -> String {
    let blocks: Vec<&str> = text.split("act\n").collect();
    let mut out = blocks[0].to_string();
    let drop = [Correspondence::empty(2, 2), Correspondence::full(2, 2), Correspondence::empty(1, 1)];
    for b in &blocks[1..] {
        let head: String = b.lines().take(3).collect::<Vec<_>>().join("\n");
        if drop.iter().any(|u| head.starts_with(u.to_text().trim_end())) {
            continue;
        }
        out.push_str("act\n");
        out.push_str(b);
    }
    out
}

#[test]
fn loader_completes_generators() {
    let a = algebra_ft(Arc::new(chain(2)), 2);
    let full = write_algebra(&a).unwrap();
    let partial = generators_only(&full);
    assert!(partial.len() < full.len());
    let b = parse_algebra(&partial).unwrap();
    for u in [Correspondence::empty(2, 2), Correspondence::full(2, 2), Correspondence::empty(1, 1)] {
        assert_eq!(*b.act(&u), *a.act(&u));
    }
}

#[test]
fn loader_errors() {
    let a = algebra_ft(Arc::new(chain(1)), 2);
    let full = write_algebra(&a).unwrap();
    // ∅ ∈ 𝒞(•, ∅) sent to the top clashes with act(∅ ∈ 𝒞(•, •)) = act(∅)·act(∅).
    let inconsistent = full.replace("corr 1 0\n1\n0\n", "corr 1 0\n0\n1\n");
    assert_ne!(inconsistent, full);
    let e = parse_algebra(&inconsistent).unwrap_err();
    assert!(e.message.contains("inconsistent"), "{e}");

    let missing = full.split("act\n").next().unwrap().to_string();
    let e = parse_algebra(&missing).unwrap_err();
    assert!(e.message.contains("do not generate"), "{e}");

    let e = parse_algebra("algebra x\ndims 1 2\nmul 0\n1\nmul 1\n1 0 0 1 2\n").unwrap_err();
    assert_eq!(e.line, 6);
    let e = parse_algebra("algebra x\nsizes 1\n").unwrap_err();
    assert_eq!(e.line, 2);
}
