//! Tensor products: lattice functors, representables and the `L_{E,V}` family.

use std::collections::HashSet;
use std::sync::Arc;

use super::{plan_cases, run_report, SweepConfig, VerificationReport};
use crate::functors::{
    check_intertwines, functor_ft, l_functor, representable, tensor, FunctorError, InducedModule, RModule,
};
use crate::kernel::{Matrix, SparseVec};
use crate::lattices::{powerset, Lattice};
use crate::relations::Correspondence;

fn err(e: FunctorError) -> String {
    e.to_string()
}

/// `τ_X: F_T(X) ⊗ F_{T'}(X) → F_{T×T'}(X)`, `φ ⊗ φ' ↦ (x ↦ (φ(x), φ'(x)))`.
pub fn tau_component(t: &Lattice, t2: &Lattice, n: usize) -> Matrix {
    let (a, b) = (t.size(), t2.size());
    let d2 = b.pow(n as u32);
    let dim = (a * b).pow(n as u32);
    let map = (0..dim)
        .map(|k| {
            let (mut i, mut j) = (k / d2, k % d2);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..n {
                out += ((i % a) * b + j % b) * place;
                place *= a * b;
                i /= a;
                j /= b;
            }
            Some(out)
        })
        .collect();
    Matrix::from_basis_map(dim, map)
}

fn is_permutation(m: &Matrix) -> bool {
    match m.basis_map() {
        Some(map) if m.rows() == m.cols() => {
            let mut seen = HashSet::with_capacity(map.len());
            map.iter().all(|x| x.is_some_and(|i| seen.insert(i)))
        }
        _ => false,
    }
}

/// `F_T ⊗ F_{T'} ≅ F_{T×T'}` through `τ`, checked on the sweep's correspondences.
pub fn verify_tau(t: &Arc<Lattice>, t2: &Arc<Lattice>, bound: usize, cfg: &SweepConfig, label: &str) -> VerificationReport {
    run_report("tau", label.to_string(), bound, |tally| {
        let lhs = tensor(&functor_ft(t.clone(), bound), &functor_ft(t2.clone(), bound)).map_err(err)?;
        let rhs = functor_ft(Arc::new(t.product(t2)), bound);
        let taus: Vec<Matrix> = (0..=bound).map(|n| tau_component(t, t2, n)).collect();
        for (n, m) in taus.iter().enumerate() {
            if !is_permutation(m) {
                return Err(format!("tau at size {n} is not a bijection of bases"));
            }
        }
        let (cases, count) = plan_cases(cfg, bound);
        check_intertwines(&lhs, &rhs, &taus, &cases, cfg.exec)?;
        tally.add(count);
        Ok(())
    })
}

/// `k𝒞(-,E) ⊗ k𝒞(-,E') ≅ k𝒞(-,E ⊔ E')` with `A ⊗ A' ↦ (A, A')`, plus the
/// lattice form through `τ` for `T = 𝒫(E)`, `T' = 𝒫(E')`.
pub fn verify_representable_tensor(e: usize, e2: usize, bound: usize, cfg: &SweepConfig) -> VerificationReport {
    let label = format!("E={e},E'={e2}");
    let tau = verify_tau(&Arc::new(powerset(e)), &Arc::new(powerset(e2)), bound, cfg, &label);
    run_report("representable-tensor", label.clone(), bound, |tally| {
        tally.add(crate::sweep::CaseCount {
            exhaustive: tau.exhaustive_cases,
            random: tau.random_cases,
        });
        if let Some(w) = &tau.witness {
            return Err(format!("tau: {w}"));
        }
        let lhs = tensor(&representable(e, bound), &representable(e2, bound)).map_err(err)?;
        let rhs = representable(e + e2, bound);
        let mut thetas = Vec::new();
        for n in 0..=bound {
            let (d, d2) = (1usize << (n * e), 1usize << (n * e2));
            if d * d2 != 1usize << (n * (e + e2)) || lhs.dim(n) != rhs.dim(n) {
                return Err(format!("dimensions differ at size {n}"));
            }
            let map = (0..d * d2)
                .map(|k| {
                    let a = Correspondence::from_code(n, e, (k / d2) as u64);
                    let a2 = Correspondence::from_code(n, e2, (k % d2) as u64);
                    Some(Correspondence::concat(&a, &a2).expect("same target").code() as usize)
                })
                .collect();
            let theta = Matrix::from_basis_map(d * d2, map);
            if !is_permutation(&theta) {
                return Err(format!("(A, A') is not a bijection at size {n}"));
            }
            thetas.push(theta);
        }
        tally.exhaustive(bound + 1);
        let (cases, count) = plan_cases(cfg, bound);
        check_intertwines(&lhs, &rhs, &thetas, &cases, cfg.exec)?;
        tally.add(count);
        Ok(())
    })
}

/// `L_{E,V} ⊗ L_{F,W} ≅ L_{G, V↑ ⊗ W↑}` with `G = E ⊔ F`, through the explicit
/// maps `Φ: C ⊗ ((A⊗v) ⊗ (B⊗w)) ↦ (CA⊗v) ⊗ (CB⊗w)` and
/// `Ψ: (P⊗v) ⊗ (Q⊗w) ↦ (P,Q) ⊗ ((ι_E⊗v) ⊗ (ι_F⊗w))`.
pub fn verify_lev_tensor(v: &RModule, w: &RModule, bound: usize, cfg: &SweepConfig) -> VerificationReport {
    let label = format!("V={},W={}", v.name(), w.name());
    run_report("lev-tensor", label, bound, |tally| {
        let (e, f) = (v.ground(), w.ground());
        let g = e + f;
        let l1 = l_functor(v, bound);
        let l2 = l_functor(w, bound);
        let lhs = tensor(&l1.rep, &l2.rep).map_err(err)?;
        let vup = InducedModule::build(v, g).map_err(err)?;
        let wup = InducedModule::build(w, g).map_err(err)?;
        let u = vup.module().tensor(&wup.module()).map_err(err)?;
        let r = l_functor(&u, bound);
        let iota_e = Correspondence::left_inclusion(e, f);
        let iota_f = Correspondence::right_inclusion(e, f);
        // Classes of ι_E ⊗ v_i and ι_F ⊗ w_j in the induced modules.
        let v_in: Vec<SparseVec> = (0..v.dim()).map(|i| vup.class_of(&iota_e, &SparseVec::unit(i))).collect();
        let w_in: Vec<SparseVec> = (0..w.dim()).map(|j| wup.class_of(&iota_f, &SparseVec::unit(j))).collect();
        let mut phis = Vec::new();
        let mut psis = Vec::new();
        for n in 0..=bound {
            let (a1, a2, ar) = (l1.evaluation(n), l2.evaluation(n), r.evaluation(n));
            let (d1, d2) = (a1.dim(), a2.dim());
            if d1 * d2 != ar.dim() {
                return Err(format!("dimensions differ at size {n}: {} vs {}", d1 * d2, ar.dim()));
            }
            let class1 = |a: &Correspondence, i: usize| a1.quotient.projection.column(a1.ambient_index(a, i)).clone();
            let class2 = |b: &Correspondence, j: usize| a2.quotient.projection.column(a2.ambient_index(b, j)).clone();

            // Φ on every ambient generator C ⊗ u_k of the right-hand side.
            let phi_amb: Vec<SparseVec> = (0..ar.quotient.ambient_dim())
                .map(|idx| {
                    let (c, k) = ar.ambient_pair(idx);
                    let (ka, kb) = (k / wup.dim(), k % wup.dim());
                    let mut out = SparseVec::new();
                    for (ia, ca) in vup.quotient.section.column(ka).entries() {
                        let (a, i) = vup.ambient_pair(*ia);
                        let left = class1(&c.compose(&a).expect("shapes"), i);
                        for (ib, cb) in wup.quotient.section.column(kb).entries() {
                            let (b, j) = wup.ambient_pair(*ib);
                            let right = class2(&c.compose(&b).expect("shapes"), j);
                            out = out.add_scaled(&(ca * cb), &left.kron(&right, d2));
                        }
                    }
                    out
                })
                .collect();
            let lift = |amb: &[SparseVec], v: &SparseVec, dim: usize| {
                let mut acc = SparseVec::new();
                for (i, c) in v.entries() {
                    acc = acc.add_scaled(c, &amb[*i]);
                }
                debug_assert!(acc.support_bound() <= dim);
                acc
            };
            let (_, rel_r) = InducedModule::relators(&u, n).map_err(err)?;
            for rel in &rel_r {
                if !lift(&phi_amb, rel, d1 * d2).is_zero() {
                    return Err(format!("Φ does not kill the relator {rel:?} at size {n}"));
                }
            }
            tally.exhaustive(rel_r.len());
            let phi = Matrix::from_columns(
                d1 * d2,
                (0..ar.dim()).map(|b| lift(&phi_amb, ar.quotient.section.column(b), d1 * d2)).collect(),
            );

            // Ψ on ambient generators (P ⊗ v_i) ⊗ (Q ⊗ w_j).
            let amb2 = a2.quotient.ambient_dim();
            let psi_amb = |i1: usize, i2: usize| -> SparseVec {
                let (p, i) = a1.ambient_pair(i1);
                let (q, j) = a2.ambient_pair(i2);
                let pq = Correspondence::concat(&p, &q).expect("same target");
                ar.class_of(&pq, &v_in[i].kron(&w_in[j], wup.dim()))
            };
            let (_, rel1) = InducedModule::relators(v, n).map_err(err)?;
            let (_, rel2) = InducedModule::relators(w, n).map_err(err)?;
            for rel in &rel1 {
                for i2 in 0..amb2 {
                    let mut acc = SparseVec::new();
                    for (i1, c) in rel.entries() {
                        acc = acc.add_scaled(c, &psi_amb(*i1, i2));
                    }
                    if !acc.is_zero() {
                        return Err(format!("Ψ is not well defined on the left factor at size {n}"));
                    }
                }
            }
            for rel in &rel2 {
                for i1 in 0..a1.quotient.ambient_dim() {
                    let mut acc = SparseVec::new();
                    for (i2, c) in rel.entries() {
                        acc = acc.add_scaled(c, &psi_amb(i1, *i2));
                    }
                    if !acc.is_zero() {
                        return Err(format!("Ψ is not well defined on the right factor at size {n}"));
                    }
                }
            }
            tally.exhaustive(rel1.len() * amb2 + rel2.len() * a1.quotient.ambient_dim());
            let mut cols = Vec::with_capacity(d1 * d2);
            for b1 in 0..d1 {
                for b2 in 0..d2 {
                    let mut acc = SparseVec::new();
                    for (i1, c1) in a1.quotient.section.column(b1).entries() {
                        for (i2, c2) in a2.quotient.section.column(b2).entries() {
                            acc = acc.add_scaled(&(c1 * c2), &psi_amb(*i1, *i2));
                        }
                    }
                    cols.push(acc);
                }
            }
            let psi = Matrix::from_columns(ar.dim(), cols);
            if !phi.mul(&psi).is_identity() {
                return Err(format!("Φ∘Ψ ≠ id at size {n}"));
            }
            if !psi.mul(&phi).is_identity() {
                return Err(format!("Ψ∘Φ ≠ id at size {n}"));
            }
            tally.exhaustive(2);
            phis.push(phi);
            psis.push(psi);
        }
        let (cases, count) = plan_cases(cfg, bound);
        check_intertwines(&r.rep, &lhs, &phis, &cases, cfg.exec).map_err(|w| format!("Φ: {w}"))?;
        check_intertwines(&lhs, &r.rep, &psis, &cases, cfg.exec).map_err(|w| format!("Ψ: {w}"))?;
        tally.add(count);
        tally.add(count);
        Ok(())
    })
}
