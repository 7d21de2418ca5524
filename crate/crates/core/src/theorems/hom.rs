//! Hom-side identities: the pairing bijection, the tensor/internal-hom
//! adjunction and the evaluations of the internal hom at representables and
//! constants.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{plan_cases, run_report, SweepConfig, VerificationReport};
use crate::functors::{
    check_intertwines, constant, hom_solver, internal_hom, morphism_from_pairing, pairing_from_morphism,
    pairing_solver, representable, shift, tensor, FunctorError, FunctorRep, HomSpace, Morphism, PairingSpace,
};
use crate::kernel::{rank, Matrix, SparseVec};
use crate::relations::{enumerate_correspondences, Correspondence};

fn err(e: FunctorError) -> String {
    e.to_string()
}

fn name(m: &FunctorRep) -> String {
    m.describe().replace(' ', "")
}

/// All pairs `(U, V)` with `|X|+|Y| ≤ n` and `|X'|+|Y'| ≤ n`.
fn pair_cases(n: usize) -> Vec<(Correspondence, Correspondence)> {
    let mut out = Vec::new();
    for x in 0..=n {
        for y in 0..=n - x {
            for x2 in 0..=n {
                for y2 in 0..=n - x2 {
                    for u in enumerate_correspondences(x2, x).expect("small") {
                        for v in enumerate_correspondences(y2, y).expect("small") {
                            out.push((u.clone(), v));
                        }
                    }
                }
            }
        }
    }
    out
}

/// `ψ = (ψ̂)~` and `η = (η̃)^` for random morphisms `M' ⊗ M → M''` and random
/// pairings, with the three functors drawn from `pool`. The fold `(Δ_X, Δ_X)`
/// needs `2|X| ≤ N`, so the round trips are compared on that range.
pub fn verify_pairing_bijection(pool: &[FunctorRep], samples: usize, cfg: &SweepConfig) -> VerificationReport {
    let bound = pool.first().map_or(0, FunctorRep::bound);
    let label = pool.iter().map(name).collect::<Vec<_>>().join(",");
    run_report("pairing-bijection", label, bound, |tally| {
        if pool.iter().any(|m| m.bound() != bound) {
            return Err("functors in the pool have different bounds".into());
        }
        let half = bound / 2;
        let pairs = pair_cases(bound);
        let (small, _) = plan_cases(&cfg.with_samples(0), half);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut spaces: HashMap<(usize, usize, usize), (HomSpace, PairingSpace)> = HashMap::new();
        for s in 0..samples {
            let key = (rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len()));
            let (l, r, t) = (&pool[key.0], &pool[key.1], &pool[key.2]);
            if let std::collections::hash_map::Entry::Vacant(e) = spaces.entry(key) {
                let hs = hom_solver(&tensor(l, r).map_err(err)?, t, cfg.exec).map_err(err)?;
                let ps = pairing_solver(l, r, t, cfg.exec).map_err(err)?;
                tally.exact &= hs.exact;
                e.insert((hs, ps));
            }
            let (hs, ps) = &spaces[&key];
            let tag = format!("sample {s}: M'={}, M={}, M''={}", name(l), name(r), name(t));

            let psi = hs.random_element(&mut rng);
            let hat = pairing_from_morphism(&psi, l, r).map_err(err)?;
            let n = hat.check_binaturality(&pairs, cfg.exec).map_err(|w| format!("{tag}: ψ̂ {w}"))?;
            let back = morphism_from_pairing(&hat).map_err(err)?;
            if back.components != psi.truncate(half).components {
                return Err(format!("{tag}: (ψ̂)~ ≠ ψ"));
            }

            let eta = ps.random_element(&mut rng);
            let tilde = morphism_from_pairing(&eta).map_err(err)?;
            let m = tilde.check_naturality(&small, cfg.exec).map_err(|w| format!("{tag}: η̃ {w}"))?;
            let again = pairing_from_morphism(&tilde, &l.truncate(half), &r.truncate(half)).map_err(err)?;
            for (k, c) in &again.components {
                if c != eta.component(k.0, k.1) {
                    return Err(format!("{tag}: (η̃)^ ≠ η at sizes {k:?}"));
                }
            }
            tally.exhaustive(n + m + 2);
        }
        Ok(())
    })
}

/// `dim Hom(M' ⊗ M, M'') = dim Hom(M, H(M', M''))`, with a basis of the left
/// side sent through `ψ ↦ ψ̄` and checked to land independently on the right.
///
/// `H(M', M'')` is computed on sizes `≤ N − g` where `g` is the generation
/// degree of `M'`, so its evaluations are exact whenever `M'` is a sum of representables.
pub fn verify_adjunction_dims(m: &FunctorRep, m2: &FunctorRep, m3: &FunctorRep, cfg: &SweepConfig) -> VerificationReport {
    let bound = m3.bound();
    let label = format!("M={},M'={},M''={}", name(m), name(m2), name(m3));
    run_report("adjunction", label, bound, |tally| {
        if m.bound() != bound || m2.bound() != bound {
            return Err("functors have different bounds".into());
        }
        let t = m2.generation_degree().unwrap_or(bound / 2).min(bound);
        let out = bound - t;
        let lhs = hom_solver(&tensor(m2, m).map_err(err)?, m3, cfg.exec).map_err(err)?;
        let h = internal_hom(m2, m3, out, cfg.exec).map_err(err)?;
        let source = m.truncate(out);
        let rhs = hom_solver(&source, &h.rep, cfg.exec).map_err(err)?;
        tally.exact = lhs.exact && h.exact() && rhs.exact;
        tally.exhaustive(1);
        if lhs.dim() != rhs.dim() {
            return Err(format!("dim Hom(M'⊗M, M'') = {} but dim Hom(M, H(M', M'')) = {}", lhs.dim(), rhs.dim()));
        }
        let mut images = Vec::with_capacity(lhs.dim());
        for (b, psi) in lhs.basis.iter().enumerate() {
            let hat = pairing_from_morphism(psi, m2, m).map_err(err)?;
            let mut components = Vec::with_capacity(out + 1);
            for y in 0..=out {
                let space = h.space(y);
                let dy = m.dim(y);
                let cols = (0..dy)
                    .map(|j| {
                        let parts = (0..=t)
                            .map(|x| {
                                let sel: Vec<usize> = (0..m2.dim(x)).map(|i| i * dy + j).collect();
                                hat.component(x, y).select_columns(&sel)
                            })
                            .collect();
                        let phi = Morphism {
                            source: space.source.clone(),
                            target: space.target.clone(),
                            components: parts,
                        };
                        space
                            .coordinates(&phi)
                            .map(|c| SparseVec::from_dense(&c))
                            .ok_or_else(|| format!("ψ̄ of basis element {b} at size {y} is not a morphism M' → M''_Y"))
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                components.push(Matrix::from_columns(space.dim(), cols));
            }
            let bar = Morphism {
                source: source.clone(),
                target: h.rep.clone(),
                components,
            };
            let coords = rhs
                .coordinates(&bar)
                .ok_or_else(|| format!("ψ̄ of basis element {b} is not natural"))?;
            images.push(SparseVec::from_dense(&coords));
            tally.exhaustive(1);
        }
        let stacked = Matrix::from_columns(rhs.dim(), images);
        if rank(&stacked) != lhs.dim() {
            return Err("the images ψ̄ of a basis are linearly dependent".into());
        }
        Ok(())
    })
}

/// `H(k𝒞(-,E), N) ≅ N_E` through `ψ ↦ N(swap)·ψ_E(Δ_E)`.
pub fn verify_internal_hom_representable(n: &FunctorRep, e: usize, cfg: &SweepConfig) -> VerificationReport {
    let bound = n.bound();
    run_report("internal-hom-representable", format!("N={},E={e}", name(n)), bound, |tally| {
        if e > bound {
            return Err(format!("|E| = {e} exceeds the bound"));
        }
        let out = bound - e;
        let h = internal_hom(&representable(e, bound), n, out, cfg.exec).map_err(err)?;
        tally.exact = h.exact();
        let target = shift(n, e).map_err(err)?;
        let id_code = Correspondence::identity(e).code() as usize;
        let mut thetas = Vec::new();
        for x in 0..=out {
            let swap = n.act(&Correspondence::swap(e, x));
            let cols = h
                .space(x)
                .basis
                .iter()
                .map(|psi| swap.apply(psi.components[e].column(id_code)))
                .collect();
            let theta = Matrix::from_columns(target.dim(x), cols);
            if theta.rows() != theta.cols() || rank(&theta) != theta.rows() {
                return Err(format!("Θ at size {x} is not invertible ({}x{})", theta.rows(), theta.cols()));
            }
            thetas.push(theta);
        }
        tally.exhaustive(out + 1);
        let (cases, count) = plan_cases(cfg, out);
        check_intertwines(&h.rep, &target, &thetas, &cases, cfg.exec)?;
        tally.add(count);
        Ok(())
    })
}

/// `H(k̄, N) ≅ N` through `ψ ↦ ψ_∅(1)`.
pub fn verify_internal_hom_constant(n: &FunctorRep, cfg: &SweepConfig) -> VerificationReport {
    let bound = n.bound();
    run_report("internal-hom-constant", format!("N={}", name(n)), bound, |tally| {
        let h = internal_hom(&constant(bound), n, bound, cfg.exec).map_err(err)?;
        tally.exact = h.exact();
        let mut thetas = Vec::new();
        for x in 0..=bound {
            let cols = h.space(x).basis.iter().map(|psi| psi.components[0].column(0).clone()).collect();
            let theta = Matrix::from_columns(n.dim(x), cols);
            if theta.rows() != theta.cols() || rank(&theta) != theta.rows() {
                return Err(format!("Θ at size {x} is not invertible"));
            }
            thetas.push(theta);
        }
        tally.exhaustive(bound + 1);
        let (cases, count) = plan_cases(cfg, bound);
        check_intertwines(&h.rep, n, &thetas, &cases, cfg.exec)?;
        tally.add(count);
        Ok(())
    })
}

/// `H(M, k̄)` has dimension `dim M(∅)` everywhere and every correspondence acts trivially.
pub fn verify_internal_hom_dual(m: &FunctorRep, cfg: &SweepConfig) -> VerificationReport {
    let bound = m.bound();
    run_report("internal-hom-dual", format!("M={}", name(m)), bound, |tally| {
        let t = usize::from(bound >= 2);
        let out = bound - t;
        let h = internal_hom(m, &constant(bound), out, cfg.exec).map_err(err)?;
        // Every ψ is determined by ψ_∅, so these evaluations are exact for any M.
        for e in 0..=out {
            if h.rep.dim(e) != m.dim(0) {
                return Err(format!("dim H(M, k̄)({e}) = {} but dim M(∅) = {}", h.rep.dim(e), m.dim(0)));
            }
        }
        tally.exhaustive(out + 1);
        let (cases, count) = plan_cases(cfg, out);
        crate::sweep::run_cases(cfg.exec, &cases, |u| {
            if h.rep.act(u).is_identity() {
                Ok(())
            } else {
                Err(format!("{u:?} does not act as the identity"))
            }
        })
        .map_err(|(_, w)| w)?;
        tally.add(count);
        Ok(())
    })
}

/// The three internal-hom identities for one choice of `N`, `E` and `M`.
pub fn verify_internal_hom_identities(
    n: &FunctorRep,
    e: usize,
    m: &FunctorRep,
    cfg: &SweepConfig,
) -> Vec<VerificationReport> {
    vec![
        verify_internal_hom_representable(n, e, cfg),
        verify_internal_hom_constant(n, cfg),
        verify_internal_hom_dual(m, cfg),
    ]
}
