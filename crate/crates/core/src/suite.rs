//! The acceptance suite: every verifier, grouped into numbered criteria and
//! run at a common bound.

use std::sync::Arc;

use crate::algfunctor::{algebra_ft, verify_algebra_structure, verify_product_union, verify_reconstruction};
use crate::functors::{
    constant, direct_sum, functor_ft, l_functor, representable, shift, tensor, zero, FunctorRep, RModule,
};
use crate::kernel::SparseVec;
use crate::lattices::{chain, corpus, powerset, Lattice};
use crate::theorems::{
    run_report, verify_adjunction_dims, verify_composition_laws, verify_functoriality, verify_internal_hom_constant,
    verify_internal_hom_dual, verify_internal_hom_representable, verify_lev_tensor, verify_pairing_bijection,
    verify_tau, SweepConfig, VerificationReport,
};

pub const CRITERIA: [&str; 8] = [
    "reconstruction round trip",
    "tensor of lattice functors",
    "diamond dimensions",
    "pairing bijection",
    "tensor of L functors",
    "internal hom identities and adjunction",
    "idempotents, comultiplication, counit and product-union",
    "composition laws and functoriality",
];

/// Random morphism/pairing samples for the pairing round trips.
pub const PAIRING_SAMPLES: usize = 20;
/// Random size-3 correspondences in naturality sweeps.
pub const NATURALITY_SAMPLES: usize = 200;

fn lattices() -> Vec<(String, Arc<Lattice>)> {
    corpus().into_iter().map(|(n, l)| (n, Arc::new(l))).collect()
}

/// `{k̄, F_1̲, k𝒞(-,•)}`.
pub fn small_functors(bound: usize) -> Vec<FunctorRep> {
    vec![constant(bound), functor_ft(Arc::new(chain(1)), bound), representable(1, bound)]
}

/// The reports for criterion `k` (1-based) at `bound`.
pub fn criterion_reports(k: usize, bound: usize, cfg: &SweepConfig) -> Vec<VerificationReport> {
    match k {
        1 => {
            let c = cfg.with_samples(NATURALITY_SAMPLES);
            lattices().iter().map(|(n, t)| verify_reconstruction(t, n, bound, &c)).collect()
        }
        2 => {
            let ls = lattices();
            let mut out = Vec::new();
            for (a, t) in &ls {
                for (b, t2) in &ls {
                    if t.size() * t2.size() <= 12 {
                        out.push(verify_tau(t, t2, bound, cfg, &format!("{a},{b}")));
                    }
                }
            }
            out
        }
        3 => {
            let c1 = Arc::new(chain(1));
            let dims = run_report("diamond-dims", "chain1,chain1".into(), bound, |tally| {
                let t = tensor(&functor_ft(c1.clone(), bound), &functor_ft(c1.clone(), bound))
                    .map_err(|e| e.to_string())?;
                let d = functor_ft(Arc::new(powerset(2)), bound);
                let expected: Vec<usize> = (0..=bound).map(|n| 4usize.pow(n as u32)).collect();
                tally.exhaustive(bound + 1);
                if t.dims() != expected || d.dims() != expected {
                    return Err(format!("tensor dims {:?}, diamond dims {:?}, expected {expected:?}", t.dims(), d.dims()));
                }
                Ok(())
            });
            vec![dims, verify_tau(&c1, &c1, bound, cfg, "chain1,chain1")]
        }
        4 => vec![verify_pairing_bijection(&small_functors(bound), PAIRING_SAMPLES, cfg)],
        5 => vec![verify_lev_tensor(&RModule::regular(1), &RModule::regular(1), bound, cfg)],
        6 => {
            let pool = small_functors(bound);
            let mut out = Vec::new();
            for n in &pool[..2] {
                for e in 0..=1.min(bound) {
                    out.push(verify_internal_hom_representable(n, e, cfg));
                }
                out.push(verify_internal_hom_constant(n, cfg));
            }
            for m in &pool {
                out.push(verify_internal_hom_dual(m, cfg));
            }
            for m in &pool {
                for m2 in &pool {
                    for m3 in &pool {
                        out.push(verify_adjunction_dims(m, m2, m3, cfg));
                    }
                }
            }
            out
        }
        7 => {
            let mut out = Vec::new();
            for (_, t) in lattices() {
                let a = algebra_ft(t.clone(), bound);
                out.push(verify_algebra_structure(&a, cfg));
                let g: Vec<SparseVec> = (0..t.size()).map(SparseVec::unit).collect();
                out.push(verify_product_union(&a, &g, cfg));
            }
            out
        }
        8 => {
            let mut out = vec![verify_composition_laws(cfg)];
            for m in constructed_functors(bound) {
                out.push(verify_functoriality(&m, cfg));
            }
            out
        }
        _ => Vec::new(),
    }
}

/// One functor from every construction in the crate.
pub fn constructed_functors(bound: usize) -> Vec<FunctorRep> {
    let f1 = functor_ft(Arc::new(chain(1)), bound);
    let mut out = vec![constant(bound), zero(bound)];
    out.extend((0..=2).map(|e| representable(e, bound)));
    out.extend(corpus().into_iter().map(|(_, t)| functor_ft(Arc::new(t), bound)));
    out.push(tensor(&f1, &f1).expect("same bound"));
    out.push(direct_sum(&f1, &constant(bound)).expect("same bound"));
    if bound >= 1 {
        out.push(shift(&f1, 1).expect("bound ≥ 1"));
    }
    out.push(l_functor(&RModule::regular(1), bound).rep);
    out
}
