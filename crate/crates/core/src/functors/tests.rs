use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::kernel::{quotient_presentation, Scalar};
use crate::lattices::{chain, powerset, Lattice};
use crate::relations::{enumerate_correspondences, Correspondence};
use crate::sweep::{Execution, SweepPlan};

const EXEC: Execution = Execution::Sequential;

fn all_within(n: usize) -> Vec<Correspondence> {
    let mut out = Vec::new();
    for y in 0..=n {
        for x in 0..=n {
            out.extend(enumerate_correspondences(y, x).unwrap());
        }
    }
    out
}

fn pairs_within(n: usize) -> Vec<(Correspondence, Correspondence)> {
    let mut out = Vec::new();
    for u in all_within(n) {
        for v in all_within(n) {
            if u.target() + v.target() <= n && u.source() + v.source() <= n {
                out.push((u.clone(), v));
            }
        }
    }
    out
}

fn ft(l: Lattice, n: usize) -> FunctorRep {
    functor_ft(Arc::new(l), n)
}

#[test]
fn ft_dims_are_powers() {
    let d = ft(powerset(2), 3);
    assert_eq!(d.dims(), vec![1, 4, 16, 64]);
    assert_eq!(ft(chain(2), 2).dims(), vec![1, 3, 9]);
}

#[test]
fn ft_identity_and_empty_actions() {
    let l = Arc::new(crate::lattices::n5());
    let f = functor_ft(l.clone(), 2);
    for n in 0..=2 {
        assert!(f.act(&Correspondence::identity(n)).is_identity());
    }
    // Empty joins give the bottom everywhere.
    let bottom_fn = (0..2).fold(0, |acc, _| acc * l.size() + l.bottom());
    let empty = f.act(&Correspondence::empty(2, 2));
    for j in 0..empty.cols() {
        assert_eq!(empty.column(j).as_unit(), Some(bottom_fn));
    }
}

#[test]
fn ft_action_is_pointwise_join() {
    let l = Arc::new(chain(2));
    let f = functor_ft(l.clone(), 2);
    // U relates y0 to {x0, x1} and y1 to nothing.
    let u = Correspondence::from_pairs(2, 2, &[(0, 0), (0, 1)]);
    // φ = (1, 2) has index 1 + 2·3 = 7; image (max(1,2), 0) = (2, 0), index 2.
    assert_eq!(f.act(&u).column(7).as_unit(), Some(2));
}

#[test]
fn functoriality_of_basic_functors() {
    let plan = SweepPlan::new(3, 60, 0);
    let fs = [
        ft(powerset(2), 3),
        ft(crate::lattices::m3(), 2),
        representable(1, 3),
        constant(3),
        zero(3),
        tensor(&ft(chain(1), 3), &representable(1, 3)).unwrap(),
        shift(&ft(chain(1), 3), 1).unwrap(),
        direct_sum(&constant(3), &ft(chain(1), 3)).unwrap(),
    ];
    for f in &fs {
        f.check_functoriality(&plan, Execution::Parallel).unwrap();
    }
}

#[test]
fn representable_is_post_composition() {
    for e in 0..=2 {
        let r = representable(e, 2);
        assert_eq!(r.dims(), (0..=2).map(|n| 1 << (n * e)).collect::<Vec<_>>());
        let f = ft(powerset(e), 2);
        for u in all_within(2) {
            let m = r.act(&u);
            assert_eq!(*m, *f.act(&u));
            for a in enumerate_correspondences(u.source(), e).unwrap() {
                let ua = u.compose(&a).unwrap();
                assert_eq!(m.column(a.code() as usize).as_unit(), Some(ua.code() as usize));
            }
        }
    }
    assert_eq!(representable(0, 3).dims(), vec![1; 4]);
}

#[test]
fn constant_and_tensor_unit() {
    let c = constant(2);
    let m = ft(chain(2), 2);
    let cm = tensor(&c, &m).unwrap();
    assert_eq!(cm.dims(), m.dims());
    for u in all_within(2) {
        assert!(c.act(&u).is_identity());
        assert_eq!(*cm.act(&u), *m.act(&u));
    }
    assert!(tensor(&c, &constant(3)).is_err());
}

#[test]
fn tensor_of_two_point_functors() {
    let f1 = ft(chain(1), 3);
    assert_eq!(tensor(&f1, &f1).unwrap().dims(), vec![1, 4, 16, 64]);
}

#[test]
fn tensor_swap_is_natural() {
    let a = ft(chain(1), 2);
    let b = ft(chain(2), 2);
    let ab = tensor(&a, &b).unwrap();
    let ba = tensor(&b, &a).unwrap();
    let swaps: Vec<crate::kernel::Matrix> = (0..=2)
        .map(|n| {
            let (p, q) = (a.dim(n), b.dim(n));
            crate::kernel::Matrix::from_basis_map(p * q, (0..p * q).map(|k| Some((k % q) * p + k / q)).collect())
        })
        .collect();
    check_intertwines(&ab, &ba, &swaps, &all_within(2), EXEC).unwrap();
}

#[test]
fn shift_examples() {
    let m = ft(chain(1), 3);
    let s0 = shift(&m, 0).unwrap();
    let s1 = shift(&m, 1).unwrap();
    assert_eq!(s1.bound(), 2);
    assert_eq!(s1.dims(), vec![2, 4, 8]);
    for u in all_within(2) {
        assert_eq!(*s0.act(&u), *m.act(&u));
    }
    let sc = shift(&constant(3), 2).unwrap();
    assert_eq!(sc.dims(), vec![1, 1]);
    assert!(all_within(1).iter().all(|u| sc.act(u).is_identity()));
    assert!(matches!(shift(&m, 4), Err(FunctorError::BoundExhausted { .. })));
}

#[test]
fn shift_morphism_examples() {
    let m = ft(powerset(1), 3);
    for e in 0..=1 {
        let id = shift_morphism(&m, &Correspondence::identity(e)).unwrap();
        assert!(id.components.iter().all(|c| c.is_identity()));
    }
    let cases = all_within(2);
    for e in 0..=1 {
        for f in 0..=1 {
            for v in enumerate_correspondences(f, e).unwrap() {
                shift_morphism(&m, &v).unwrap().check_naturality(&cases, EXEC).unwrap();
            }
        }
    }
    // M_{V'∘V} = M_{V'}∘M_V
    for v in enumerate_correspondences(1, 1).unwrap() {
        for w in enumerate_correspondences(1, 1).unwrap() {
            let lhs = shift_morphism(&m, &w.compose(&v).unwrap()).unwrap();
            let rhs = shift_morphism(&m, &w).unwrap().compose(&shift_morphism(&m, &v).unwrap()).unwrap();
            assert_eq!(lhs.components, rhs.components);
        }
    }
}

#[test]
fn induced_module_on_same_ground_keeps_dimension() {
    for w in [RModule::regular(1), RModule::trivial(1), RModule::trivial(2), RModule::zero(1)] {
        let up = induced_module(&w, w.ground()).unwrap();
        assert_eq!(up.dim(), w.dim(), "{w:?}");
    }
    assert_eq!(induced_module(&RModule::regular(2), 2).unwrap().dim(), 16);
}

#[test]
fn induced_regular_module_is_free_and_order_independent() {
    let w = RModule::regular(1);
    for f in 0..=3 {
        let (amb, mut rel) = InducedModule::relators(&w, f).unwrap();
        let q = quotient_presentation(amb, &rel).unwrap();
        // k𝒞(F, 1) has one basis element per subset of F.
        assert_eq!(q.dim(), 1 << f);
        rel.reverse();
        let mut rng = ChaCha8Rng::seed_from_u64(f as u64);
        rand::seq::SliceRandom::shuffle(&mut rel[..], &mut rng);
        assert_eq!(quotient_presentation(amb, &rel).unwrap(), q);
    }
}

#[test]
fn induced_action_is_a_module() {
    for w in [RModule::regular(1), RModule::trivial(1)] {
        for f in 0..=2 {
            induced_module(&w, f).unwrap().check().unwrap();
        }
    }
    let t = RModule::trivial(1).tensor(&RModule::regular(1)).unwrap();
    t.check().unwrap();
    induced_module(&t, 2).unwrap().check().unwrap();
}

#[test]
fn l_functor_examples() {
    for e in 0..=1 {
        let l = l_functor(&RModule::regular(e), 3);
        assert_eq!(l.rep.dims(), (0..=3).map(|n| 1 << (n * e)).collect::<Vec<_>>());
        assert_eq!(l.rep.generation_degree(), Some(e));
        l.rep.check_functoriality(&SweepPlan::new(3, 30, 1), Execution::Parallel).unwrap();
    }
    let l0 = l_functor(&RModule::trivial(0), 3);
    let c = constant(3);
    for u in all_within(3) {
        assert_eq!(*l0.rep.act(&u), *c.act(&u));
    }
    let w = RModule::trivial(1);
    assert_eq!(l_functor(&w, 1).evaluation(1).dim(), w.dim());
}

#[test]
fn hom_solver_small_cases() {
    let c = constant(2);
    assert_eq!(hom_solver(&c, &c, EXEC).unwrap().dim(), 1);
    let m = ft(chain(2), 2);
    assert_eq!(hom_solver(&m, &zero(2), EXEC).unwrap().dim(), 0);
    assert!(hom_solver(&c, &constant(3), EXEC).is_err());
}

#[test]
fn yoneda_dimensions() {
    let targets = [ft(chain(1), 3), ft(chain(2), 3), constant(3), representable(1, 3)];
    for e in 0..=2 {
        for m in &targets {
            let h = hom_solver(&representable(e, 3), m, Execution::Parallel).unwrap();
            assert_eq!(h.dim(), m.dim(e), "Hom(rep({e}), {m:?})");
            assert!(h.exact);
            let all = all_within(3);
            for b in &h.basis {
                b.check_naturality(&all, Execution::Parallel).unwrap();
            }
        }
    }
}

#[test]
fn hom_space_coordinates_round_trip() {
    let h = hom_solver(&representable(1, 2), &ft(chain(1), 2), EXEC).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = h.random_element(&mut rng);
    let c = h.coordinates(&psi).unwrap();
    assert_eq!(h.combination(&c).components, psi.components);
    let mut off = psi.clone();
    off.components[0] = off.components[0].add(&crate::kernel::Matrix::identity(1).scale(&Scalar::from(7)));
    let natural = off.check_naturality(&all_within(2), EXEC).is_ok();
    assert_eq!(h.coordinates(&off).is_some(), natural);
}

#[test]
fn pairing_round_trips_on_identity() {
    let c = constant(2);
    let cc = tensor(&c, &c).unwrap();
    let p = pairing_from_morphism(&Morphism::identity(&cc), &c, &c).unwrap();
    assert!(p.components.values().all(|m| m.is_identity()));
    p.check_binaturality(&pairs_within(2), EXEC).unwrap();
    let back = morphism_from_pairing(&p).unwrap();
    assert!(back.components.iter().all(|m| m.is_identity()));
    let z = Pairing::zero(&c, &c, &c);
    assert!(morphism_from_pairing(&z).unwrap().is_zero());
}

#[test]
fn pairing_solver_matches_tensor_hom() {
    let l = ft(chain(1), 2);
    let r = representable(1, 2);
    let t = ft(chain(1), 2);
    let ps = pairing_solver(&l, &r, &t, EXEC).unwrap();
    let cases = pairs_within(2);
    for p in &ps.basis {
        p.check_binaturality(&cases, EXEC).unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let eta = ps.random_element(&mut rng);
    let psi = morphism_from_pairing(&eta).unwrap();
    psi.check_naturality(&all_within(1), EXEC).unwrap();
    let eta2 = pairing_from_morphism(&psi, &l, &r).unwrap();
    for (k, m) in &eta2.components {
        assert_eq!(m, eta.component(k.0, k.1));
    }
}

#[test]
fn internal_hom_of_constant_is_identity_on_target() {
    let n = ft(chain(1), 3);
    let h = internal_hom(&constant(3), &n, 2, EXEC).unwrap();
    assert!(h.exact());
    assert_eq!(h.rep.dims(), vec![1, 2, 4]);
    // Θ(ψ) = ψ_∅(1) identifies H(k̄, N)(E) with N(E).
    let theta: Vec<crate::kernel::Matrix> = (0..=2)
        .map(|e| {
            let cols = h.space(e).basis.iter().map(|b| b.components[0].column(0).clone()).collect();
            crate::kernel::Matrix::from_columns(n.dim(e), cols)
        })
        .collect();
    for t in &theta {
        assert_eq!(crate::kernel::rank(t), t.rows());
    }
    check_intertwines(&h.rep, &n.truncate(2), &theta, &all_within(2), EXEC).unwrap();
    h.rep.check_functoriality(&SweepPlan::new(2, 0, 0), EXEC).unwrap();
}

#[test]
fn internal_hom_into_constant_is_constant_on_values_at_empty() {
    let m = ft(chain(2), 3);
    let h = internal_hom(&m, &constant(3), 2, EXEC).unwrap();
    assert_eq!(h.rep.dims(), vec![1, 1, 1]);
    assert!(all_within(2).iter().all(|u| h.rep.act(u).is_identity()));
}
