use std::sync::Arc;

use super::*;
use crate::functors::{constant, functor_ft, representable, RModule};
use crate::lattices::{chain, powerset};

fn cfg(samples: usize) -> SweepConfig {
    SweepConfig {
        samples,
        seed: 0,
        exec: Execution::Parallel,
    }
}

#[test]
fn report_text_format() {
    let r = run_report("x", "a=1".into(), 2, |t| {
        t.exhaustive(3);
        Ok(())
    });
    assert_eq!(r.to_text(), "THEOREM x(a=1) PASS cases=3");
    let f = run_report("y", String::new(), 2, |_| Err("bad".into()));
    assert_eq!(f.to_text(), "THEOREM y FAIL cases=0 witness=bad");
    assert!(f.to_json().contains("\"status\":\"FAIL\""));
}

#[test]
fn tau_on_two_point_lattices() {
    let c1 = Arc::new(chain(1));
    let r = verify_tau(&c1, &c1, 3, &cfg(500), "chain1,chain1");
    assert!(r.passed(), "{r}");
    // 1+1+1 + 1+2+4 + 1+4+16 exhaustive, 500 random at size 3
    assert_eq!((r.exhaustive_cases, r.random_cases), (31, 500));
    // Target is the diamond: F_{1×1} has 4^n basis elements.
    assert_eq!(chain(1).product(&chain(1)).size(), 4);
    assert!(chain(1).product(&chain(1)).is_isomorphic(&powerset(2)));
}

#[test]
fn tau_with_one_point_lattice_is_unit() {
    let one = Arc::new(chain(0));
    let t = Arc::new(crate::lattices::n5());
    for n in 0..=2 {
        assert!(tau_component(&t, &one, n).is_identity());
    }
    assert!(verify_tau(&t, &one, 2, &cfg(0), "n5,chain0").passed());
}

#[test]
fn representable_tensor() {
    for (e, e2) in [(0, 1), (1, 1), (1, 2)] {
        let r = verify_representable_tensor(e, e2, 3, &cfg(100));
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn lev_tensor_examples() {
    let c = cfg(50);
    let r = verify_lev_tensor(&RModule::regular(1), &RModule::regular(1), 2, &c);
    assert!(r.passed(), "{r}");
    let unit = verify_lev_tensor(&RModule::trivial(0), &RModule::regular(1), 2, &c);
    assert!(unit.passed(), "{unit}");
    let z = verify_lev_tensor(&RModule::zero(1), &RModule::regular(1), 2, &c);
    assert!(z.passed(), "{z}");
    let mixed = verify_lev_tensor(&RModule::trivial(1), &RModule::regular(1), 2, &c);
    assert!(mixed.passed(), "{mixed}");
}

#[test]
fn adjunction_small() {
    let c = constant(2);
    let r = verify_adjunction_dims(&c, &c, &c, &cfg(0));
    assert!(r.passed() && r.exact, "{r}");
    let f1 = functor_ft(Arc::new(chain(1)), 2);
    let rep = representable(1, 2);
    let r = verify_adjunction_dims(&f1, &constant(2), &rep, &cfg(0));
    assert!(r.passed(), "{r}");
    let r = verify_adjunction_dims(&f1, &rep, &f1, &cfg(0));
    assert!(r.passed(), "{r}");
}

#[test]
fn internal_hom_identities_small() {
    let f1 = functor_ft(Arc::new(chain(1)), 3);
    for rep in verify_internal_hom_identities(&constant(3), 1, &constant(3), &cfg(20)) {
        assert!(rep.passed(), "{rep}");
    }
    for rep in verify_internal_hom_identities(&f1, 1, &f1, &cfg(20)) {
        assert!(rep.passed() && rep.exact, "{rep}");
    }
    let dual = verify_internal_hom_dual(&functor_ft(Arc::new(chain(2)), 2), &cfg(0));
    assert!(dual.passed(), "{dual}");
}

#[test]
fn pairing_bijection_small() {
    let pool = [constant(2), functor_ft(Arc::new(chain(1)), 2), representable(1, 2)];
    let r = verify_pairing_bijection(&pool, 6, &cfg(0));
    assert!(r.passed(), "{r}");
}
