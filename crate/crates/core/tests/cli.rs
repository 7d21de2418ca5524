use std::path::PathBuf;

use corrfunctor::cli::run;
use corrfunctor::lattices::{powerset, Lattice};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("corrfunctor").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden {name} differs");
}

#[test]
fn ft_dims_of_chain2_are_powers_of_three() {
    let (code, out, _) = invoke(&["ft-dims", "--lattice", "chain2", "--bound", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("1, 3, 9, 27"), "{out}");
    golden("ft_dims_chain2.txt", &out);
}

#[test]
fn reconstruct_diamond_gives_the_boolean_square() {
    let (code, out, err) = invoke(&["reconstruct", "--algebra", "ft:diamond", "--bound", "3"]);
    assert_eq!(code, 0, "{err}");
    let l = Lattice::parse(&out).expect("reconstruct prints a parseable lattice");
    assert!(l.is_isomorphic(&powerset(2)));
    golden("reconstruct_diamond.txt", &out);
}

#[test]
fn reconstruct_from_files() {
    for f in ["chain1.alg", "chain1_generators.alg"] {
        let (code, out, err) = invoke(&["reconstruct", "--algebra", &data(f), "--bound", "2"]);
        assert_eq!(code, 0, "{f}: {err}");
        assert_eq!(Lattice::parse(&out).unwrap().size(), 2, "{f}");
    }
    let (code, out, _) = invoke(&["reconstruct", "--algebra", &data("chain1_broken.alg"), "--bound", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("not an algebra functor"), "{out}");
}

#[test]
fn verify_tau_golden() {
    let (code, out, _) = invoke(&["verify", "tau", "--lattice", "chain1", "--lattice", "chain1", "--bound", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "THEOREM tau(chain1,chain1) PASS cases=31\n");
    golden("verify_tau_chain1.txt", &out);
}

#[test]
fn verify_all_is_deterministic() {
    let args = ["verify", "all", "--bound", "2", "--seed", "7"];
    let (code, first, err) = invoke(&args);
    assert_eq!(code, 0, "{first}{err}");
    for k in 1..=8 {
        assert!(first.contains(&format!("CRITERION {k} PASS")), "criterion {k}\n{first}");
    }
    assert_eq!(invoke(&args).1, first);
    let (_, seq, _) = invoke(&["verify", "all", "--bound", "2", "--seed", "7", "--sequential"]);
    assert_eq!(seq, first);
}

#[test]
fn lattice_check_json() {
    let (code, out, _) = invoke(&["lattice-check", "--lattice", "n5", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["size"], 5);
    assert_eq!(v["distributive"], false);
    golden("lattice_check_n5.json", &out);
    let (code, _, _) = invoke(&["lattice-check", "--lattice", &data("diamond.lattice")]);
    assert_eq!(code, 0);
}

#[test]
fn compose_fixtures() {
    let (code, out, _) = invoke(&["compose", &data("v.corr"), &data("u.corr")]);
    assert_eq!(code, 0);
    assert_eq!(out, "corr 2 1\n1\n0\n");
}

#[test]
fn input_errors_exit_two() {
    let cases: [(&[&str], &str); 5] = [
        (&["compose", &data("bad.corr"), &data("u.corr")], "line 3"),
        (&["ft-dims", "--lattice", "nope"], "unknown lattice"),
        (&["verify", "nope"], "unknown theorem id"),
        (&["ft-dims", "--lattice", "chain1", "--bound", "5"], "exceeds"),
        (&["lattice-check", "--lattice", &data("no_top.lattice")], "no join"),
    ];
    for (args, needle) in cases {
        let (code, _, err) = invoke(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}
