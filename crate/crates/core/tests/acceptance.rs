//! Runs every acceptance criterion at bound 3 and prints one line per criterion.

use std::time::{Duration, Instant};

use corrfunctor::suite::{criterion_reports, CRITERIA};
use corrfunctor::theorems::{SweepConfig, VerificationReport};

const BOUND: usize = 3;
/// Wall-clock budgets in seconds, criterion by criterion.
const BUDGETS: [u64; 8] = [30, 60, 1, 60, 120, 300, 60, 120];

/// `Σ_{x,y ≤ 2} 2^(|Y||X|)`: every correspondence between sets of size at most 2.
fn small_enumeration() -> usize {
    (0..=2u32).flat_map(|y| (0..=2u32).map(move |x| 1usize << (y * x))).sum()
}

/// All composable triples over signatures of sizes `≤ 2`, plus one identity case per correspondence.
fn composition_enumeration() -> usize {
    let n = |a: u32, b: u32| 1usize << (a * b);
    let mut total = 0;
    for w in 0..=2 {
        for z in 0..=2 {
            total += n(w, z);
            for y in 0..=2 {
                for x in 0..=2 {
                    total += n(w, z) * n(z, y) * n(y, x);
                }
            }
        }
    }
    total
}

/// Extra oracles beyond each report's own status.
fn oracle(k: usize, reports: &[VerificationReport]) -> Result<(), String> {
    let check = |ok: bool, msg: String| if ok { Ok(()) } else { Err(msg) };
    match k {
        1 => check(reports.len() == 10, format!("{} corpus lattices", reports.len())),
        2 => {
            // corpus sizes 1, 2, 3, 4, 5, 2, 4, 8, 5, 5 give 52 ordered pairs with product ≤ 12
            let pairs = reports.len();
            check(pairs == 52, format!("{pairs} pairs with |T||T'| ≤ 12"))?;
            for r in reports {
                check(
                    r.exhaustive_cases == small_enumeration(),
                    format!("tau({}) exhaustive {} ≠ {}", r.parameters, r.exhaustive_cases, small_enumeration()),
                )?;
                check(r.random_cases == 500, format!("tau({}) random {}", r.parameters, r.random_cases))?;
            }
            Ok(())
        }
        3 => check(reports.iter().any(|r| r.theorem_id == "diamond-dims"), "missing dims report".into()),
        5 | 6 => {
            for r in reports {
                check(r.exact, format!("{}({}) only an upper bound", r.theorem_id, r.parameters))?;
            }
            check(k == 5 || reports.len() == 6 + 3 + 27, format!("{} reports", reports.len()))
        }
        8 => check(
            reports[0].exhaustive_cases == composition_enumeration(),
            format!("composition exhaustive {} ≠ {}", reports[0].exhaustive_cases, composition_enumeration()),
        ),
        _ => Ok(()),
    }
}

fn main() {
    let cfg = SweepConfig::default();
    let mut failed = Vec::new();
    for (i, name) in CRITERIA.iter().enumerate() {
        let k = i + 1;
        let start = Instant::now();
        let reports = criterion_reports(k, BOUND, &cfg);
        let elapsed = start.elapsed();
        let mut problems: Vec<String> =
            reports.iter().filter(|r| !r.passed()).map(VerificationReport::to_text).collect();
        if reports.is_empty() {
            problems.push("no reports".into());
        }
        if let Err(e) = oracle(k, &reports) {
            problems.push(e);
        }
        if elapsed > Duration::from_secs(BUDGETS[i]) {
            problems.push(format!("took {:.1}s, budget {}s", elapsed.as_secs_f64(), BUDGETS[i]));
        }
        let cases: usize = reports.iter().map(|r| r.checked_cases).sum();
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("CRITERION {k} {status} {name} (reports={} cases={cases} {:.2}s)", reports.len(), elapsed.as_secs_f64());
        for p in &problems {
            println!("    {p}");
        }
        if !problems.is_empty() {
            failed.push(k);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
