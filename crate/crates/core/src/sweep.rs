//! Case plans for verification sweeps and the parallel/sequential runner.
//!
//! A sweep is a deterministic list of cases. Running it reports either the
//! number of cases checked or the lowest-indexed failure, whichever execution
//! mode is used.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::relations::{enumerate_correspondences, Correspondence};

/// How independent cases are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Checks every case and returns the count, or the first failing case by index.
pub fn run_cases<T, F>(exec: Execution, cases: &[T], check: F) -> Result<usize, (usize, String)>
where
    T: Sync,
    F: Fn(&T) -> Result<(), String> + Sync,
{
    match exec {
        Execution::Sequential => {
            for (i, c) in cases.iter().enumerate() {
                check(c).map_err(|w| (i, w))?;
            }
            Ok(cases.len())
        }
        Execution::Parallel => run_parallel(cases, check),
    }
}

#[cfg(feature = "parallel")]
fn run_parallel<T, F>(cases: &[T], check: F) -> Result<usize, (usize, String)>
where
    T: Sync,
    F: Fn(&T) -> Result<(), String> + Sync,
{
    use rayon::prelude::*;
    let first = cases
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| check(c).err().map(|w| (i, w)))
        .min_by_key(|(i, _)| *i);
    match first {
        Some(f) => Err(f),
        None => Ok(cases.len()),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_parallel<T, F>(cases: &[T], check: F) -> Result<usize, (usize, String)>
where
    T: Sync,
    F: Fn(&T) -> Result<(), String> + Sync,
{
    run_cases(Execution::Sequential, cases, check)
}

/// Maps `f` over `items`, in parallel when requested, preserving order.
pub fn map_cases<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(&f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Which correspondences a sweep visits.
///
/// Every correspondence between sets of size at most `exhaustive_max` is
/// visited, then `samples` random ones with larger side exactly `random_size`.
/// All sizes are capped at `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepPlan {
    pub bound: usize,
    pub exhaustive_max: usize,
    pub random_size: usize,
    pub samples: usize,
    pub seed: u64,
}

/// The split of a sweep's cases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CaseCount {
    pub exhaustive: usize,
    pub random: usize,
}

impl CaseCount {
    pub fn total(&self) -> usize {
        self.exhaustive + self.random
    }
}

impl std::ops::Add for CaseCount {
    type Output = CaseCount;
    fn add(self, o: CaseCount) -> CaseCount {
        CaseCount {
            exhaustive: self.exhaustive + o.exhaustive,
            random: self.random + o.random,
        }
    }
}

impl SweepPlan {
    pub fn new(bound: usize, samples: usize, seed: u64) -> Self {
        SweepPlan {
            bound,
            exhaustive_max: 2,
            random_size: 3,
            samples,
            seed,
        }
    }

    pub fn exhaustive_limit(&self) -> usize {
        self.exhaustive_max.min(self.bound)
    }

    fn random_enabled(&self) -> bool {
        self.random_size <= self.bound && self.random_size > self.exhaustive_limit()
    }

    /// `Σ_{x,y ≤ m} 2^(x·y)` for `m = min(exhaustive_max, bound)`.
    pub fn exhaustive_count(&self) -> usize {
        let m = self.exhaustive_limit();
        (0..=m).flat_map(|y| (0..=m).map(move |x| 1usize << (x * y))).sum()
    }

    /// Correspondences in visiting order, with the exhaustive/random split.
    pub fn correspondences(&self) -> (Vec<Correspondence>, CaseCount) {
        let m = self.exhaustive_limit();
        let mut out = Vec::with_capacity(self.exhaustive_count() + self.samples);
        for y in 0..=m {
            for x in 0..=m {
                out.extend(enumerate_correspondences(y, x).expect("small sizes"));
            }
        }
        let exhaustive = out.len();
        if self.random_enabled() {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            for _ in 0..self.samples {
                let (y, x) = self.random_shape(&mut rng);
                out.push(Correspondence::random(y, x, &mut rng));
            }
        }
        let random = out.len() - exhaustive;
        (out, CaseCount { exhaustive, random })
    }

    /// Composable pairs `(V, U)`: exhaustive over sizes `≤ exhaustive_max`,
    /// then random triples of sizes with at least one equal to `random_size`.
    pub fn composable_pairs(&self) -> (Vec<(Correspondence, Correspondence)>, CaseCount) {
        let m = self.exhaustive_limit();
        let mut out = Vec::new();
        for z in 0..=m {
            for y in 0..=m {
                for x in 0..=m {
                    for v in enumerate_correspondences(z, y).expect("small") {
                        for u in enumerate_correspondences(y, x).expect("small") {
                            out.push((v.clone(), u));
                        }
                    }
                }
            }
        }
        let exhaustive = out.len();
        if self.random_enabled() {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x9e37_79b9);
            let r = self.random_size;
            for _ in 0..self.samples {
                let mut sizes = [rng.gen_range(0..=r), rng.gen_range(0..=r), rng.gen_range(0..=r)];
                sizes[rng.gen_range(0..3)] = r;
                let [z, y, x] = sizes;
                let v = Correspondence::random(z, y, &mut rng);
                let u = Correspondence::random(y, x, &mut rng);
                out.push((v, u));
            }
        }
        let random = out.len() - exhaustive;
        (out, CaseCount { exhaustive, random })
    }

    /// Random `(|Y|, |X|)` with the larger side equal to `random_size`.
    fn random_shape(&self, rng: &mut ChaCha8Rng) -> (usize, usize) {
        let r = self.random_size;
        let other = rng.gen_range(0..=r);
        if rng.gen_bool(0.5) {
            (r, other)
        } else {
            (other, r)
        }
    }
}
