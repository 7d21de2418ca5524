use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};

use corrfunctor::functors::functor_ft;
use corrfunctor::lattices::{chain, n5};
use corrfunctor::sweep::Execution;
use corrfunctor::theorems::{verify_composition_laws, verify_tau, SweepConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn config(exec: Execution) -> SweepConfig {
    SweepConfig { exec, ..SweepConfig::default() }
}

fn composition_laws(c: &mut Criterion) {
    let mut g = c.benchmark_group("composition-laws");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| verify_composition_laws(&config(exec))));
    }
    g.finish();
}

// Actions are memoized, so every iteration starts from a fresh functor.
fn functoriality(c: &mut Criterion) {
    let t = Arc::new(n5());
    let mut g = c.benchmark_group("functoriality-ft-n5");
    g.sample_size(10);
    for (name, exec) in MODES {
        let plan = config(exec).plan(3);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter_batched(
                || functor_ft(t.clone(), 3),
                |f| f.check_functoriality(&plan, exec).unwrap(),
                BatchSize::LargeInput,
            )
        });
    }
    g.finish();
}

fn tau(c: &mut Criterion) {
    let t = Arc::new(chain(2));
    let mut g = c.benchmark_group("tau-chain2-chain2");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_tau(&t, &t, 3, &config(exec), "chain2,chain2"))
        });
    }
    g.finish();
}

criterion_group!(benches, composition_laws, functoriality, tau);
criterion_main!(benches);
