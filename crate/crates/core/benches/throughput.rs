//! Parallel against sequential execution of the hot paths.
//!
//! With the `parallel` feature off both arms are sequential, which makes the
//! overhead of the dispatch layer visible.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use coreset_core::exec;
use coreset_core::harness::{generate_candidates, CandidateContext, EvalContext, PoolSpec, DEFAULT_GAMMA};
use coreset_core::pipeline::{build, Budget, BuildConfig};
use coreset_core::synthetic::{generate, SyntheticSpec};
use coreset_core::{cost_vector, Power, Solution, WeightedPointSet};

fn mixture(n: usize, dim: usize) -> WeightedPointSet {
    let spec = SyntheticSpec::GaussianMixture { clusters: 10, dim, n, sep: 10.0, sigma: 1.0 };
    generate(&spec, 1).unwrap()
}

fn both<F: Fn()>(c: &mut Criterion, group: &str, param: usize, f: F) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_with_input(BenchmarkId::new("parallel", param), &param, |b, _| b.iter(&f));
    g.bench_with_input(BenchmarkId::new("sequential", param), &param, |b, _| {
        b.iter(|| exec::sequential(&f))
    });
    g.finish();
}

fn cost(c: &mut Criterion) {
    for n in [10_000, 100_000] {
        let points = mixture(n, 20);
        let s = Solution::new((0..10).map(|j| vec![j as f64; 20]).collect(), Power::Means).unwrap();
        both(c, "cost_vector", n, || {
            std::hint::black_box(cost_vector(&points, &s).unwrap());
        });
    }
}

fn pipeline(c: &mut Criterion) {
    let points = mixture(20_000, 50);
    let config = BuildConfig::new(10, Power::Means, 0.25, Budget::Total(2000), 0);
    both(c, "build", points.len(), || {
        std::hint::black_box(build(&points, &config).unwrap());
    });
}

fn evaluation(c: &mut Criterion) {
    let points = mixture(20_000, 10);
    let built = build(&points, &BuildConfig::new(10, Power::Means, 0.25, Budget::Total(2000), 0)).unwrap();
    let a = built.reference_original(&points).unwrap();
    let lifted = built.coreset.lift(&points).unwrap();
    let ctx = CandidateContext { points: &points, k: 10, power: Power::Means, reference: &a, coreset: Some(&lifted) };
    let pool = generate_candidates(&ctx, &PoolSpec::mixed(50, 0)).unwrap();
    let eval = EvalContext::new(&points, built.projection.clone(), built.reference.clone(), 0.25, DEFAULT_GAMMA).unwrap();
    let pool = eval.project(&pool).unwrap();
    both(c, "evaluate", pool.len(), || {
        std::hint::black_box(eval.evaluate(&built.coreset.points, &pool).unwrap());
    });
}

criterion_group!(benches, cost, pipeline, evaluation);
criterion_main!(benches);
