//! Acceptance suite: one PASS/FAIL line per criterion, each checked for
//! both its tolerance and its time limit. Exits non-zero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use coreset_cli::commands::{netlab_reference, subspace_cases};
use coreset_core::cost::{cost_set, sq_dist};
use coreset_core::decompose::{build_groups, round_weights};
use coreset_core::harness::{
    gaussian_probe, sweep, Multipliers, PoolSpec, SweepConfig, SweepMode,
};
use coreset_core::netlab::{build_net, verify_net, NetConfig, TypeParams};
use coreset_core::pipeline::{build, prepare, Budget, BuildConfig};
use coreset_core::sampler::{check_event_e, sampling_distribution};
use coreset_core::solver::{assign, seed_bicriteria};
use coreset_core::subspace::{pythagorean_split, SubspaceBasis};
use coreset_core::synthetic::{generate, SyntheticSpec};
use coreset_core::{Power, Solution, WeightedPointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = f();
    let elapsed = t.elapsed();
    let in_time = elapsed <= limit;
    let ok = out.passed && in_time;
    println!(
        "criterion {id:>2} [{}] {name}: {} (time {:.2}s, limit {}s{})",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { ", over time" }
    );
    ok
}

fn mixture(n: usize, dim: usize, k: usize, seed: u64) -> WeightedPointSet {
    generate(&SyntheticSpec::GaussianMixture { clusters: k, dim, n, sep: 10.0, sigma: 1.0 }, seed).unwrap()
}

fn gaussian_rows(rng: &mut ChaCha8Rng, n: usize, d: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect())
        .collect()
}

/// Written separately from the library: explicit loops and its own
/// compensated summation in input order.
fn oracle_cost(rows: &[Vec<f64>], weights: &[f64], centers: &[Vec<f64>], z: u8) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for (p, &w) in rows.iter().zip(weights) {
        let mut best = f64::INFINITY;
        for c in centers {
            let mut d2 = 0.0;
            for i in 0..p.len() {
                let t = p[i] - c[i];
                d2 += t * t;
            }
            if d2 < best {
                best = d2;
            }
        }
        let term = w * if z == 1 { best.sqrt() } else { best };
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut exact = 0;
    let mut worst_naive: f64 = 0.0;
    for case in 0..100 {
        let n = rng.random_range(1..=500);
        let d = rng.random_range(1..=20);
        let k = rng.random_range(1..=10);
        let z = if case % 2 == 0 { 1 } else { 2 };
        let rows = gaussian_rows(&mut rng, n, d, 5.0);
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..3.0)).collect();
        let centers = gaussian_rows(&mut rng, k, d, 5.0);
        let p = WeightedPointSet::new(rows.clone(), weights.clone()).unwrap();
        let s = Solution::new(centers.clone(), Power::from_z(z).unwrap()).unwrap();
        let got = cost_set(&p, &s).unwrap();
        let want = oracle_cost(&rows, &weights, &centers, z);
        exact += usize::from(got == want);
        let naive: f64 = rows
            .iter()
            .zip(&weights)
            .map(|(r, w)| {
                let m = centers.iter().map(|c| sq_dist(r, c)).fold(f64::INFINITY, f64::min);
                w * if z == 1 { m.sqrt() } else { m }
            })
            .sum();
        worst_naive = worst_naive.max((got - naive).abs() / naive);
    }
    Outcome {
        passed: exact == 100 && worst_naive < 1e-12,
        detail: format!("{exact}/100 bit-identical, max rel. gap to naive sum {worst_naive:.1e}"),
    }
}

fn fixed_candidate(p: &WeightedPointSet, k: usize, seed: u64) -> Solution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers = (0..k)
        .map(|_| {
            let row = p.point(rng.random_range(0..p.len()));
            row.iter().map(|x| x + rng.sample::<f64, _>(StandardNormal)).collect()
        })
        .collect();
    Solution::new(centers, Power::Means).unwrap()
}

fn unbiasedness() -> Outcome {
    let p = mixture(2000, 5, 5, 2);
    let s = fixed_candidate(&p, 5, 77);
    let truth = cost_set(&p, &s).unwrap();
    let errors: Vec<f64> = (0..1000)
        .map(|seed| {
            let cfg = BuildConfig::new(5, Power::Means, 0.25, Budget::Total(200), seed);
            let b = build(&p, &cfg).unwrap();
            (b.coreset.cost(&s).unwrap() - truth) / truth
        })
        .collect();
    let n = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / n;
    let std = (errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    let bound = 3.0 * std / n.sqrt();
    Outcome {
        passed: mean.abs() <= bound,
        detail: format!("mean rel. signed error {mean:.2e}, bound {bound:.2e} (std {std:.3})"),
    }
}

fn scaling_probe() -> Outcome {
    let p = mixture(5000, 5, 5, 3);
    let cfg = SweepConfig {
        build: BuildConfig::new(5, Power::Means, 0.25, Budget::Total(100), 0),
        sizes: vec![100, 200, 400, 800, 1600],
        seeds: (0..20).collect(),
        pool: PoolSpec::mixed(50, 7),
        mode: SweepMode::Sampled,
    };
    let r = sweep(&p, &cfg).unwrap();
    let slope = r.slope.unwrap_or(f64::NAN);
    Outcome {
        passed: (-0.7..=-0.3).contains(&slope),
        detail: format!(
            "slope {slope:.3}, medians {}",
            r.errors.iter().map(|e| format!("{e:.3}")).collect::<Vec<_>>().join("/")
        ),
    }
}

/// Varied instances for the structural checks.
fn instance_zoo(count: usize) -> Vec<(WeightedPointSet, usize, Power)> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..count)
        .map(|i| {
            let k = rng.random_range(1..=8);
            let n = rng.random_range(50..=1500);
            let d = rng.random_range(1..=12);
            let spec = match i % 3 {
                0 => SyntheticSpec::GaussianMixture { clusters: k, dim: d, n, sep: rng.random_range(2.0..20.0), sigma: 1.0 },
                1 => SyntheticSpec::UniformCube { dim: d, n },
                _ => SyntheticSpec::ClusteredRings { clusters: k, dim: d, n, sep: 10.0, radius: 2.0 },
            };
            let mut p = generate(&spec, i as u64).unwrap();
            if i % 4 == 1 {
                let w: Vec<f64> = (0..p.len()).map(|_| rng.random_range(0.2..5.0)).collect();
                p = WeightedPointSet::from_flat(p.dim(), p.coords().to_vec(), w).unwrap();
            }
            let power = if i % 2 == 0 { Power::Means } else { Power::Median };
            (p, k, power)
        })
        .collect()
}

fn assumption_four() -> Outcome {
    let mut violations = 0usize;
    let mut pairs = 0u64;
    for (i, (p, k, power)) in instance_zoo(50).into_iter().enumerate() {
        let eps = [0.5, 0.25, 0.1][i % 3];
        let rounded = round_weights(&p, eps).unwrap();
        let q = rounded.points;
        let a = seed_bicriteria(&q, k, power, 2.0, i as u64).unwrap();
        let asg = assign(&q, &a).unwrap();
        let g = build_groups(&q, &a, &asg, eps).unwrap();
        for group in &g.groups {
            for ci in &group.cells {
                for cj in &group.cells {
                    pairs += 1;
                    violations += usize::from(ci.cost > 2.0 * cj.cost);
                }
                for &x in &ci.members {
                    for &y in &ci.members {
                        pairs += 1;
                        violations += usize::from(asg.point_cost[x] > 2.0 * asg.point_cost[y]);
                    }
                }
            }
        }
        if g.validate(&asg).is_err() {
            violations += 1;
        }
    }
    Outcome {
        passed: violations == 0,
        detail: format!("{violations} violations over {pairs} pairs"),
    }
}

fn inner_product_lemma() -> Outcome {
    let r = subspace_cases(None, 200, &[0.5, 0.25, 0.125], 5).unwrap();
    Outcome {
        passed: r.within_additions == 200 && r.bound_holds == 200,
        detail: format!(
            "{}/200 within the addition bound (max {:.2} of it), {}/200 with the bound verified (max ratio/eps {:.3})",
            r.within_additions, r.max_additions_over_bound, r.bound_holds, r.max_ratio_over_eps
        ),
    }
}

fn pythagorean_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let d = rng.random_range(1..=20);
        let r = rng.random_range(0..=d);
        let vecs = gaussian_rows(&mut rng, r, d, 1.0);
        let refs: Vec<&[f64]> = vecs.iter().map(|v| v.as_slice()).collect();
        let basis = SubspaceBasis::span_of(d, &refs).unwrap();
        let p = &gaussian_rows(&mut rng, 1, d, 3.0)[0];
        let s = &gaussian_rows(&mut rng, 1, d, 3.0)[0];
        let t = pythagorean_split(p, s, &basis).unwrap();
        let d2 = sq_dist(p, s);
        worst = worst.max((t.recombine() - d2).abs() / d2);
    }
    Outcome { passed: worst <= 1e-9, detail: format!("max relative deviation {worst:.1e}") }
}

fn net_coverage() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows = (0..6).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let p = WeightedPointSet::unweighted(rows).unwrap();
    assert_eq!(p.distinct_count(), 6);
    let a = netlab_reference(&p, Power::Means, 0).unwrap();
    let mut cov = Vec::new();
    let mut sizes = Vec::new();
    for alpha in [0.5, 0.25] {
        let net = build_net(&p, &a, &TypeParams::new(4, alpha, 0.1), &NetConfig::default()).unwrap();
        let r = verify_net(&net, &p, &a, 200, 4.0, 1).unwrap();
        sizes.push(net.size());
        cov.push(r.coverage);
    }
    Outcome {
        passed: cov[0] >= 0.99 && cov[1] >= cov[0],
        detail: format!(
            "coverage {:.3} (alpha 0.5, net size {:.2e}) and {:.3} (alpha 0.25, net size {:.2e})",
            cov[0], sizes[0] as f64, cov[1], sizes[1] as f64
        ),
    }
}

fn event_e() -> Outcome {
    let (k, eps) = (5usize, 0.25);
    let m = (10.0 * k as f64 * (k as f64).ln() / (eps * eps)).ceil() as usize;
    let p = mixture(2000, 5, k, 8);
    let runs = 500;
    let mut ok = 0;
    for seed in 0..runs {
        let cfg = BuildConfig::new(k, Power::Means, eps, Budget::PerGroup(m), seed);
        let prep = prepare(&p, &cfg).unwrap();
        let c = prep.sample(cfg.budget, seed).unwrap();
        ok += usize::from(check_event_e(&c, &prep.assignment, eps).unwrap().iter().all(|&b| b));
    }
    let freq = ok as f64 / runs as f64;
    let need = 1.0 - 1.0 / (k * k) as f64 - 0.05;
    Outcome {
        passed: freq >= need,
        detail: format!("frequency {freq:.3} >= {need:.3} with {m} draws per group"),
    }
}

fn sampling_distribution_and_probe() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut groups = 0;
    for (i, (p, k, power)) in instance_zoo(30).into_iter().enumerate() {
        let cfg = BuildConfig::new(k, power, 0.25, Budget::Total(1), i as u64);
        let prep = prepare(&p, &cfg).unwrap();
        for gid in 0..prep.groups.num_groups() {
            let dist = sampling_distribution(&prep.rounded, &prep.groups, gid).unwrap();
            let total: f64 = dist.iter().map(|(_, q)| q).sum();
            worst = worst.max((total - 1.0).abs());
            groups += 1;
        }
    }
    let p = mixture(2000, 5, 5, 9);
    let b = build(&p, &BuildConfig::new(5, Power::Means, 0.25, Budget::Total(400), 3)).unwrap();
    let s = fixed_candidate(&p, 5, 12);
    let r = gaussian_probe(&p, &b.coreset.points, &b.reference, &s, 10_000, 4, Multipliers::Gaussian).unwrap();
    let z = r.variance_z();
    Outcome {
        passed: worst <= 1e-12 && z <= 3.0,
        detail: format!("max |sum P - 1| {worst:.1e} over {groups} groups; probe variance z-score {z:.2}"),
    }
}

fn run_cli(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_coreset"))
        .args(args)
        .status()
        .expect("run coreset binary")
        .code()
        .unwrap_or(-1)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let input = d.join("points.csv");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let spec = r#"{"kind":"gaussian_mixture","clusters":4,"dim":400,"n":1000,"sep":10.0,"sigma":1.0}"#;
    let mut codes = vec![run_cli(&["gen", "--spec", spec, "--seed", "5", "--output", &s(&input)])];
    for run in ["a", "b"] {
        codes.push(run_cli(&[
            "build", "--input", &s(&input), "--output", &s(&d.join(run)), "--k", "4", "--z", "2",
            "--eps", "0.25", "--budget", "500", "--seed", "42",
        ]));
    }
    let same = ["coreset.csv", "meta.json"].iter().all(|f| {
        let a = std::fs::read(d.join("a").join(f)).unwrap_or_default();
        let b = std::fs::read(d.join("b").join(f)).unwrap_or_else(|_| vec![1]);
        !a.is_empty() && a == b
    });
    Outcome {
        passed: codes.iter().all(|&c| c == 0) && same,
        detail: format!("exit codes {codes:?}, artifacts byte-identical: {same}"),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        check(1, "oracle equivalence", secs(10), oracle_equivalence),
        check(2, "unbiasedness", secs(120), unbiasedness),
        check(3, "scaling probe", secs(600), scaling_probe),
        check(4, "group invariants", secs(60), assumption_four),
        check(5, "inner-product subspace", secs(60), inner_product_lemma),
        check(6, "pythagorean identity", secs(5), pythagorean_identity),
        check(7, "net coverage", secs(300), net_coverage),
        check(8, "weight concentration event", secs(180), event_e),
        check(9, "sampling distribution and probe", secs(30), sampling_distribution_and_probe),
        check(10, "determinism", secs(60), determinism),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
