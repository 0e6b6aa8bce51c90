use coreset_core::cost::sq_norm;
use coreset_core::decompose::Projection;
use coreset_core::harness::{
    generate_candidates, sweep, Aggregates, CandidateContext, CandidateReport, EvalContext, PoolSpec,
    SweepConfig, SweepMode, SweepRow, TypeHistogram, DEFAULT_GAMMA,
};
use coreset_core::netlab::{build_net, verify_net, CoverageReport, NetConfig, NetStats, TypeParams};
use coreset_core::pipeline::{build, Budget, BuildConfig};
use coreset_core::solver::{lloyd, seed_bicriteria, DEFAULT_OVERSAMPLE};
use coreset_core::subspace::{build_ip_basis, max_violation_ratio};
use coreset_core::synthetic::generate;
use coreset_core::{Power, Solution, WeightedPointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::artifacts::{
    coreset_csv, points_csv, read_coreset, read_json, write_json, write_text, Meta, CORESET_FILE, META_FILE,
};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult, StageExt};
use crate::ingest::ingest;

fn build_config(cfg: &RunConfig) -> CliResult<BuildConfig> {
    let budget = match (cfg.budget, cfg.m_per_group) {
        (Some(t), None) => Budget::Total(t),
        (None, Some(m)) => Budget::PerGroup(m),
        (Some(_), Some(_)) => {
            return Err(CliError::validation("give either --budget or --m-per-group, not both"))
        }
        (None, None) => return Err(CliError::validation("--budget or --m-per-group is required")),
    };
    let mut b = BuildConfig::new(cfg.k()?, cfg.power()?, cfg.eps()?, budget, cfg.seed());
    if let Some(c) = cfg.jl_constant {
        b.jl_constant = c;
    }
    if let Some(o) = cfg.oversample {
        b.oversample = o;
    }
    b.validate().stage("build")?;
    Ok(b)
}

pub fn cmd_build(cfg: &RunConfig) -> CliResult<()> {
    let points = ingest(cfg.input()?, cfg.format()?)?;
    let out = cfg.output()?;
    let bc = build_config(cfg)?;
    let built = build(&points, &bc).stage("build")?;
    log::info!(
        "{} groups, coreset of {} points in dimension {}",
        built.num_groups,
        built.coreset.len(),
        built.coreset.points.dim()
    );
    write_text(&out.join(CORESET_FILE), &coreset_csv(&built))?;
    write_json(&out.join(META_FILE), &Meta::from_built(&built, &points))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvalParams {
    pub k: usize,
    pub z: u8,
    pub eps: f64,
    pub gamma: f64,
    pub seed: u64,
    pub pool: PoolSpec,
    pub passthrough: bool,
    pub build_seed: Option<u64>,
    pub cost_reference: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvalOutput {
    pub params: EvalParams,
    /// Max relative error over the candidate pool.
    pub pool_distortion: f64,
    pub per_candidate: Vec<CandidateReport>,
    pub aggregates: Aggregates,
    pub additive_aggregates: Aggregates,
    pub type_histograms: TypeHistogram,
}

pub fn cmd_eval(cfg: &RunConfig) -> CliResult<()> {
    let points = ingest(cfg.input()?, cfg.format()?)?;
    let gamma = cfg.gamma.unwrap_or(DEFAULT_GAMMA);
    let eps = cfg.eps()?;
    let meta: Option<Meta> = match &cfg.coreset {
        Some(dir) => Some(read_json(&dir.join(META_FILE))?),
        None => None,
    };
    let (k, power, projection, reference_proj, reference) = match &meta {
        Some(m) => {
            if m.input_points != points.len() || m.input_dim != points.dim() {
                return Err(CliError::validation(
                    "eval: input does not match the data the coreset was built from",
                ));
            }
            let reference = select_rows(&points, &m.reference_indices, m.params.power)?;
            (m.params.k, m.params.power, m.projection.clone(), m.reference()?, reference)
        }
        None if cfg.passthrough => {
            let (k, power) = (cfg.k()?, cfg.power()?);
            let a = seed_bicriteria(&points, k, power, DEFAULT_OVERSAMPLE, cfg.seed()).stage("eval: solver")?;
            (k, power, Projection::identity(points.dim()), a.clone(), a)
        }
        None => return Err(CliError::validation("eval needs --coreset or --passthrough")),
    };
    let ctx = EvalContext::new(&points, projection, reference_proj, eps, gamma).stage("eval")?;
    let (omega, lifted) = if cfg.passthrough {
        (ctx.points.clone(), points.clone())
    } else {
        let dir = cfg.coreset.as_ref().expect("meta implies a coreset directory");
        let file = read_coreset(&dir.join(CORESET_FILE))?;
        let mut coords = Vec::new();
        for &s in &file.sources {
            if s >= points.len() {
                return Err(CliError::validation(format!("eval: source row {s} out of range")));
            }
            coords.extend_from_slice(points.point(s));
        }
        let lifted = WeightedPointSet::from_flat(points.dim(), coords, file.points.weights().to_vec())
            .stage("eval")?;
        (file.points, lifted)
    };
    let pool = cfg.pool(50)?;
    let cands = generate_candidates(
        &CandidateContext { points: &points, k, power, reference: &reference, coreset: Some(&lifted) },
        &pool,
    )
    .stage("eval: candidates")?;
    let report = ctx
        .evaluate(&omega, &ctx.project(&cands).stage("eval")?)
        .stage("eval")?;
    let out = EvalOutput {
        params: EvalParams {
            k,
            z: power.z(),
            eps,
            gamma,
            seed: cfg.seed(),
            pool,
            passthrough: cfg.passthrough,
            build_seed: meta.as_ref().map(|m| m.seed),
            cost_reference: report.params.cost_reference,
        },
        pool_distortion: report.pool_distortion(),
        per_candidate: report.per_candidate,
        aggregates: report.aggregates,
        additive_aggregates: report.additive_aggregates,
        type_histograms: report.type_histogram,
    };
    emit_json(cfg, &out)
}

fn select_rows(points: &WeightedPointSet, rows: &[usize], power: Power) -> CliResult<Solution> {
    let mut coords = Vec::new();
    for &r in rows {
        if r >= points.len() {
            return Err(CliError::validation(format!("meta: reference row {r} out of range")));
        }
        coords.extend_from_slice(points.point(r));
    }
    Solution::from_flat(points.dim(), coords, power).stage("meta")
}

fn emit_json<T: Serialize>(cfg: &RunConfig, value: &T) -> CliResult<()> {
    match &cfg.output {
        Some(p) => write_json(p, value),
        None => {
            let text = serde_json::to_string_pretty(value)
                .map_err(|e| CliError::Runtime(format!("serialize: {e}")))?;
            println!("{text}");
            Ok(())
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepParams {
    pub k: usize,
    pub z: u8,
    pub eps: f64,
    pub seeds: Vec<u64>,
    pub pool: PoolSpec,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepSection {
    pub mode: SweepMode,
    pub sizes: Vec<usize>,
    pub errors: Vec<f64>,
    pub slope: Option<f64>,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepOutput {
    pub params: SweepParams,
    pub sweep: SweepSection,
}

pub fn cmd_sweep(cfg: &RunConfig) -> CliResult<()> {
    let points = ingest(cfg.input()?, cfg.format()?)?;
    let sizes = cfg.sizes.clone().unwrap_or_else(|| vec![100, 200, 400, 800, 1600]);
    let seeds = cfg.seeds.clone().unwrap_or_else(|| (0..20).collect());
    let pool = cfg.pool(50)?;
    let mut build = BuildConfig::new(cfg.k()?, cfg.power()?, cfg.eps()?, Budget::Total(sizes[0].max(1)), 0);
    if let Some(c) = cfg.jl_constant {
        build.jl_constant = c;
    }
    let sc = SweepConfig { build, sizes, seeds: seeds.clone(), pool: pool.clone(), mode: cfg.mode()? };
    let r = sweep(&points, &sc).stage("sweep")?;
    emit_json(
        cfg,
        &SweepOutput {
            params: SweepParams { k: sc.build.k, z: sc.build.power.z(), eps: sc.build.eps, seeds, pool },
            sweep: SweepSection { mode: r.mode, sizes: r.sizes, errors: r.errors, slope: r.slope, rows: r.rows },
        },
    )
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NetlabOutput {
    pub params: TypeParams,
    pub config: NetConfig,
    pub z: u8,
    pub seed: u64,
    pub net: NetStats,
    pub report: CoverageReport,
}

/// Single-center reference solution for the net experiments.
pub fn netlab_reference(points: &WeightedPointSet, power: Power, seed: u64) -> coreset_core::Result<Solution> {
    let init = seed_bicriteria(points, 1, power, 1.0, seed)?;
    lloyd(points, &init, 10)
}

pub fn cmd_netlab(cfg: &RunConfig) -> CliResult<()> {
    let points = ingest(cfg.input()?, cfg.format()?)?;
    let power = cfg.power()?;
    let net_cfg = cfg.netlab.clone().unwrap_or_default();
    let mut params = TypeParams::new(
        net_cfg.i.ok_or_else(|| CliError::validation("--i is required"))?,
        net_cfg.alpha.unwrap_or(0.5),
        cfg.eps.unwrap_or(0.1),
    );
    params.gamma = cfg.gamma.unwrap_or(DEFAULT_GAMMA);
    let config = NetConfig {
        k: cfg.k.unwrap_or(1),
        max_subset: net_cfg.subset.unwrap_or(NetConfig::default().max_subset),
        radius_constant: net_cfg.radius.unwrap_or(NetConfig::default().radius_constant),
    };
    let a = netlab_reference(&points, power, cfg.seed()).stage("netlab: solver")?;
    let net = build_net(&points, &a, &params, &config).stage("netlab")?;
    let report = verify_net(
        &net,
        &points,
        &a,
        net_cfg.trials.unwrap_or(200),
        net_cfg.slack.unwrap_or(4.0),
        cfg.seed(),
    )
    .stage("netlab")?;
    emit_json(
        cfg,
        &NetlabOutput { params, config, z: power.z(), seed: cfg.seed(), net: net.stats.clone(), report },
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceCase {
    pub n: usize,
    pub dim: usize,
    pub eps: f64,
    pub additions: usize,
    pub bound: usize,
    pub worst_ratio: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SubspaceOutput {
    pub seed: u64,
    pub cases: usize,
    pub within_additions: usize,
    pub bound_holds: usize,
    pub max_additions_over_bound: f64,
    pub max_ratio_over_eps: f64,
    pub failures: Vec<SubspaceCase>,
}

/// Random cases for the inner-product subspace check. With `points`, only
/// the targets are random.
pub fn subspace_cases(
    points: Option<&WeightedPointSet>,
    cases: usize,
    eps_values: &[f64],
    seed: u64,
) -> CliResult<SubspaceOutput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SubspaceOutput {
        seed,
        cases,
        within_additions: 0,
        bound_holds: 0,
        max_additions_over_bound: 0.0,
        max_ratio_over_eps: 0.0,
        failures: Vec::new(),
    };
    for c in 0..cases {
        let eps = eps_values[c % eps_values.len()];
        let rows: Vec<Vec<f64>> = match points {
            Some(p) => p.iter().map(|(x, _)| x.to_vec()).collect(),
            None => {
                let n = rng.random_range(1..=100);
                let d = rng.random_range(1..=30);
                (0..n).map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect()).collect()
            }
        };
        let dim = rows[0].len();
        let scale = (rows.iter().map(|r| sq_norm(r)).sum::<f64>() / rows.len() as f64).sqrt().max(1.0);
        let s: Vec<f64> = (0..dim).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect();
        let basis = build_ip_basis(&rows, &s, eps).stage("subspace")?;
        let bound = (1.0 / (eps * eps)).ceil() as usize + 1;
        let ratio = max_violation_ratio(&rows, &s, &basis);
        let case = SubspaceCase { n: rows.len(), dim, eps, additions: basis.rounds, bound, worst_ratio: ratio };
        let within = basis.rounds <= bound;
        let holds = ratio <= eps;
        out.within_additions += usize::from(within);
        out.bound_holds += usize::from(holds);
        out.max_additions_over_bound = out.max_additions_over_bound.max(basis.rounds as f64 / bound as f64);
        out.max_ratio_over_eps = out.max_ratio_over_eps.max(ratio / eps);
        if !(within && holds) {
            out.failures.push(case);
        }
    }
    Ok(out)
}

pub fn cmd_subspace_check(cfg: &RunConfig) -> CliResult<()> {
    let points = match &cfg.input {
        Some(p) => Some(ingest(p, cfg.format()?)?),
        None => None,
    };
    let eps_values = match cfg.eps {
        Some(e) if e > 0.0 && e < 1.0 => vec![e],
        Some(e) => return Err(CliError::validation(format!("eps must lie in (0, 1), got {e}"))),
        None => vec![0.5, 0.25, 0.125],
    };
    let trials = cfg.netlab.as_ref().and_then(|n| n.trials).unwrap_or(200);
    let out = subspace_cases(points.as_ref(), trials, &eps_values, cfg.seed())?;
    let failed = !out.failures.is_empty();
    emit_json(cfg, &out)?;
    if failed {
        return Err(CliError::Runtime(format!("subspace-check: {} failing cases", out.failures.len())));
    }
    Ok(())
}

pub fn cmd_gen(cfg: &RunConfig) -> CliResult<()> {
    let spec = cfg.spec.as_ref().ok_or_else(|| CliError::validation("--spec is required"))?;
    let points = generate(spec, cfg.seed()).stage("gen")?;
    write_text(cfg.output()?, &points_csv(&points))
}
