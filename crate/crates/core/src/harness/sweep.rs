use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::exec;
use crate::harness::candidates::{generate_candidates, CandidateContext, PoolSpec};
use crate::harness::evaluate::{quantile, EvalContext};
use crate::harness::types::DEFAULT_GAMMA;
use crate::pipeline::{prepare, stage_seed, Budget, BuildConfig};
use crate::point::WeightedPointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// A fresh coreset of every size.
    Sampled,
    /// Control: the coreset drawn at the first size is reused for all sizes,
    /// so the fitted slope is 0.
    FixedCoreset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// `budget` is ignored; `seed` is replaced by each sweep seed.
    pub build: BuildConfig,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    /// `pool.seed` is mixed with each sweep seed.
    pub pool: PoolSpec,
    pub mode: SweepMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub size: usize,
    /// Pool distortion per seed, in seed order.
    pub errors: Vec<f64>,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub mode: SweepMode,
    pub sizes: Vec<usize>,
    /// Median pool distortion per size.
    pub errors: Vec<f64>,
    /// Least-squares slope of `ln(error)` against `ln(size)`; absent when a
    /// median is zero.
    pub slope: Option<f64>,
    pub rows: Vec<SweepRow>,
}

/// Least-squares slope of `y` on `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Pool distortion of coresets of increasing total size.
pub fn sweep(points: &WeightedPointSet, cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.sizes.len() < 4 || cfg.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(param("sweep needs at least 4 strictly increasing sizes"));
    }
    if cfg.seeds.is_empty() {
        return Err(param("sweep needs at least one seed"));
    }
    let per_seed = exec::map_slice(&cfg.seeds, |&seed| -> Result<Vec<f64>> {
        let build = BuildConfig { seed, budget: Budget::Total(cfg.sizes[0]), ..cfg.build.clone() };
        let prepared = prepare(points, &build)?;
        let reference = prepared_reference(points, &prepared.reference_indices, &build)?;
        let ctx = EvalContext::from_projected(
            prepared.projected.clone(),
            prepared.projection.clone(),
            prepared.reference.clone(),
            build.eps,
            DEFAULT_GAMMA,
        )?;
        let pool = PoolSpec { seed: stage_seed(cfg.pool.seed, seed), ..cfg.pool.clone() };
        let fixed = match cfg.mode {
            SweepMode::FixedCoreset => Some(prepared.sample(Budget::Total(cfg.sizes[0]), seed)?),
            SweepMode::Sampled => None,
        };
        let mut out = Vec::with_capacity(cfg.sizes.len());
        for &size in &cfg.sizes {
            let coreset = match &fixed {
                Some(c) => c.clone(),
                None => prepared.sample(Budget::Total(size), seed)?,
            };
            let lifted = coreset.lift(points)?;
            let cands = generate_candidates(
                &CandidateContext {
                    points,
                    k: build.k,
                    power: build.power,
                    reference: &reference,
                    coreset: Some(&lifted),
                },
                &pool,
            )?;
            let report = exec::sequential(|| ctx.evaluate(&coreset.points, &ctx.project(&cands)?))?;
            out.push(report.pool_distortion());
        }
        Ok(out)
    });
    let per_seed = per_seed.into_iter().collect::<Result<Vec<_>>>()?;

    let rows: Vec<SweepRow> = cfg
        .sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            let errors: Vec<f64> = per_seed.iter().map(|e| e[i]).collect();
            let mut sorted = errors.clone();
            sorted.sort_by(f64::total_cmp);
            SweepRow { size, median: quantile(&sorted, 0.5), errors }
        })
        .collect();
    let errors: Vec<f64> = rows.iter().map(|r| r.median).collect();
    let slope = if errors.iter().all(|&e| e > 0.0 && e.is_finite()) {
        let x: Vec<f64> = cfg.sizes.iter().map(|&s| (s as f64).ln()).collect();
        let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
        Some(fit_slope(&x, &y))
    } else {
        None
    };
    Ok(SweepReport { mode: cfg.mode, sizes: cfg.sizes.clone(), errors, slope, rows })
}

fn prepared_reference(
    points: &WeightedPointSet,
    indices: &[usize],
    build: &BuildConfig,
) -> Result<crate::point::Solution> {
    let mut coords = Vec::with_capacity(indices.len() * points.dim());
    for &i in indices {
        coords.extend_from_slice(points.point(i));
    }
    crate::point::Solution::from_flat(points.dim(), coords, build.power)
}
