//! Gaussian-multiplier diagnostic.
//!
//! With `a_p = w_p cost(p, S) / (|coreset| * (cost(P, S) + cost(P, A)))` over
//! coreset points, the statistic `sum_p a_p g_p` is normal with mean 0 and
//! variance `sum_p a_p^2` when the `g_p` are independent standard normals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cost::{compensated_sum, cost_set, cost_to, nearest};
use crate::error::{param, Result};
use crate::point::{Solution, WeightedPointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multipliers {
    Gaussian,
    /// Every `g_p = 0`; the statistic is identically 0.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub trials: usize,
    pub coreset_size: usize,
    pub normalizer: f64,
    pub mean: f64,
    /// `sum x_t^2 / trials`, using the known mean 0.
    pub variance: f64,
    pub analytic_variance: f64,
    /// Standard error of `variance` under normality, `analytic * sqrt(2 / trials)`.
    pub variance_std_error: f64,
}

impl ProbeReport {
    /// `|variance - analytic| / std error`.
    pub fn variance_z(&self) -> f64 {
        if self.variance_std_error == 0.0 {
            return if self.variance == self.analytic_variance { 0.0 } else { f64::INFINITY };
        }
        (self.variance - self.analytic_variance).abs() / self.variance_std_error
    }
}

/// The multiplier coefficients `a_p`.
pub fn probe_coefficients(
    points: &WeightedPointSet,
    coreset: &WeightedPointSet,
    a: &Solution,
    s: &Solution,
) -> Result<(Vec<f64>, f64)> {
    if coreset.is_empty() {
        return Err(param("coreset is empty"));
    }
    let normalizer = cost_set(points, s)? + cost_set(points, &a.with_power(s.power()))?;
    coreset.check_dim(s.dim())?;
    let scale = coreset.len() as f64 * normalizer;
    let coeffs = coreset
        .iter()
        .map(|(p, w)| {
            let c = cost_to(p, s.center(nearest(p, s).1), s.power());
            if scale > 0.0 { w * c / scale } else { 0.0 }
        })
        .collect();
    Ok((coeffs, normalizer))
}

pub fn gaussian_probe(
    points: &WeightedPointSet,
    coreset: &WeightedPointSet,
    a: &Solution,
    s: &Solution,
    trials: usize,
    seed: u64,
    mode: Multipliers,
) -> Result<ProbeReport> {
    if trials == 0 {
        return Err(param("trials must be positive"));
    }
    let (coeffs, normalizer) = probe_coefficients(points, coreset, a, s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = Vec::with_capacity(trials);
    for _ in 0..trials {
        let x = compensated_sum(coeffs.iter().map(|&c| match mode {
            Multipliers::Gaussian => c * rng.sample::<f64, _>(StandardNormal),
            Multipliers::Zero => 0.0,
        }));
        stats.push(x);
    }
    let analytic = compensated_sum(coeffs.iter().map(|c| c * c));
    Ok(ProbeReport {
        trials,
        coreset_size: coreset.len(),
        normalizer,
        mean: compensated_sum(stats.iter().copied()) / trials as f64,
        variance: compensated_sum(stats.iter().map(|x| x * x)) / trials as f64,
        analytic_variance: analytic,
        variance_std_error: analytic * (2.0 / trials as f64).sqrt(),
    })
}
