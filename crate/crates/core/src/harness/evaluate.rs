use serde::{Deserialize, Serialize};

use crate::cost::cost_set;
use crate::decompose::Projection;
use crate::error::{param, Result};
use crate::exec;
use crate::harness::candidates::{Candidate, Strategy};
use crate::harness::types::{classify_types, TypeHistogram};
use crate::point::{Solution, WeightedPointSet};
use crate::solver::{assign, Assignment};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub index: usize,
    pub strategy: Option<Strategy>,
    pub cost_full: f64,
    pub cost_coreset: f64,
    /// `cost(coreset, S) - cost(P, S)`.
    pub signed_error: f64,
    pub relative_error: f64,
    /// `|signed_error| / (cost(P, S) + cost(P, A))`.
    pub additive_error: f64,
    pub types: TypeHistogram,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub max: f64,
    pub mean: f64,
    pub p50: f64,
    pub p95: f64,
}

impl Aggregates {
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Aggregates { max: 0.0, mean: 0.0, p50: 0.0, p95: 0.0 };
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Aggregates {
            max: sorted[sorted.len() - 1],
            mean: crate::cost::compensated_sum(values.iter().copied()) / values.len() as f64,
            p50: quantile(&sorted, 0.5),
            p95: quantile(&sorted, 0.95),
        }
    }
}

/// Linear interpolation between order statistics of a sorted slice.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalParams {
    pub eps: f64,
    pub gamma: f64,
    pub candidates: usize,
    pub cost_reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub params: EvalParams,
    pub per_candidate: Vec<CandidateReport>,
    /// Over relative errors; `max` is the pool distortion.
    pub aggregates: Aggregates,
    pub additive_aggregates: Aggregates,
    /// Summed over the pool.
    #[serde(rename = "type_histograms")]
    pub type_histogram: TypeHistogram,
}

impl DistortionReport {
    /// Max relative error over the pool, a lower bound on the true distortion.
    pub fn pool_distortion(&self) -> f64 {
        self.aggregates.max
    }
}

/// The full instance in the projected space, with `A` and its clusters.
pub struct EvalContext {
    pub projection: Projection,
    pub points: WeightedPointSet,
    pub reference: Solution,
    pub assignment: Assignment,
    pub cost_reference: f64,
    pub eps: f64,
    pub gamma: f64,
}

impl EvalContext {
    /// `original` is projected with `projection`; `reference` must already
    /// be in the projected space.
    pub fn new(
        original: &WeightedPointSet,
        projection: Projection,
        reference: Solution,
        eps: f64,
        gamma: f64,
    ) -> Result<Self> {
        Self::from_projected(projection.project_set(original)?, projection, reference, eps, gamma)
    }

    pub fn from_projected(
        points: WeightedPointSet,
        projection: Projection,
        reference: Solution,
        eps: f64,
        gamma: f64,
    ) -> Result<Self> {
        let assignment = assign(&points, &reference)?;
        let cost_reference = cost_set(&points, &reference)?;
        Ok(EvalContext {
            projection,
            points,
            reference,
            assignment,
            cost_reference,
            eps,
            gamma,
        })
    }

    /// Projects candidates given in the input space.
    pub fn project(&self, candidates: &[Candidate]) -> Result<Vec<Candidate>> {
        candidates
            .iter()
            .map(|c| {
                Ok(Candidate {
                    strategy: c.strategy,
                    solution: self.projection.project_solution(&c.solution)?,
                })
            })
            .collect()
    }

    /// Evaluates projected candidates against a coreset in the projected space.
    pub fn evaluate(&self, coreset: &WeightedPointSet, candidates: &[Candidate]) -> Result<DistortionReport> {
        self.evaluate_with_costs(coreset, candidates, None)
    }

    /// Like [`EvalContext::evaluate`], reusing precomputed `cost(P, S)`.
    pub fn evaluate_with_costs(
        &self,
        coreset: &WeightedPointSet,
        candidates: &[Candidate],
        full_costs: Option<&[f64]>,
    ) -> Result<DistortionReport> {
        if candidates.is_empty() {
            return Err(param("candidate pool is empty"));
        }
        coreset.check_dim(self.points.dim())?;
        if full_costs.is_some_and(|c| c.len() != candidates.len()) {
            return Err(param("one full cost per candidate is required"));
        }
        let reports = exec::map_range(candidates.len(), |j| -> Result<CandidateReport> {
            let s = &candidates[j].solution;
            let cost_full = match full_costs {
                Some(c) => c[j],
                None => cost_set(&self.points, s)?,
            };
            let cost_coreset = exec::sequential(|| cost_set(coreset, s))?;
            let signed_error = cost_coreset - cost_full;
            let relative_error = if cost_full > 0.0 {
                signed_error.abs() / cost_full
            } else if signed_error == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            let denom = cost_full + self.cost_reference;
            let additive_error = if denom > 0.0 { signed_error.abs() / denom } else { 0.0 };
            let labels = classify_types(&self.points, &self.assignment, s, self.eps, self.gamma)?;
            Ok(CandidateReport {
                index: j,
                strategy: Some(candidates[j].strategy),
                cost_full,
                cost_coreset,
                signed_error,
                relative_error,
                additive_error,
                types: TypeHistogram::from_labels(&labels),
            })
        });
        let per_candidate = reports.into_iter().collect::<Result<Vec<_>>>()?;
        let rel: Vec<f64> = per_candidate.iter().map(|r| r.relative_error).collect();
        let add: Vec<f64> = per_candidate.iter().map(|r| r.additive_error).collect();
        let mut type_histogram = TypeHistogram::default();
        for r in &per_candidate {
            type_histogram.merge(&r.types);
        }
        Ok(DistortionReport {
            params: EvalParams {
                eps: self.eps,
                gamma: self.gamma,
                candidates: candidates.len(),
                cost_reference: self.cost_reference,
            },
            aggregates: Aggregates::of(&rel),
            additive_aggregates: Aggregates::of(&add),
            per_candidate,
            type_histogram,
        })
    }

    /// `cost(P, S)` for every candidate.
    pub fn full_costs(&self, candidates: &[Candidate]) -> Result<Vec<f64>> {
        candidates.iter().map(|c| cost_set(&self.points, &c.solution)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::candidates::{generate_candidates, CandidateContext, PoolSpec};
    use crate::point::Power;
    use crate::solver::seed_bicriteria;
    use crate::synthetic::{generate, SyntheticSpec};

    #[test]
    fn identity_coreset_has_zero_error() {
        let p = generate(
            &SyntheticSpec::GaussianMixture { clusters: 3, dim: 2, n: 300, sep: 6.0, sigma: 1.0 },
            2,
        )
        .unwrap();
        let a = seed_bicriteria(&p, 3, Power::Means, 2.0, 0).unwrap();
        let ctx = CandidateContext { points: &p, k: 3, power: Power::Means, reference: &a, coreset: Some(&p) };
        let pool = generate_candidates(&ctx, &PoolSpec::mixed(20, 4)).unwrap();
        let ev = EvalContext::new(&p, Projection::identity(2), a, 0.1, 1.0).unwrap();
        let report = ev.evaluate(&p, &ev.project(&pool).unwrap()).unwrap();
        assert_eq!(report.pool_distortion(), 0.0);
        assert_eq!(report.additive_aggregates.max, 0.0);
        for r in &report.per_candidate {
            assert_eq!(r.types.total(), ev.assignment.num_clusters());
        }
    }

    #[test]
    fn quantiles() {
        let a = Aggregates::of(&[4.0, 1.0, 3.0, 2.0, 5.0]);
        assert_eq!(a.max, 5.0);
        assert_eq!(a.mean, 3.0);
        assert_eq!(a.p50, 3.0);
        assert!((a.p95 - 4.8).abs() < 1e-12);
    }
}
