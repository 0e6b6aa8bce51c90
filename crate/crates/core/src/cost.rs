//! Exact clustering costs.
//!
//! `cost(p, S) = min_{s in S} ||p - s||^z` and
//! `cost(P, S) = sum_p w_p * cost(p, S)`. Set costs are accumulated with
//! Neumaier compensated summation in input order, so the result does not
//! depend on the thread count.

use serde::{Deserialize, Serialize};

use crate::error::{CoresetError, Result};
use crate::exec;
use crate::point::{Power, Solution, WeightedPointSet};

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

#[inline]
pub fn sq_dist(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

#[inline]
pub fn dot(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| a * b).sum()
}

#[inline]
pub fn sq_norm(p: &[f64]) -> f64 {
    dot(p, p)
}

/// Euclidean distance.
pub fn dist(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(CoresetError::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(sq_dist(p, q).sqrt())
}

/// Nearest center without shape checks: `(cost, index)`, ties to the lowest index.
#[inline]
pub(crate) fn nearest(p: &[f64], s: &Solution) -> (f64, usize) {
    let mut best = f64::INFINITY;
    let mut arg = 0;
    for (j, c) in s.centers().enumerate() {
        let d = sq_dist(p, c);
        if d < best {
            best = d;
            arg = j;
        }
    }
    (s.power().from_sq_dist(best), arg)
}

/// `cost(p, S)` and the index of the center attaining it.
pub fn cost_point(p: &[f64], s: &Solution) -> Result<(f64, usize)> {
    if s.is_empty() {
        return Err(CoresetError::EmptySolution);
    }
    if p.len() != s.dim() {
        return Err(CoresetError::DimensionMismatch {
            expected: s.dim(),
            found: p.len(),
        });
    }
    Ok(nearest(p, s))
}

/// Weighted cost `sum_p w_p cost(p, S)`.
pub fn cost_set(points: &WeightedPointSet, s: &Solution) -> Result<f64> {
    Ok(cost_vector(points, s)?.l1_norm())
}

/// Per-point weighted costs `v_p = w_p cost(p, S)`.
pub fn cost_vector(points: &WeightedPointSet, s: &Solution) -> Result<CostVector> {
    points.check_dim(s.dim())?;
    let entries = exec::map_range(points.len(), |i| {
        points.weight(i) * nearest(points.point(i), s).0
    });
    Ok(CostVector { entries })
}

/// Cost vector `v^S` indexed by point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostVector {
    entries: Vec<f64>,
}

impl CostVector {
    pub fn from_entries(entries: Vec<f64>) -> Self {
        debug_assert!(entries.iter().all(|&v| v >= 0.0));
        CostVector { entries }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l1_norm(&self) -> f64 {
        compensated_sum(self.entries.iter().copied())
    }
}

/// Cost of a point under one center.
#[inline]
pub fn cost_to(p: &[f64], c: &[f64], power: Power) -> f64 {
    power.from_sq_dist(sq_dist(p, c))
}
