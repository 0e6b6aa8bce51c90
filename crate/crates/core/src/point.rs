//! Points, weighted instances and solutions.

use std::collections::HashSet;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{param, CoresetError, Result};

/// A point in `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(CoresetError::NonFinite { index: 0 });
        }
        Ok(Point(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Exponent `z` of the clustering objective: `cost(p, s) = dist(p, s)^z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Power {
    /// `z = 1`
    Median,
    /// `z = 2`
    Means,
}

impl Power {
    pub fn from_z(z: u8) -> Result<Self> {
        match z {
            1 => Ok(Power::Median),
            2 => Ok(Power::Means),
            other => Err(param(format!("z must be 1 or 2, got {other}"))),
        }
    }

    pub fn z(self) -> u8 {
        match self {
            Power::Median => 1,
            Power::Means => 2,
        }
    }

    /// Converts a squared distance into a cost.
    #[inline]
    pub fn from_sq_dist(self, sq: f64) -> f64 {
        match self {
            Power::Median => sq.sqrt(),
            Power::Means => sq,
        }
    }

    /// Inverse of a cost into a distance, `cost^{1/z}`.
    #[inline]
    pub fn to_dist(self, cost: f64) -> f64 {
        match self {
            Power::Median => cost,
            Power::Means => cost.sqrt(),
        }
    }
}

impl From<Power> for u8 {
    fn from(p: Power) -> u8 {
        p.z()
    }
}

impl TryFrom<u8> for Power {
    type Error = CoresetError;

    fn try_from(z: u8) -> Result<Self> {
        Power::from_z(z)
    }
}

/// The instance `P`: points with nonnegative weights, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPointSet {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedPointSet {
    /// Builds a set from rows and weights, validating shapes and values.
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(CoresetError::EmptyInstance);
        }
        if points.len() != weights.len() {
            return Err(param(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        let dim = points[0].len();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for row in &points {
            if row.len() != dim {
                return Err(CoresetError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(dim, coords, weights)
    }

    /// Unit-weight set.
    pub fn unweighted(points: Vec<Vec<f64>>) -> Result<Self> {
        let w = vec![1.0; points.len()];
        Self::new(points, w)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(CoresetError::EmptyInstance);
        }
        if dim == 0 {
            return Err(param("dimension must be at least 1"));
        }
        if coords.len() != dim * weights.len() {
            return Err(param(format!(
                "{} coordinates do not form {} rows of dimension {dim}",
                coords.len(),
                weights.len()
            )));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(CoresetError::NonFinite { index: i / dim });
        }
        if let Some((i, &w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(CoresetError::InvalidWeight { index: i, weight: w });
        }
        Ok(WeightedPointSet { dim, coords, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored points `|P|` (duplicates counted).
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.coords
            .chunks_exact(self.dim)
            .zip(self.weights.iter().copied())
    }

    pub fn total_weight(&self) -> f64 {
        crate::cost::compensated_sum(self.weights.iter().copied())
    }

    /// Distinct-point count `||P||_0`. Coordinates are compared bitwise with
    /// `-0.0` identified with `0.0`.
    pub fn distinct_count(&self) -> usize {
        self.coords
            .chunks_exact(self.dim)
            .map(point_key)
            .collect::<HashSet<_>>()
            .len()
    }

    /// Index of the first occurrence of every distinct point, in input order.
    pub fn distinct_indices(&self) -> Vec<usize> {
        let mut seen = HashSet::new();
        (0..self.len())
            .filter(|&i| seen.insert(point_key(self.point(i))))
            .collect()
    }

    /// Same points with every weight multiplied by `factor`.
    pub fn scaled_weights(&self, factor: f64) -> Result<Self> {
        let weights = self.weights.iter().map(|w| w * factor).collect();
        Self::from_flat(self.dim, self.coords.clone(), weights)
    }

    /// Subset of rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        let weights = indices.iter().map(|&i| self.weights[i]).collect();
        Self::from_flat(self.dim, coords, weights)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim {
            return Err(CoresetError::DimensionMismatch {
                expected: self.dim,
                found: dim,
            });
        }
        Ok(())
    }
}

pub(crate) fn point_key(p: &[f64]) -> Vec<u64> {
    p.iter()
        .map(|&c| if c == 0.0 { 0u64 } else { c.to_bits() })
        .collect()
}

/// An ordered set of centers together with the objective exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    dim: usize,
    coords: Vec<f64>,
    power: Power,
}

impl Solution {
    pub fn new(centers: Vec<Vec<f64>>, power: Power) -> Result<Self> {
        let Some(first) = centers.first() else {
            return Err(CoresetError::EmptySolution);
        };
        let dim = first.len();
        let mut coords = Vec::with_capacity(centers.len() * dim);
        for c in &centers {
            if c.len() != dim {
                return Err(CoresetError::DimensionMismatch {
                    expected: dim,
                    found: c.len(),
                });
            }
            coords.extend_from_slice(c);
        }
        Self::from_flat(dim, coords, power)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>, power: Power) -> Result<Self> {
        if coords.is_empty() {
            return Err(CoresetError::EmptySolution);
        }
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(param("center coordinates do not match dimension"));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(CoresetError::NonFinite { index: i / dim });
        }
        Ok(Solution { dim, coords, power })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn power(&self) -> Power {
        self.power
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn center(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn centers(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn with_power(&self, power: Power) -> Self {
        Solution {
            power,
            ..self.clone()
        }
    }

    /// Keeps only the listed centers, in order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &j in indices {
            coords.extend_from_slice(self.center(j));
        }
        Self::from_flat(self.dim, coords, self.power)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            WeightedPointSet::new(vec![vec![0.0, 1.0], vec![0.0]], vec![1.0, 1.0]),
            Err(CoresetError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            WeightedPointSet::new(vec![vec![f64::NAN]], vec![1.0]),
            Err(CoresetError::NonFinite { index: 0 })
        ));
        assert!(matches!(
            WeightedPointSet::new(vec![vec![1.0]], vec![-1.0]),
            Err(CoresetError::InvalidWeight { .. })
        ));
        assert!(matches!(
            Solution::new(vec![], Power::Means),
            Err(CoresetError::EmptySolution)
        ));
        assert!(Power::from_z(3).is_err());
    }

    #[test]
    fn distinct_count_merges_duplicates_and_signed_zero() {
        let p = WeightedPointSet::unweighted(vec![
            vec![0.0, 1.0],
            vec![-0.0, 1.0],
            vec![2.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(p.distinct_count(), 2);
        assert!(p.distinct_count() <= p.len());
        assert_eq!(p.distinct_indices(), vec![0, 2]);
    }
}
