use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::check_eps;
use crate::error::{param, CoresetError, Result};
use crate::exec;
use crate::point::{Solution, WeightedPointSet};

/// Default constant in `m = ceil(c * ln(k / eps) / eps^2)`.
pub const DEFAULT_JL_CONSTANT: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    Identity,
    GaussianProjection,
}

/// A linear map applied identically to points and candidate centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub kind: EmbeddingKind,
    pub input_dim: usize,
    pub output_dim: usize,
    pub seed: u64,
    /// Row-major `output_dim x input_dim`; empty for the identity.
    pub matrix: Vec<f64>,
}

impl Projection {
    pub fn identity(dim: usize) -> Self {
        Projection {
            kind: EmbeddingKind::Identity,
            input_dim: dim,
            output_dim: dim,
            seed: 0,
            matrix: Vec::new(),
        }
    }

    /// Gaussian matrix with entries `N(0, 1) / sqrt(output_dim)`.
    pub fn gaussian(input_dim: usize, output_dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 1.0 / (output_dim as f64).sqrt();
        let matrix = (0..input_dim * output_dim)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * scale)
            .collect();
        Projection {
            kind: EmbeddingKind::GaussianProjection,
            input_dim,
            output_dim,
            seed,
            matrix,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kind == EmbeddingKind::Identity
    }

    fn check(&self, dim: usize) -> Result<()> {
        if dim != self.input_dim {
            return Err(CoresetError::DimensionMismatch {
                expected: self.input_dim,
                found: dim,
            });
        }
        if !self.is_identity() && self.matrix.len() != self.input_dim * self.output_dim {
            return Err(param("projection matrix has the wrong size"));
        }
        Ok(())
    }

    fn apply_unchecked(&self, p: &[f64], out: &mut Vec<f64>) {
        if self.is_identity() {
            out.extend_from_slice(p);
            return;
        }
        for row in self.matrix.chunks_exact(self.input_dim) {
            out.push(row.iter().zip(p).map(|(a, b)| a * b).sum());
        }
    }

    pub fn apply(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check(p.len())?;
        let mut out = Vec::with_capacity(self.output_dim);
        self.apply_unchecked(p, &mut out);
        Ok(out)
    }

    pub fn project_set(&self, points: &WeightedPointSet) -> Result<WeightedPointSet> {
        self.check(points.dim())?;
        if self.is_identity() {
            return Ok(points.clone());
        }
        let rows = exec::map_range(points.len(), |i| {
            let mut out = Vec::with_capacity(self.output_dim);
            self.apply_unchecked(points.point(i), &mut out);
            out
        });
        WeightedPointSet::from_flat(self.output_dim, rows.concat(), points.weights().to_vec())
    }

    pub fn project_solution(&self, s: &Solution) -> Result<Solution> {
        self.check(s.dim())?;
        if self.is_identity() {
            return Ok(s.clone());
        }
        let mut coords = Vec::with_capacity(s.len() * self.output_dim);
        for c in s.centers() {
            self.apply_unchecked(c, &mut coords);
        }
        Solution::from_flat(self.output_dim, coords, s.power())
    }
}

/// `ceil(c * ln(k / eps) / eps^2)`.
pub fn target_dimension(k: usize, eps: f64, constant: f64) -> usize {
    (constant * (k as f64 / eps).ln() / (eps * eps)).ceil().max(1.0) as usize
}

/// Seeded Gaussian random projection down to [`target_dimension`]; the
/// identity when that is not smaller than the input dimension.
pub fn reduce_dimension(
    points: &WeightedPointSet,
    k: usize,
    eps: f64,
    constant: f64,
    seed: u64,
) -> Result<(WeightedPointSet, Projection)> {
    check_eps(eps)?;
    if k == 0 {
        return Err(param("k must be at least 1"));
    }
    if !(constant.is_finite() && constant > 0.0) {
        return Err(param(format!("projection constant must be positive, got {constant}")));
    }
    let m = target_dimension(k, eps, constant);
    let proj = if m >= points.dim() {
        Projection::identity(points.dim())
    } else {
        Projection::gaussian(points.dim(), m, seed)
    };
    Ok((proj.project_set(points)?, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::sq_dist;

    #[test]
    fn low_dimension_is_unchanged() {
        let p = WeightedPointSet::unweighted(vec![vec![1.0, 2.0], vec![3.0, -1.0]]).unwrap();
        let (q, proj) = reduce_dimension(&p, 3, 0.1, DEFAULT_JL_CONSTANT, 1).unwrap();
        assert!(proj.is_identity());
        assert_eq!(p, q);
    }

    #[test]
    fn eps_out_of_range_is_rejected() {
        let p = WeightedPointSet::unweighted(vec![vec![1.0]]).unwrap();
        for eps in [0.0, 0.51, -1.0, f64::NAN] {
            assert!(reduce_dimension(&p, 1, eps, 4.0, 0).is_err());
        }
    }

    #[test]
    fn zero_maps_to_zero_and_projection_is_reproducible() {
        let proj = Projection::gaussian(50, 10, 5);
        assert!(proj.apply(&[0.0; 50]).unwrap().iter().all(|&x| x == 0.0));
        assert_eq!(proj, Projection::gaussian(50, 10, 5));
        assert!(proj.apply(&[0.0; 3]).is_err());
    }

    #[test]
    fn pairwise_distances_mostly_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (n, d) = (500, 200);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
            .collect();
        let p = WeightedPointSet::unweighted(rows).unwrap();
        let (q, proj) = reduce_dimension(&p, 5, 0.5, DEFAULT_JL_CONSTANT, 3).unwrap();
        assert_eq!(proj.output_dim, target_dimension(5, 0.5, DEFAULT_JL_CONSTANT));
        assert!(proj.output_dim < d);
        let mut good = 0;
        let pairs = 10_000;
        for _ in 0..pairs {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n);
            while j == i {
                j = rng.random_range(0..n);
            }
            let ratio = sq_dist(q.point(i), q.point(j)) / sq_dist(p.point(i), p.point(j));
            if (0.5..=1.5).contains(&ratio) {
                good += 1;
            }
        }
        assert!(good as f64 >= 0.99 * pairs as f64, "{good} of {pairs}");
    }
}
