//! Deterministic synthetic instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::point::WeightedPointSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SyntheticSpec {
    /// Isotropic Gaussians around `clusters` well-separated means.
    GaussianMixture {
        clusters: usize,
        dim: usize,
        n: usize,
        sep: f64,
        sigma: f64,
    },
    /// Uniform in `[0, 1)^dim`.
    UniformCube { dim: usize, n: usize },
    /// Points on spheres of radius `radius` (plus 5% radial jitter) around
    /// means placed as in the Gaussian mixture.
    ClusteredRings {
        clusters: usize,
        dim: usize,
        n: usize,
        sep: f64,
        radius: f64,
    },
}

/// Mean of mixture component `j`: `+-e_a` scaled so neighbouring axes are
/// `sep` apart, with further layers pushed outward by `sep` per layer.
pub fn mixture_mean(j: usize, dim: usize, sep: f64) -> Vec<f64> {
    let axis = j % dim;
    let sign = if (j / dim).is_multiple_of(2) { 1.0 } else { -1.0 };
    let layer = j / (2 * dim);
    let mut c = vec![0.0; dim];
    c[axis] = sign * sep * (std::f64::consts::FRAC_1_SQRT_2 + layer as f64);
    c
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Generates the instance; point `i` belongs to component `i % clusters`.
pub fn generate(spec: &SyntheticSpec, seed: u64) -> Result<WeightedPointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = match *spec {
        SyntheticSpec::GaussianMixture { clusters, dim, n, sep, sigma } => {
            check(clusters, dim, n)?;
            if !(sigma >= 0.0 && sep >= 0.0 && sigma.is_finite() && sep.is_finite()) {
                return Err(param("sep and sigma must be finite and nonnegative"));
            }
            let means: Vec<Vec<f64>> = (0..clusters).map(|j| mixture_mean(j, dim, sep)).collect();
            (0..n)
                .map(|i| {
                    means[i % clusters]
                        .iter()
                        .map(|m| m + sigma * gaussian(&mut rng))
                        .collect()
                })
                .collect()
        }
        SyntheticSpec::UniformCube { dim, n } => {
            check(1, dim, n)?;
            (0..n)
                .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
                .collect()
        }
        SyntheticSpec::ClusteredRings { clusters, dim, n, sep, radius } => {
            check(clusters, dim, n)?;
            if !(radius > 0.0 && radius.is_finite() && sep >= 0.0 && sep.is_finite()) {
                return Err(param("radius must be positive and sep nonnegative"));
            }
            let means: Vec<Vec<f64>> = (0..clusters).map(|j| mixture_mean(j, dim, sep)).collect();
            (0..n)
                .map(|i| {
                    let mut u: Vec<f64> = (0..dim).map(|_| gaussian(&mut rng)).collect();
                    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
                    let r = radius * (1.0 + 0.05 * (2.0 * rng.random::<f64>() - 1.0));
                    u.iter_mut().for_each(|x| *x *= r / norm);
                    means[i % clusters].iter().zip(&u).map(|(m, x)| m + x).collect()
                })
                .collect()
        }
    };
    WeightedPointSet::unweighted(rows)
}

fn check(clusters: usize, dim: usize, n: usize) -> Result<()> {
    if clusters == 0 || dim == 0 || n == 0 {
        return Err(param("clusters, dim and n must be positive"));
    }
    Ok(())
}
