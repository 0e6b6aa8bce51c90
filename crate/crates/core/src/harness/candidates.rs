use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::point::{Power, Solution, WeightedPointSet};
use crate::solver::{assign, lloyd, seed_bicriteria};

/// How a candidate solution is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// `k` distinct input points chosen uniformly.
    Uniform,
    /// D^z seeding with exactly `k` centers.
    Seeded,
    /// Lloyd iterations run on the coreset, started from a seeding of it.
    CoresetLloyd,
    /// `A` plus Gaussian noise at 0.1, 1 or 10 times the average cluster radius.
    Perturbed,
    /// `A` shifted by 10 times the bounding-box diagonal.
    Translated,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Uniform,
        Strategy::Seeded,
        Strategy::CoresetLloyd,
        Strategy::Perturbed,
        Strategy::Translated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Uniform => "uniform",
            Strategy::Seeded => "seeded",
            Strategy::CoresetLloyd => "coreset_lloyd",
            Strategy::Perturbed => "perturbed",
            Strategy::Translated => "translated",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        Strategy::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolSpec {
    pub count: usize,
    pub strategies: Vec<Strategy>,
    pub seed: u64,
}

impl PoolSpec {
    pub fn mixed(count: usize, seed: u64) -> Self {
        PoolSpec {
            count,
            strategies: Strategy::ALL.to_vec(),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub strategy: Strategy,
    pub solution: Solution,
}

/// Inputs shared by the candidate strategies, all in the input space.
pub struct CandidateContext<'a> {
    pub points: &'a WeightedPointSet,
    pub k: usize,
    pub power: Power,
    pub reference: &'a Solution,
    /// Needed by [`Strategy::CoresetLloyd`]; the strategy is skipped without it.
    pub coreset: Option<&'a WeightedPointSet>,
}

const LLOYD_ROUNDS: usize = 5;
const PERTURB_SCALES: [f64; 3] = [0.1, 1.0, 10.0];

/// Generates `spec.count` candidates, cycling through the usable strategies.
/// Candidate `j` uses its own random stream, so the pool is deterministic
/// per seed and a prefix of a larger pool.
pub fn generate_candidates(ctx: &CandidateContext, spec: &PoolSpec) -> Result<Vec<Candidate>> {
    if spec.count == 0 {
        return Err(param("candidate count must be at least 1"));
    }
    if ctx.k == 0 {
        return Err(param("k must be at least 1"));
    }
    ctx.points.check_dim(ctx.reference.dim())?;
    let distinct = ctx.points.distinct_count();
    let mut usable = Vec::new();
    for &s in &spec.strategies {
        if usable.contains(&s) {
            continue;
        }
        match s {
            Strategy::Uniform | Strategy::Seeded if ctx.k > distinct => {
                log::warn!(
                    "skipping {} candidates: k = {} exceeds {distinct} distinct points",
                    s.name(),
                    ctx.k
                );
            }
            Strategy::CoresetLloyd if ctx.coreset.is_none_or(|c| ctx.k > c.distinct_count()) => {
                log::warn!("skipping coreset_lloyd candidates: no usable coreset");
            }
            _ => usable.push(s),
        }
    }
    if usable.is_empty() {
        return Err(param("no candidate strategy is applicable"));
    }

    let radius = average_radius(ctx.points, ctx.reference)?;
    let diagonal = bounding_diagonal(ctx.points);
    let distinct_idx = ctx.points.distinct_indices();
    (0..spec.count)
        .map(|j| {
            let strategy = usable[j % usable.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(j as u64);
            let sub_seed: u64 = rng.random();
            let solution = match strategy {
                Strategy::Uniform => {
                    let pick = rand::seq::index::sample(&mut rng, distinct_idx.len(), ctx.k);
                    let mut rows: Vec<usize> = pick.into_iter().map(|i| distinct_idx[i]).collect();
                    rows.sort_unstable();
                    centers_at(ctx.points, &rows, ctx.power)?
                }
                Strategy::Seeded => seed_bicriteria(ctx.points, ctx.k, ctx.power, 1.0, sub_seed)?,
                Strategy::CoresetLloyd => {
                    let c = ctx.coreset.expect("checked above");
                    let init = seed_bicriteria(c, ctx.k, ctx.power, 1.0, sub_seed)?;
                    lloyd(c, &init, 1 + (j / usable.len()) % LLOYD_ROUNDS)?
                }
                Strategy::Perturbed => {
                    let scale = PERTURB_SCALES[(j / usable.len()) % PERTURB_SCALES.len()] * radius;
                    let coords = ctx
                        .reference
                        .coords()
                        .iter()
                        .map(|&x| x + scale * rng.sample::<f64, _>(StandardNormal))
                        .collect();
                    Solution::from_flat(ctx.reference.dim(), coords, ctx.power)?
                }
                Strategy::Translated => {
                    let dir = unit_vector(ctx.points.dim(), &mut rng);
                    let shift = 10.0 * diagonal.max(f64::MIN_POSITIVE);
                    let coords = ctx
                        .reference
                        .coords()
                        .chunks(ctx.reference.dim())
                        .flat_map(|c| c.iter().zip(&dir).map(|(x, u)| x + shift * u))
                        .collect();
                    Solution::from_flat(ctx.reference.dim(), coords, ctx.power)?
                }
            };
            Ok(Candidate { strategy, solution })
        })
        .collect()
}

fn centers_at(points: &WeightedPointSet, rows: &[usize], power: Power) -> Result<Solution> {
    let mut coords = Vec::with_capacity(rows.len() * points.dim());
    for &i in rows {
        coords.extend_from_slice(points.point(i));
    }
    Solution::from_flat(points.dim(), coords, power)
}

fn unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Mean over clusters of `(cost(C_j, A) / |C_j|)^{1/z}`.
pub fn average_radius(points: &WeightedPointSet, a: &Solution) -> Result<f64> {
    let asg = assign(points, a)?;
    let k = asg.num_clusters() as f64;
    Ok(asg
        .cluster_cost
        .iter()
        .zip(&asg.cluster_weight)
        .map(|(&c, &w)| a.power().to_dist(c / w))
        .sum::<f64>()
        / k)
}

/// Length of the diagonal of the bounding box.
pub fn bounding_diagonal(points: &WeightedPointSet) -> f64 {
    let d = points.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for (p, _) in points.iter() {
        for i in 0..d {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    lo.iter().zip(&hi).map(|(l, h)| (h - l) * (h - l)).sum::<f64>().sqrt()
}
