//! End-to-end coreset construction.

use serde::{Deserialize, Serialize};

use crate::decompose::{
    build_groups, reduce_dimension, round_weights, GroupedInstance, Projection, DEFAULT_JL_CONSTANT,
};
use crate::error::{param, Result};
use crate::point::{Power, Solution, WeightedPointSet};
use crate::sampler::{draw_coreset_with_budgets, split_budget, Coreset};
use crate::solver::{assign, seed_with_indices, Assignment, DEFAULT_OVERSAMPLE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    PerGroup(usize),
    /// Split evenly over groups, remainder to the costliest ones.
    Total(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub k: usize,
    pub power: Power,
    pub eps: f64,
    pub budget: Budget,
    pub seed: u64,
    pub oversample: f64,
    pub jl_constant: f64,
}

impl BuildConfig {
    pub fn new(k: usize, power: Power, eps: f64, budget: Budget, seed: u64) -> Self {
        BuildConfig {
            k,
            power,
            eps,
            budget,
            seed,
            oversample: DEFAULT_OVERSAMPLE,
            jl_constant: DEFAULT_JL_CONSTANT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(param("k must be at least 1"));
        }
        if !(self.eps > 0.0 && self.eps <= 0.5) {
            return Err(param(format!("eps must lie in (0, 1/2], got {}", self.eps)));
        }
        match self.budget {
            Budget::PerGroup(0) | Budget::Total(0) => Err(param("budget must be positive")),
            _ => Ok(()),
        }
    }
}

/// Independent stream for each pipeline stage.
pub fn stage_seed(seed: u64, stage: u64) -> u64 {
    // splitmix64 finalizer
    let mut x = seed ^ stage.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

const STAGE_PROJECT: u64 = 1;
const STAGE_SEED: u64 = 2;
const STAGE_SAMPLE: u64 = 3;

/// Everything computed on the way to the coreset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Built {
    pub config: BuildConfig,
    /// Lives in the projected space; weights are on the input scale and
    /// provenance sources index the input points.
    pub coreset: Coreset,
    pub projection: Projection,
    /// Input indices of the centers of `A`.
    pub reference_indices: Vec<usize>,
    /// `A` in the projected space.
    pub reference: Solution,
    pub weight_scale: f64,
    pub num_groups: usize,
}

impl Built {
    /// `A` in the input space.
    pub fn reference_original(&self, points: &WeightedPointSet) -> Result<Solution> {
        let mut coords = Vec::with_capacity(self.reference_indices.len() * points.dim());
        for &i in &self.reference_indices {
            coords.extend_from_slice(points.point(i));
        }
        Solution::from_flat(points.dim(), coords, self.config.power)
    }
}

/// The prepared instance, before sampling.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub projected: WeightedPointSet,
    pub projection: Projection,
    /// Projected points with integral weights; `kept[i]` is the input index.
    pub rounded: WeightedPointSet,
    pub kept: Vec<usize>,
    pub scale: f64,
    pub reference: Solution,
    pub reference_indices: Vec<usize>,
    pub assignment: Assignment,
    pub groups: GroupedInstance,
}

pub fn prepare(points: &WeightedPointSet, config: &BuildConfig) -> Result<Prepared> {
    config.validate()?;
    let (projected, projection) = reduce_dimension(
        points,
        config.k,
        config.eps,
        config.jl_constant,
        stage_seed(config.seed, STAGE_PROJECT),
    )?;
    let rounded = round_weights(&projected, config.eps)?;
    let (reference, local) = seed_with_indices(
        &rounded.points,
        config.k,
        config.power,
        config.oversample,
        stage_seed(config.seed, STAGE_SEED),
    )?;
    let assignment = assign(&rounded.points, &reference)?;
    let groups = build_groups(&rounded.points, &reference, &assignment, config.eps)?;
    Ok(Prepared {
        reference_indices: local.iter().map(|&i| rounded.kept[i]).collect(),
        projected,
        projection,
        rounded: rounded.points,
        kept: rounded.kept,
        scale: rounded.scale,
        reference,
        assignment,
        groups,
    })
}

impl Prepared {
    /// Samples a coreset with a given budget; `seed` drives only the draws.
    pub fn sample(&self, budget: Budget, seed: u64) -> Result<Coreset> {
        let budgets = match budget {
            Budget::PerGroup(m) => vec![m; self.groups.num_groups()],
            Budget::Total(t) => split_budget(&self.groups, t)?,
        };
        let mut coreset = draw_coreset_with_budgets(
            &self.rounded,
            &self.reference,
            &self.groups,
            &budgets,
            stage_seed(seed, STAGE_SAMPLE),
        )?;
        for prov in &mut coreset.provenance {
            prov.source = self.kept[prov.source];
        }
        coreset.rescaled(self.scale)
    }
}

/// Projection, rounding, reference solution, grouping and sampling.
pub fn build(points: &WeightedPointSet, config: &BuildConfig) -> Result<Built> {
    let prepared = prepare(points, config)?;
    let coreset = prepared.sample(config.budget, config.seed)?;
    Ok(Built {
        config: config.clone(),
        coreset,
        projection: prepared.projection,
        reference_indices: prepared.reference_indices,
        reference: prepared.reference,
        weight_scale: prepared.scale,
        num_groups: prepared.groups.num_groups(),
    })
}
