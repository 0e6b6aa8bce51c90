use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cost::nearest;
use crate::error::{param, Result};
use crate::point::{Power, Solution, WeightedPointSet};
use crate::solver::Assignment;

/// Default constant in the large-type cutoff `log2(gamma * eps^{-z})`.
pub const DEFAULT_GAMMA: f64 = 1.0;

/// Type of an `A`-cluster relative to a candidate solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "label", content = "i", rename_all = "snake_case")]
pub enum TypeLabel {
    /// `i <= 3`, including clusters that are cheaper under the candidate.
    Small,
    Typed(i32),
    Large,
}

/// `floor(log2(min_s / min_a))`, `None` when `min_a` is zero.
pub fn type_index(min_cost_s: f64, min_cost_a: f64) -> Option<i32> {
    if !(min_cost_a > 0.0) {
        return None;
    }
    if !(min_cost_s > 0.0) {
        return Some(i32::MIN);
    }
    Some((min_cost_s / min_cost_a).log2().floor() as i32)
}

/// Smallest index labelled large: `i >= log2(gamma * eps^{-z})`.
pub fn large_cutoff(eps: f64, power: Power, gamma: f64) -> f64 {
    (gamma * eps.powi(-(power.z() as i32))).log2()
}

pub fn label(min_cost_s: f64, min_cost_a: f64, eps: f64, power: Power, gamma: f64) -> TypeLabel {
    match type_index(min_cost_s, min_cost_a) {
        None if min_cost_s > 0.0 => TypeLabel::Large,
        None => TypeLabel::Small,
        Some(i) if i <= 3 => TypeLabel::Small,
        Some(i) if i as f64 >= large_cutoff(eps, power, gamma) => TypeLabel::Large,
        Some(i) => TypeLabel::Typed(i),
    }
}

/// Per-cluster minima `(min_p cost(p, S), min_p cost(p, A))`.
///
/// Members sitting exactly on their center are handled exactly by the zero
/// bucket and would pin the `A`-minimum to 0, so both minima range over
/// members with positive `cost(p, A)` whenever the cluster has any.
pub fn cluster_minima(
    points: &WeightedPointSet,
    asg: &Assignment,
    s: &Solution,
) -> Result<Vec<(f64, f64)>> {
    points.check_dim(s.dim())?;
    if asg.cluster_of.len() != points.len() {
        return Err(param("assignment does not match the point set"));
    }
    Ok(asg
        .clusters
        .iter()
        .map(|members| {
            let positive = members.iter().any(|&p| asg.point_cost[p] > 0.0);
            members
                .iter()
                .filter(|&&p| !positive || asg.point_cost[p] > 0.0)
                .fold((f64::INFINITY, f64::INFINITY), |(ms, ma), &p| {
                    let cs = nearest(points.point(p), s).0;
                    (ms.min(cs), ma.min(asg.point_cost[p]))
                })
        })
        .collect())
}

/// Labels every cluster of `asg` against the candidate `s`.
pub fn classify_types(
    points: &WeightedPointSet,
    asg: &Assignment,
    s: &Solution,
    eps: f64,
    gamma: f64,
) -> Result<Vec<TypeLabel>> {
    Ok(cluster_minima(points, asg, s)?
        .into_iter()
        .map(|(ms, ma)| label(ms, ma, eps, s.power(), gamma))
        .collect())
}

/// Counts of clusters per type.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeHistogram {
    pub small: usize,
    pub large: usize,
    /// `i -> k_i` for the intermediate types.
    pub typed: BTreeMap<i32, usize>,
}

impl TypeHistogram {
    pub fn from_labels(labels: &[TypeLabel]) -> Self {
        let mut h = TypeHistogram::default();
        for l in labels {
            match *l {
                TypeLabel::Small => h.small += 1,
                TypeLabel::Large => h.large += 1,
                TypeLabel::Typed(i) => *h.typed.entry(i).or_default() += 1,
            }
        }
        h
    }

    pub fn total(&self) -> usize {
        self.small + self.large + self.typed.values().sum::<usize>()
    }

    pub fn merge(&mut self, other: &TypeHistogram) {
        self.small += other.small;
        self.large += other.large;
        for (&i, &c) in &other.typed {
            *self.typed.entry(i).or_default() += c;
        }
    }
}
