//! Reference solution `A`: D^z seeding with O(k) centers, and point assignment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost::{compensated_sum, cost_to, nearest, sq_dist};
use crate::error::{param, CoresetError, Result};
use crate::exec;
use crate::point::{Power, Solution, WeightedPointSet};

/// Default ratio `|A| / k`.
pub const DEFAULT_OVERSAMPLE: f64 = 2.0;

/// Draws an index with probability `masses[i] / sum(masses)`.
///
/// Returns `None` when the total mass is zero.
pub fn sample_proportional<R: Rng + ?Sized>(masses: &[f64], rng: &mut R) -> Option<usize> {
    let total = compensated_sum(masses.iter().copied());
    if !(total > 0.0) {
        return None;
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = None;
    for (i, &m) in masses.iter().enumerate() {
        if m > 0.0 {
            acc += m;
            last_positive = Some(i);
            if acc > target {
                return Some(i);
            }
        }
    }
    last_positive
}

/// One D^z draw: picks point `p` with probability proportional to
/// `w_p * cost(p, centers)`.
pub fn dz_draw<R: Rng + ?Sized>(
    points: &WeightedPointSet,
    centers: &Solution,
    rng: &mut R,
) -> Result<Option<usize>> {
    points.check_dim(centers.dim())?;
    let masses = exec::map_range(points.len(), |i| {
        points.weight(i) * nearest(points.point(i), centers).0
    });
    Ok(sample_proportional(&masses, rng))
}

/// Chooses `ceil(oversample * k)` centers from `points` by D^z sampling.
///
/// The first center is drawn proportionally to weight. Sampling stops early
/// if every point already coincides with a chosen center, so the result has
/// at most `||P||_0` centers.
pub fn seed_bicriteria(
    points: &WeightedPointSet,
    k: usize,
    power: Power,
    oversample: f64,
    seed: u64,
) -> Result<Solution> {
    Ok(seed_with_indices(points, k, power, oversample, seed)?.0)
}

/// Like [`seed_bicriteria`], also returning the chosen point indices.
pub fn seed_with_indices(
    points: &WeightedPointSet,
    k: usize,
    power: Power,
    oversample: f64,
    seed: u64,
) -> Result<(Solution, Vec<usize>)> {
    if k == 0 {
        return Err(param("k must be at least 1"));
    }
    if !(oversample.is_finite() && oversample >= 1.0) {
        return Err(param(format!("oversample must be >= 1, got {oversample}")));
    }
    let distinct = points.distinct_count();
    if k > distinct {
        return Err(CoresetError::InfeasibleK { k, distinct });
    }
    let target = (oversample * k as f64).ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let first = sample_proportional(points.weights(), &mut rng)
        .ok_or_else(|| param("all weights are zero"))?;
    let mut chosen = vec![first];
    let mut mass: Vec<f64> = exec::map_range(points.len(), |i| {
        points.weight(i) * cost_to(points.point(i), points.point(first), power)
    });

    while chosen.len() < target {
        let Some(next) = sample_proportional(&mass, &mut rng) else {
            break;
        };
        chosen.push(next);
        let c = points.point(next);
        mass = exec::map_range(points.len(), |i| {
            let m = points.weight(i) * cost_to(points.point(i), c, power);
            m.min(mass[i])
        });
    }

    let mut coords = Vec::with_capacity(chosen.len() * points.dim());
    for &i in &chosen {
        coords.extend_from_slice(points.point(i));
    }
    Ok((Solution::from_flat(points.dim(), coords, power)?, chosen))
}

/// Clusters induced by a solution.
///
/// `point_cost[p]` is the unweighted `dist(p, A)^z`; cluster aggregates
/// carry the weights. Centers without members are dropped and
/// `center_index` maps each remaining cluster to its center in `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub cluster_of: Vec<usize>,
    pub clusters: Vec<Vec<usize>>,
    pub point_cost: Vec<f64>,
    pub cluster_cost: Vec<f64>,
    pub cluster_weight: Vec<f64>,
    pub center_index: Vec<usize>,
}

impl Assignment {
    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn total_cost(&self) -> f64 {
        compensated_sum(self.cluster_cost.iter().copied())
    }
}

/// Assigns each point to its nearest center (lowest index on ties).
pub fn assign(points: &WeightedPointSet, a: &Solution) -> Result<Assignment> {
    points.check_dim(a.dim())?;
    let nearest_of = exec::map_range(points.len(), |i| nearest(points.point(i), a));

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); a.len()];
    for (i, &(_, j)) in nearest_of.iter().enumerate() {
        members[j].push(i);
    }
    let mut compact = vec![usize::MAX; a.len()];
    let mut center_index = Vec::new();
    let mut clusters = Vec::new();
    for (j, m) in members.into_iter().enumerate() {
        if !m.is_empty() {
            compact[j] = clusters.len();
            center_index.push(j);
            clusters.push(m);
        }
    }
    let cluster_of = nearest_of.iter().map(|&(_, j)| compact[j]).collect();
    let point_cost: Vec<f64> = nearest_of.iter().map(|&(c, _)| c).collect();
    let cluster_cost = clusters
        .iter()
        .map(|m| compensated_sum(m.iter().map(|&i| points.weight(i) * point_cost[i])))
        .collect();
    let cluster_weight = clusters
        .iter()
        .map(|m| compensated_sum(m.iter().map(|&i| points.weight(i))))
        .collect();
    Ok(Assignment {
        cluster_of,
        clusters,
        point_cost,
        cluster_cost,
        cluster_weight,
        center_index,
    })
}

fn weighted_mean(points: &WeightedPointSet, members: &[usize]) -> Option<Vec<f64>> {
    let total: f64 = members.iter().map(|&i| points.weight(i)).sum();
    if !(total > 0.0) {
        return None;
    }
    let mut mean = vec![0.0; points.dim()];
    for &i in members {
        let w = points.weight(i) / total;
        for (m, x) in mean.iter_mut().zip(points.point(i)) {
            *m += w * x;
        }
    }
    Some(mean)
}

fn medoid(points: &WeightedPointSet, members: &[usize]) -> usize {
    let scores = exec::map_slice(members, |&c| {
        compensated_sum(
            members
                .iter()
                .map(|&q| points.weight(q) * sq_dist(points.point(c), points.point(q)).sqrt()),
        )
    });
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s < scores[best] {
            best = i;
        }
    }
    members[best]
}

/// One refinement pass over an assignment: weighted mean per cluster for
/// k-means, best in-cluster medoid for k-median. Clusters are those of `asg`.
pub fn refine_once(points: &WeightedPointSet, a: &Solution, asg: &Assignment) -> Result<Solution> {
    points.check_dim(a.dim())?;
    let mut coords = Vec::with_capacity(asg.num_clusters() * a.dim());
    for (j, m) in asg.clusters.iter().enumerate() {
        let center = match a.power() {
            Power::Means => weighted_mean(points, m)
                .unwrap_or_else(|| a.center(asg.center_index[j]).to_vec()),
            Power::Median => points.point(medoid(points, m)).to_vec(),
        };
        coords.extend_from_slice(&center);
    }
    Solution::from_flat(a.dim(), coords, a.power())
}

/// Weiszfeld step toward the weighted geometric median.
fn weiszfeld_step(points: &WeightedPointSet, members: &[usize], current: &[f64]) -> Vec<f64> {
    let mut num = vec![0.0; points.dim()];
    let mut den = 0.0;
    for &i in members {
        let d = sq_dist(points.point(i), current).sqrt().max(1e-12);
        let w = points.weight(i) / d;
        den += w;
        for (n, x) in num.iter_mut().zip(points.point(i)) {
            *n += w * x;
        }
    }
    if den > 0.0 {
        num.iter_mut().for_each(|n| *n /= den);
        num
    } else {
        current.to_vec()
    }
}

/// Alternating minimization from `init`: weighted Lloyd for k-means, one
/// Weiszfeld step per round for k-median. Centers that lose all members keep
/// their position.
pub fn lloyd(points: &WeightedPointSet, init: &Solution, rounds: usize) -> Result<Solution> {
    points.check_dim(init.dim())?;
    let mut current = init.clone();
    let mut prev: Option<Vec<usize>> = None;
    for _ in 0..rounds {
        let labels: Vec<usize> =
            exec::map_range(points.len(), |i| nearest(points.point(i), &current).1);
        if prev.as_ref() == Some(&labels) && current.power() == Power::Means {
            break;
        }
        let mut members = vec![Vec::new(); current.len()];
        for (i, &j) in labels.iter().enumerate() {
            members[j].push(i);
        }
        let mut coords = Vec::with_capacity(current.coords().len());
        for (j, m) in members.iter().enumerate() {
            let c = current.center(j);
            let next = match current.power() {
                Power::Means => weighted_mean(points, m).unwrap_or_else(|| c.to_vec()),
                Power::Median if m.is_empty() => c.to_vec(),
                Power::Median => weiszfeld_step(points, m, c),
            };
            coords.extend_from_slice(&next);
        }
        current = Solution::from_flat(current.dim(), coords, current.power())?;
        prev = Some(labels);
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::cost_set;

    #[test]
    fn two_far_points_are_both_chosen() {
        let p = WeightedPointSet::unweighted(vec![vec![0.0, 0.0], vec![100.0, 0.0]]).unwrap();
        for seed in 0..20 {
            let (a, idx) = seed_with_indices(&p, 2, Power::Means, 2.0, seed).unwrap();
            assert_eq!(a.len(), 2);
            let mut idx = idx.clone();
            idx.sort();
            assert_eq!(idx, vec![0, 1]);
        }
    }

    #[test]
    fn repeated_point_is_the_only_center() {
        let p = WeightedPointSet::unweighted(vec![vec![1.0, 2.0]; 10]).unwrap();
        let a = seed_bicriteria(&p, 1, Power::Median, 2.0, 3).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.center(0), &[1.0, 2.0]);
    }

    #[test]
    fn infeasible_k_is_rejected() {
        let p = WeightedPointSet::unweighted(vec![vec![1.0]; 4]).unwrap();
        assert!(matches!(
            seed_bicriteria(&p, 2, Power::Means, 1.0, 0),
            Err(CoresetError::InfeasibleK { k: 2, distinct: 1 })
        ));
        assert!(seed_bicriteria(&p, 1, Power::Means, 0.5, 0).is_err());
    }

    #[test]
    fn seeding_is_deterministic() {
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|i| vec![(i as f64 * 0.37).sin() * 10.0, (i as f64 * 1.3).cos()])
            .collect();
        let p = WeightedPointSet::unweighted(pts).unwrap();
        let a = seed_bicriteria(&p, 5, Power::Means, 2.0, 42).unwrap();
        let b = seed_bicriteria(&p, 5, Power::Means, 2.0, 42).unwrap();
        assert_eq!(a.coords(), b.coords());
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn assignment_examples() {
        let p = WeightedPointSet::unweighted(vec![vec![0.0, 0.0], vec![10.0, 0.0]]).unwrap();
        let a = Solution::new(vec![vec![0.0, 0.0], vec![10.0, 0.0]], Power::Means).unwrap();
        let asg = assign(&p, &a).unwrap();
        assert_eq!(asg.clusters, vec![vec![0], vec![1]]);
        assert_eq!(asg.cluster_cost, vec![0.0, 0.0]);

        // every point equidistant to both centers
        let p = WeightedPointSet::unweighted(vec![vec![0.0, 1.0], vec![0.0, -3.0]]).unwrap();
        let a = Solution::new(vec![vec![-1.0, 0.0], vec![1.0, 0.0]], Power::Means).unwrap();
        let asg = assign(&p, &a).unwrap();
        assert_eq!(asg.clusters, vec![vec![0, 1]]);
        assert_eq!(asg.center_index, vec![0]);
        assert_eq!(asg.cluster_of, vec![0, 0]);
    }

    #[test]
    fn refine_and_lloyd_do_not_increase_cost() {
        let pts: Vec<Vec<f64>> = (0..300)
            .map(|i| {
                let c = (i % 3) as f64 * 8.0;
                vec![c + (i as f64 * 0.71).sin(), (i as f64 * 0.23).cos()]
            })
            .collect();
        let p = WeightedPointSet::unweighted(pts).unwrap();
        for power in [Power::Means, Power::Median] {
            let a = seed_bicriteria(&p, 3, power, 1.0, 9).unwrap();
            let asg = assign(&p, &a).unwrap();
            let r = refine_once(&p, &a, &asg).unwrap();
            assert!(cost_set(&p, &r).unwrap() <= cost_set(&p, &a).unwrap() * (1.0 + 1e-12));
            let l = lloyd(&p, &a, 10).unwrap();
            assert!(cost_set(&p, &l).unwrap() <= cost_set(&p, &a).unwrap() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn sample_proportional_skips_zero_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let i = sample_proportional(&[0.0, 1.0, 0.0, 3.0, 0.0], &mut rng).unwrap();
            assert!(i == 1 || i == 3);
        }
        assert_eq!(sample_proportional(&[0.0, 0.0], &mut rng), None);
    }
}
