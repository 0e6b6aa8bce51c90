//! Group sensitivity sampling.
//!
//! Inside a group, a point `p` of cell `C_j` is drawn with probability
//! `P_p = (w_p / |C_j|) * cost(C_j, A) / cost(group, A)`, where `|C_j|` is
//! the cell weight. Each draw contributes `w_p / (P_p * m)` to the coreset,
//! so `sum_{q in coreset} w_q cost(q, S)` is an unbiased estimate of the
//! group's cost for every `S`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost::{compensated_sum, cost_set};
use crate::decompose::{Group, GroupedInstance};
use crate::error::{param, Result};
use crate::exec;
use crate::point::{Power, Solution, WeightedPointSet};
use crate::solver::Assignment;

/// Where a coreset point came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// `None` for zero-bucket aggregates.
    pub group: Option<usize>,
    pub cluster: usize,
    /// Source point; the bucket representative for aggregates.
    pub source: usize,
    /// Index of the first draw that hit this point within its group.
    pub draw: usize,
    /// Number of merged draws (0 for aggregates).
    pub draws: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoresetParams {
    pub power: Power,
    pub budgets: Vec<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coreset {
    pub points: WeightedPointSet,
    pub provenance: Vec<Provenance>,
    pub params: CoresetParams,
    /// Emitted weights are the sampled weights divided by this factor.
    pub weight_scale: f64,
}

impl Coreset {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Estimated `cost(P, S)`.
    pub fn cost(&self, s: &Solution) -> Result<f64> {
        cost_set(&self.points, s)
    }

    /// Divides all weights by `scale`, composing with any earlier scale.
    pub fn rescaled(mut self, scale: f64) -> Result<Self> {
        self.points = self.points.scaled_weights(1.0 / scale)?;
        self.weight_scale *= scale;
        Ok(self)
    }

    /// Same weights on the coordinates of the source points in `original`.
    pub fn lift(&self, original: &WeightedPointSet) -> Result<WeightedPointSet> {
        let mut coords = Vec::with_capacity(self.len() * original.dim());
        for prov in &self.provenance {
            if prov.source >= original.len() {
                return Err(param(format!("source index {} out of range", prov.source)));
            }
            coords.extend_from_slice(original.point(prov.source));
        }
        WeightedPointSet::from_flat(original.dim(), coords, self.points.weights().to_vec())
    }
}

/// `(point index, P_p)` for every member of group `group_id`.
pub fn sampling_distribution(
    points: &WeightedPointSet,
    g: &GroupedInstance,
    group_id: usize,
) -> Result<Vec<(usize, f64)>> {
    let group = g
        .groups
        .get(group_id)
        .ok_or_else(|| param(format!("no group {group_id}")))?;
    if !(group.cost > 0.0) {
        return Err(param(format!("group {group_id} has zero cost")));
    }
    Ok(support(points, group)
        .into_iter()
        .map(|(p, _, prob)| (p, prob))
        .collect())
}

/// `(point, cluster, P_p)` over a group.
fn support(points: &WeightedPointSet, group: &Group) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::with_capacity(group.point_count());
    for cell in &group.cells {
        let share = cell.cost / group.cost;
        for &p in &cell.members {
            out.push((p, cell.cluster, share * points.weight(p) / cell.weight));
        }
    }
    out
}

/// Splits `total` draws evenly over groups; the remainder goes to the
/// highest-cost groups (ties to the lower index).
pub fn split_budget(g: &GroupedInstance, total: usize) -> Result<Vec<usize>> {
    let n = g.num_groups();
    if n == 0 {
        return Ok(Vec::new());
    }
    if total < n {
        return Err(param(format!(
            "budget {total} is smaller than the {n} groups to sample"
        )));
    }
    let mut budgets = vec![total / n; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g.groups[b].cost.total_cmp(&g.groups[a].cost).then(a.cmp(&b)));
    for &i in order.iter().take(total % n) {
        budgets[i] += 1;
    }
    Ok(budgets)
}

/// Deterministic per-group generator.
fn group_rng(seed: u64, group_id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(group_id as u64);
    rng
}

/// Draws `m_per_group` points with replacement from every group.
pub fn draw_coreset(
    points: &WeightedPointSet,
    a: &Solution,
    g: &GroupedInstance,
    m_per_group: usize,
    seed: u64,
) -> Result<Coreset> {
    if m_per_group < 1 {
        return Err(param("m_per_group must be at least 1"));
    }
    draw_coreset_with_budgets(points, a, g, &vec![m_per_group; g.num_groups()], seed)
}

/// [`draw_coreset`] with an individual budget per group.
pub fn draw_coreset_with_budgets(
    points: &WeightedPointSet,
    a: &Solution,
    g: &GroupedInstance,
    budgets: &[usize],
    seed: u64,
) -> Result<Coreset> {
    if budgets.len() != g.num_groups() {
        return Err(param("one budget per group is required"));
    }
    if g.num_points != points.len() {
        return Err(param("grouping does not match the point set"));
    }
    points.check_dim(a.dim())?;

    let ids: Vec<usize> = (0..g.num_groups()).collect();
    let per_group = exec::map_slice(&ids, |&gid| draw_group(points, g, gid, budgets[gid], seed));

    let dim = points.dim();
    let mut coords = Vec::new();
    let mut weights = Vec::new();
    let mut provenance = Vec::new();
    for drawn in per_group {
        for (p, w, prov) in drawn? {
            coords.extend_from_slice(points.point(p));
            weights.push(w);
            provenance.push(prov);
        }
    }
    for bucket in &g.zero {
        if !(bucket.weight > 0.0) {
            continue;
        }
        coords.extend_from_slice(a.center(bucket.center));
        weights.push(bucket.weight);
        provenance.push(Provenance {
            group: None,
            cluster: bucket.cluster,
            source: bucket.representative,
            draw: 0,
            draws: 0,
        });
    }
    if weights.is_empty() {
        return Err(param("nothing to sample: every group is empty"));
    }
    Ok(Coreset {
        points: WeightedPointSet::from_flat(dim, coords, weights)?,
        provenance,
        params: CoresetParams {
            power: a.power(),
            budgets: budgets.to_vec(),
            seed,
        },
        weight_scale: 1.0,
    })
}

fn draw_group(
    points: &WeightedPointSet,
    g: &GroupedInstance,
    gid: usize,
    m: usize,
    seed: u64,
) -> Result<Vec<(usize, f64, Provenance)>> {
    let group = &g.groups[gid];
    if m == 0 {
        return Ok(Vec::new());
    }
    let support = support(points, group);
    let mut cumulative = Vec::with_capacity(support.len());
    let mut acc = 0.0;
    for &(_, _, prob) in &support {
        acc += prob;
        cumulative.push(acc);
    }

    let mut rng = group_rng(seed, gid);
    let mut hits: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for draw in 0..m {
        let u = rng.random::<f64>() * acc;
        let slot = cumulative.partition_point(|&c| c <= u).min(support.len() - 1);
        hits.entry(slot).or_insert((draw, 0)).1 += 1;
    }
    let mut out: Vec<(usize, f64, Provenance)> = hits
        .into_iter()
        .map(|(slot, (first, count))| {
            let (p, cluster, prob) = support[slot];
            let w = count as f64 * points.weight(p) / (prob * m as f64);
            (
                p,
                w,
                Provenance {
                    group: Some(gid),
                    cluster,
                    source: p,
                    draw: first,
                    draws: count,
                },
            )
        })
        .collect();
    out.sort_by_key(|(p, _, _)| *p);
    Ok(out)
}

/// Per-cluster weight concentration: whether the coreset mass attributed to
/// each cluster lies within `(1 +- eps)` of the cluster weight.
pub fn check_event_e(coreset: &Coreset, asg: &Assignment, eps: f64) -> Result<Vec<bool>> {
    Ok(cluster_mass_ratios(coreset, asg)?
        .into_iter()
        .map(|r| (r - 1.0).abs() <= eps)
        .collect())
}

/// Coreset mass of each cluster divided by the cluster weight.
pub fn cluster_mass_ratios(coreset: &Coreset, asg: &Assignment) -> Result<Vec<f64>> {
    let k = asg.num_clusters();
    let mut mass = vec![Vec::new(); k];
    for (prov, &w) in coreset.provenance.iter().zip(coreset.points.weights()) {
        if prov.cluster >= k {
            return Err(param(format!("coreset cluster {} out of range", prov.cluster)));
        }
        mass[prov.cluster].push(w * coreset.weight_scale);
    }
    Ok(mass
        .into_iter()
        .zip(&asg.cluster_weight)
        .map(|(m, &w)| compensated_sum(m) / w)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{build_groups, Cell};
    use crate::solver::assign;

    fn grouped(rows: Vec<Vec<f64>>, centers: Vec<Vec<f64>>) -> (WeightedPointSet, Solution, Assignment, GroupedInstance) {
        let p = WeightedPointSet::unweighted(rows).unwrap();
        let a = Solution::new(centers, Power::Means).unwrap();
        let asg = assign(&p, &a).unwrap();
        let g = build_groups(&p, &a, &asg, 0.1).unwrap();
        (p, a, asg, g)
    }

    fn probs(g: &GroupedInstance, p: &WeightedPointSet, gid: usize) -> Vec<f64> {
        let d = sampling_distribution(p, g, gid).unwrap();
        assert!((compensated_sum(d.iter().map(|x| x.1)) - 1.0).abs() < 1e-12);
        d.into_iter().map(|x| x.1).collect()
    }

    #[test]
    fn symmetric_group_is_uniform() {
        // two clusters of two points each, equal costs
        let (p, _, _, g) = grouped(
            vec![vec![1.0], vec![-1.0], vec![11.0], vec![9.0]],
            vec![vec![0.0], vec![10.0]],
        );
        assert_eq!(g.num_groups(), 1);
        for pr in probs(&g, &p, 0) {
            assert!((pr - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn costs_one_and_two_give_one_third_two_thirds() {
        // hand-built group: the decomposition itself would split costs 1 and 2
        let p = WeightedPointSet::unweighted(vec![vec![1.0], vec![10.0 + 2f64.sqrt()]]).unwrap();
        let cell = |cluster: usize, cost: f64| Cell { cluster, members: vec![cluster], weight: 1.0, cost };
        let g = GroupedInstance {
            groups: vec![Group { ring: 0, level: 0, cells: vec![cell(0, 1.0), cell(1, 2.0)], cost: 3.0 }],
            zero: vec![],
            ring_limit: 10,
            projected_dim: 1,
            num_points: 2,
        };
        let pr = probs(&g, &p, 0);
        assert!((pr[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((pr[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn coreset_of_zero_cost_instance_has_zero_cost() {
        let (p, a, _, g) = grouped(vec![vec![1.0], vec![1.0], vec![5.0]], vec![vec![1.0], vec![5.0]]);
        assert_eq!(g.num_groups(), 0);
        let c = draw_coreset(&p, &a, &g, 10, 3).unwrap();
        assert_eq!(c.cost(&a).unwrap(), 0.0);
        assert_eq!(c.points.total_weight(), 3.0);
    }

    #[test]
    fn rejects_zero_budget() {
        let (p, a, _, g) = grouped(vec![vec![1.0], vec![-1.0]], vec![vec![0.0]]);
        assert!(draw_coreset(&p, &a, &g, 0, 3).is_err());
    }

    #[test]
    fn two_point_group_weights_concentrate() {
        let (p, a, _, g) = grouped(vec![vec![1.0], vec![-1.0]], vec![vec![0.0]]);
        for seed in 0..20 {
            let c = draw_coreset(&p, &a, &g, 10_000, seed).unwrap();
            assert_eq!(c.len(), 2);
            for &w in c.points.weights() {
                assert!((w - 1.0).abs() <= 0.05, "seed {seed}: {w}");
            }
        }
    }

    #[test]
    fn budget_split_favors_costly_groups() {
        let (_, _, _, g) = grouped(
            vec![vec![1.0], vec![-1.0], vec![20.0], vec![40.0]],
            vec![vec![0.0], vec![30.0]],
        );
        assert_eq!(g.num_groups(), 2);
        let b = split_budget(&g, 5).unwrap();
        assert_eq!(b.iter().sum::<usize>(), 5);
        let costly = if g.groups[0].cost > g.groups[1].cost { 0 } else { 1 };
        assert_eq!(b[costly], 3);
        assert!(split_budget(&g, 1).is_err());
    }
}
