use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cost::compensated_sum;
use crate::error::{param, Result};
use crate::point::{Solution, WeightedPointSet};
use crate::solver::Assignment;

/// The part of one `A`-cluster that falls into one ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub cluster: usize,
    pub members: Vec<usize>,
    pub weight: f64,
    pub cost: f64,
}

/// Cells of one ring whose costs lie in `[2^level, 2^{level+1}) * min cell cost`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub ring: i32,
    pub level: i32,
    pub cells: Vec<Cell>,
    pub cost: f64,
}

impl Group {
    pub fn weight(&self) -> f64 {
        compensated_sum(self.cells.iter().map(|c| c.weight))
    }

    pub fn point_count(&self) -> usize {
        self.cells.iter().map(|c| c.members.len()).sum()
    }
}

/// Points of a cluster that are (almost) at their center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroBucket {
    pub cluster: usize,
    /// Index of the cluster's center in `A`.
    pub center: usize,
    pub members: Vec<usize>,
    pub weight: f64,
    /// Lowest-cost member, used when the aggregate needs a source point.
    pub representative: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupedInstance {
    pub groups: Vec<Group>,
    pub zero: Vec<ZeroBucket>,
    /// Rings below `-ring_limit` go to the zero bucket.
    pub ring_limit: i32,
    pub projected_dim: usize,
    pub num_points: usize,
}

/// `b` with `base * 2^b <= x < base * 2^{b+1}`, exact in floating point.
fn dyadic_level(x: f64, base: f64) -> i32 {
    let mut b = (x / base).log2().floor() as i32;
    while base * 2f64.powi(b) > x {
        b -= 1;
    }
    while base * 2f64.powi(b + 1) <= x {
        b += 1;
    }
    b
}

/// Splits the clusters of `asg` into rings and groups.
///
/// A point `p` of cluster `C_j` with positive cost goes to ring
/// `floor(log2(cost(p, A) / avg_j))`, `avg_j` being the weighted average
/// cost in `C_j`. Rings below `-ceil(log2(n / eps))` and zero-cost points
/// form a per-cluster zero bucket. Within each ring, cells are bucketed by
/// `floor(log2(cell cost / min cell cost))`, so any two points of a cell and
/// any two cells of a group differ in cost by less than a factor of 2.
pub fn build_groups(
    points: &WeightedPointSet,
    a: &Solution,
    asg: &Assignment,
    eps: f64,
) -> Result<GroupedInstance> {
    if asg.cluster_of.len() != points.len() {
        return Err(param("assignment does not match the point set"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(param(format!("eps must lie in (0, 1), got {eps}")));
    }
    points.check_dim(a.dim())?;
    let ring_limit = (points.len() as f64 / eps).log2().ceil() as i32;

    let mut cells: BTreeMap<(i32, usize), Vec<usize>> = BTreeMap::new();
    let mut zero: Vec<ZeroBucket> = Vec::new();
    for (j, members) in asg.clusters.iter().enumerate() {
        let mut zero_members = Vec::new();
        let avg = asg.cluster_cost[j] / asg.cluster_weight[j];
        for &p in members {
            let c = asg.point_cost[p];
            if !(c > 0.0 && avg > 0.0) || points.weight(p) == 0.0 {
                zero_members.push(p);
                continue;
            }
            let ring = dyadic_level(c, avg);
            if ring < -ring_limit {
                zero_members.push(p);
            } else {
                cells.entry((ring, j)).or_default().push(p);
            }
        }
        if !zero_members.is_empty() {
            let weight = compensated_sum(zero_members.iter().map(|&p| points.weight(p)));
            let mut representative = zero_members[0];
            for &p in &zero_members {
                if asg.point_cost[p] < asg.point_cost[representative] {
                    representative = p;
                }
            }
            zero.push(ZeroBucket {
                cluster: j,
                center: asg.center_index[j],
                members: zero_members,
                weight,
                representative,
            });
        }
    }

    let mut by_ring: BTreeMap<i32, Vec<Cell>> = BTreeMap::new();
    for ((ring, cluster), members) in cells {
        let weight = compensated_sum(members.iter().map(|&p| points.weight(p)));
        let cost =
            compensated_sum(members.iter().map(|&p| points.weight(p) * asg.point_cost[p]));
        by_ring.entry(ring).or_default().push(Cell {
            cluster,
            members,
            weight,
            cost,
        });
    }

    let mut groups = Vec::new();
    for (ring, ring_cells) in by_ring {
        let min_cost = ring_cells
            .iter()
            .map(|c| c.cost)
            .fold(f64::INFINITY, f64::min);
        let mut by_level: BTreeMap<i32, Vec<Cell>> = BTreeMap::new();
        for cell in ring_cells {
            by_level
                .entry(dyadic_level(cell.cost, min_cost))
                .or_default()
                .push(cell);
        }
        for (level, cells) in by_level {
            let cost = compensated_sum(cells.iter().map(|c| c.cost));
            groups.push(Group {
                ring,
                level,
                cells,
                cost,
            });
        }
    }

    Ok(GroupedInstance {
        groups,
        zero,
        ring_limit,
        projected_dim: points.dim(),
        num_points: points.len(),
    })
}

impl GroupedInstance {
    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    /// Checks the partition property and both factor-2 bounds.
    pub fn validate(&self, asg: &Assignment) -> std::result::Result<(), String> {
        let mut seen = vec![false; self.num_points];
        let members = self
            .groups
            .iter()
            .flat_map(|g| g.cells.iter().flat_map(|c| c.members.iter()))
            .chain(self.zero.iter().flat_map(|z| z.members.iter()));
        for &p in members {
            if p >= self.num_points || std::mem::replace(&mut seen[p], true) {
                return Err(format!("point {p} is out of range or listed twice"));
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(format!("point {p} is not covered"));
        }
        for (g, group) in self.groups.iter().enumerate() {
            let (lo, hi) = min_max(group.cells.iter().map(|c| c.cost));
            if hi > 2.0 * lo {
                return Err(format!("group {g}: cell costs {lo} and {hi}"));
            }
            for cell in &group.cells {
                let (lo, hi) = min_max(cell.members.iter().map(|&p| asg.point_cost[p]));
                if !(lo > 0.0) || hi > 2.0 * lo {
                    return Err(format!(
                        "group {g}, cluster {}: point costs {lo} and {hi}",
                        cell.cluster
                    ));
                }
            }
        }
        Ok(())
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}
