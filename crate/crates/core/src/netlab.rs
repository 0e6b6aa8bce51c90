//! Explicit (alpha, k)-clustering nets for tiny instances.
//!
//! A net element is chosen by a subset `U` of the distinct input points, a
//! ball around the projection of one input point `q` onto `span(U)`, a point
//! of the axis-aligned lattice inside that ball, and a value `tau` from an
//! exponential sequence standing in for `||(I - P_U) s||^2`. Its cost
//! vector is
//! `v'_p = w_p * (||P_U p - c||^2 + ||(I - P_U) p||^2 + tau)^{z/2}`,
//! i.e. the four-term split of `||p - s||^2` without the cross term.
//!
//! For the ball around `q`: radius `R * 2^{i/2} * dist(q, A)`, lattice
//! spacing `(alpha / 2^i) * dist(q, A) / sqrt(rank U)`, and
//! `tau in {0} u {alpha^2 (1 + alpha/2^i)^j dist(q, A)^z : 0 <= j <= J}`
//! with `J = floor(log_{1 + alpha/2^i}(10 * 2^i))`.
//!
//! Nets are never materialized. Sizes are counted exactly, and the best
//! element for a candidate is found by snapping to the nearest lattice
//! points of every ball.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cost::{cost_to, sq_dist, sq_norm};
use crate::error::{param, CoresetError, Result};
use crate::exec;
use crate::harness::types::{cluster_minima, large_cutoff, type_index, DEFAULT_GAMMA};
use crate::point::{point_key, Power, Solution, WeightedPointSet};
use crate::solver::assign;
use crate::subspace::{PythagoreanSplit, SubspaceBasis};

pub const MAX_DISTINCT_POINTS: usize = 8;
pub const MAX_DIM: usize = 4;
pub const MAX_SUBSET_SIZE: usize = 3;
pub const DEFAULT_RADIUS_CONSTANT: f64 = 60.0;
/// Proposals per trial before a type is declared infeasible.
pub const MAX_PROPOSALS: usize = 100_000;
/// Largest net that [`ClusteringNet::for_each_vector`] will enumerate.
pub const MAX_ENUMERATION: u128 = 10_000_000;

/// Cluster type the net is built for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeParams {
    pub i: i32,
    pub k_i: usize,
    pub alpha: f64,
    /// Chaining level; recorded only.
    pub h: u32,
    pub eps: f64,
    pub gamma: f64,
}

impl TypeParams {
    pub fn new(i: i32, alpha: f64, eps: f64) -> Self {
        TypeParams {
            i,
            k_i: 1,
            alpha,
            h: 0,
            eps,
            gamma: DEFAULT_GAMMA,
        }
    }

    /// Highest admissible type, `ceil(log2(gamma * eps^{-z}))`.
    pub fn max_type(&self, power: Power) -> i32 {
        large_cutoff(self.eps, power, self.gamma).ceil() as i32
    }

    pub fn validate(&self, power: Power) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            return Err(param(format!("alpha must lie in (0, 1/2], got {}", self.alpha)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) || !(self.gamma > 0.0) {
            return Err(param("eps must lie in (0, 1) and gamma must be positive"));
        }
        let max = self.max_type(power);
        if self.i < 3 || self.i > max {
            return Err(param(format!("type index {} outside [3, {max}]", self.i)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetConfig {
    /// Centers per candidate solution; only 1 is supported.
    pub k: usize,
    pub max_subset: usize,
    /// The constant `R` in the ball radius.
    pub radius_constant: f64,
}

impl Default for NetConfig {
    fn default() -> Self {
        NetConfig {
            k: 1,
            max_subset: MAX_SUBSET_SIZE,
            radius_constant: DEFAULT_RADIUS_CONSTANT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    /// Input point the ball is centered on (projected onto the subspace).
    pub center: usize,
    pub center_coords: Vec<f64>,
    pub spacing: f64,
    /// Squared radius in lattice units: offsets `n` with `|n|^2 <= t2`.
    pub lattice_radius_sq: f64,
    /// Candidate values of `||(I - P_U) s||^2`, ascending; `sequence[0] = 0`.
    pub sequence: Vec<f64>,
    pub size: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetFamily {
    pub subset: Vec<usize>,
    pub basis: SubspaceBasis,
    pub balls: Vec<Ball>,
    pub size: u128,
    /// `||P||_0^{|U|} * (1 + 2 R')^{rank} * L`, with `R'` the ball radius in
    /// lattice units and `L` the sequence length.
    pub bound: f64,
    point_coords: Vec<Vec<f64>>,
    point_residual: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetStats {
    pub subsets: usize,
    pub size: u128,
    /// Lattice points per ball, by subspace rank.
    pub ball_lattice_sizes: Vec<(usize, u128)>,
    pub sequence_length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringNet {
    pub params: TypeParams,
    pub config: NetConfig,
    pub power: Power,
    pub families: Vec<NetFamily>,
    pub stats: NetStats,
    weights: Vec<f64>,
    point_cost_a: Vec<f64>,
}

/// Identifies one net vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetElement {
    pub family: usize,
    pub ball: usize,
    pub offset: Vec<i64>,
    /// Index into the ball's sequence.
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetMatch {
    pub element: NetElement,
    /// `max_p |v_p - v'_p| / (alpha * sqrt(cost(p,S)^{z-1} cost(p,A)^{3-z}))`.
    pub worst_ratio: f64,
}

fn floor_sqrt(x: f64) -> i64 {
    if x < 0.0 {
        return -1;
    }
    let mut m = x.sqrt().floor() as i64;
    while m > 0 && (m * m) as f64 > x {
        m -= 1;
    }
    while ((m + 1) * (m + 1)) as f64 <= x {
        m += 1;
    }
    m
}

/// Number of integer vectors `n in Z^r` with `|n|^2 <= t2`.
pub fn lattice_count(r: usize, t2: f64) -> u128 {
    let m = floor_sqrt(t2);
    if m < 0 {
        return 0;
    }
    match r {
        0 => 1,
        1 => (2 * m + 1) as u128,
        _ => {
            let mut total = lattice_count(r - 1, t2);
            for a in 1..=m {
                total += 2 * lattice_count(r - 1, t2 - (a * a) as f64);
            }
            total
        }
    }
}

fn for_each_lattice_point(r: usize, t2: f64, prefix: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    if prefix.len() == r {
        f(prefix);
        return;
    }
    let used: i64 = prefix.iter().map(|x| x * x).sum();
    let m = floor_sqrt(t2 - used as f64);
    for a in -m..=m {
        prefix.push(a);
        for_each_lattice_point(r, t2, prefix, f);
        prefix.pop();
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exponential sequence length `J + 1` (without the leading zero).
pub fn sequence_levels(params: &TypeParams) -> usize {
    let ratio = 1.0 + params.alpha / 2f64.powi(params.i);
    ((10.0 * 2f64.powi(params.i)).ln() / ratio.ln()).floor() as usize + 1
}

fn residual_sq(basis: &SubspaceBasis, v: &[f64]) -> f64 {
    let r = sq_norm(&basis.residual(v));
    // inside the span up to rounding
    if r.sqrt() <= 1e-10 * sq_norm(v).sqrt() {
        0.0
    } else {
        r
    }
}

fn check_limits(points: &WeightedPointSet, a: &Solution, config: &NetConfig) -> Result<()> {
    if points.dim() > MAX_DIM {
        return Err(CoresetError::NetLimit(format!(
            "dimension {} exceeds {MAX_DIM}",
            points.dim()
        )));
    }
    if config.k != 1 {
        return Err(CoresetError::NetLimit(format!(
            "only single-center candidates are supported, got k = {}",
            config.k
        )));
    }
    if config.max_subset == 0 || config.max_subset > MAX_SUBSET_SIZE {
        return Err(CoresetError::NetLimit(format!(
            "subset size must lie in [1, {MAX_SUBSET_SIZE}], got {}",
            config.max_subset
        )));
    }
    if !(config.radius_constant > 0.0 && config.radius_constant.is_finite()) {
        return Err(param("radius constant must be positive"));
    }
    let mut seen = HashSet::new();
    for i in 0..points.len() {
        seen.insert(point_key(points.point(i)));
        if seen.len() > MAX_DISTINCT_POINTS {
            return Err(CoresetError::NetLimit(format!(
                "more than {MAX_DISTINCT_POINTS} distinct points"
            )));
        }
    }
    points.check_dim(a.dim())
}

/// Builds the net for `(points, a)` and the given type.
pub fn build_net(
    points: &WeightedPointSet,
    a: &Solution,
    params: &TypeParams,
    config: &NetConfig,
) -> Result<ClusteringNet> {
    check_limits(points, a, config)?;
    let power = a.power();
    params.validate(power)?;

    let distinct = points.distinct_indices();
    let n0 = distinct.len();
    let point_cost_a: Vec<f64> = (0..points.len())
        .map(|p| crate::cost::nearest(points.point(p), a).0)
        .collect();
    let two_i = 2f64.powi(params.i);
    let levels = sequence_levels(params);
    let seq_len = levels + 1;
    let mut lattice_memo: HashMap<usize, u128> = HashMap::new();

    let mut subsets = Vec::new();
    for size in 1..=config.max_subset.min(n0) {
        subsets.extend(combinations(n0, size));
    }

    let mut families = Vec::with_capacity(subsets.len());
    for subset in subsets {
        let members: Vec<usize> = subset.iter().map(|&j| distinct[j]).collect();
        let vectors: Vec<&[f64]> = members.iter().map(|&p| points.point(p)).collect();
        let mut basis = SubspaceBasis::span_of(points.dim(), &vectors)?;
        basis.chosen = members.clone();
        let rank = basis.rank();
        let t2 = if rank == 0 {
            0.0
        } else {
            let t = config.radius_constant * two_i.sqrt() * two_i * (rank as f64).sqrt() / params.alpha;
            t * t
        };
        let per_ball = *lattice_memo
            .entry(rank)
            .or_insert_with(|| lattice_count(rank, t2));

        let mut balls = Vec::with_capacity(n0);
        for &q in &distinct {
            let dist_q = power.to_dist(point_cost_a[q]);
            let center_coords = basis.coords(points.point(q));
            let ball = if dist_q > 0.0 && rank > 0 {
                let spacing = params.alpha / two_i * dist_q / (rank as f64).sqrt();
                let scale = power.from_sq_dist(dist_q * dist_q);
                let step = 1.0 + params.alpha / two_i;
                let mut sequence = vec![0.0];
                sequence.extend((0..levels).map(|j| {
                    params.alpha * params.alpha * step.powi(j as i32) * scale
                }));
                Ball {
                    center: q,
                    center_coords,
                    spacing,
                    lattice_radius_sq: t2,
                    sequence,
                    size: per_ball * seq_len as u128,
                }
            } else {
                // degenerate ball: the center itself, residual value 0 only
                Ball {
                    center: q,
                    center_coords,
                    spacing: 0.0,
                    lattice_radius_sq: 0.0,
                    sequence: vec![0.0],
                    size: 1,
                }
            };
            balls.push(ball);
        }
        let size = balls.iter().map(|b| b.size).sum();
        let bound = (n0 as f64).powi(members.len() as i32)
            * (1.0 + 2.0 * t2.sqrt()).powi(rank as i32)
            * seq_len as f64;
        let point_coords = (0..points.len())
            .map(|p| basis.coords(points.point(p)))
            .collect();
        let point_residual = (0..points.len())
            .map(|p| residual_sq(&basis, points.point(p)))
            .collect();
        families.push(NetFamily {
            subset: members,
            basis,
            balls,
            size,
            bound,
            point_coords,
            point_residual,
        });
    }

    let mut ball_lattice_sizes: Vec<(usize, u128)> = lattice_memo.into_iter().collect();
    ball_lattice_sizes.sort();
    let size = families.iter().map(|f| f.size).sum();
    Ok(ClusteringNet {
        params: params.clone(),
        config: config.clone(),
        power,
        stats: NetStats {
            subsets: families.len(),
            size,
            ball_lattice_sizes,
            sequence_length: seq_len,
        },
        families,
        weights: points.weights().to_vec(),
        point_cost_a,
    })
}

impl ClusteringNet {
    /// Total number of net vectors.
    pub fn size(&self) -> u128 {
        self.stats.size
    }

    fn center_coords(&self, e: &NetElement) -> Vec<f64> {
        let ball = &self.families[e.family].balls[e.ball];
        ball.center_coords
            .iter()
            .zip(e.offset.iter().chain(std::iter::repeat(&0)))
            .map(|(c, &n)| c + ball.spacing * n as f64)
            .collect()
    }

    fn entry(&self, fam: &NetFamily, p: usize, c: &[f64], tau: f64) -> f64 {
        let split = PythagoreanSplit {
            in_span: sq_dist(&fam.point_coords[p], c),
            point_residual: fam.point_residual[p],
            center_residual: tau,
            cross: 0.0,
        };
        self.weights[p] * self.power.from_sq_dist(split.recombine().max(0.0))
    }

    /// The cost vector of a net element.
    pub fn vector(&self, e: &NetElement) -> crate::cost::CostVector {
        let fam = &self.families[e.family];
        let c = self.center_coords(e);
        let tau = fam.balls[e.ball].sequence[e.level];
        crate::cost::CostVector::from_entries(
            (0..self.weights.len()).map(|p| self.entry(fam, p, &c, tau)).collect(),
        )
    }

    /// Calls `f` on every element; refuses nets above [`MAX_ENUMERATION`].
    pub fn for_each_element(&self, mut f: impl FnMut(&NetElement)) -> Result<()> {
        if self.size() > MAX_ENUMERATION {
            return Err(CoresetError::NetLimit(format!(
                "net of size {} is too large to enumerate",
                self.size()
            )));
        }
        for (fi, fam) in self.families.iter().enumerate() {
            let rank = fam.basis.rank();
            for (bi, ball) in fam.balls.iter().enumerate() {
                let r = if ball.spacing > 0.0 { rank } else { 0 };
                for_each_lattice_point(r, ball.lattice_radius_sq, &mut Vec::new(), &mut |n| {
                    for level in 0..ball.sequence.len() {
                        f(&NetElement {
                            family: fi,
                            ball: bi,
                            offset: n.to_vec(),
                            level,
                        });
                    }
                });
            }
        }
        Ok(())
    }

    /// Per-point error allowances `alpha * sqrt(cost(p,S)^{z-1} cost(p,A)^{3-z})`
    /// and exact entries of `v^S`.
    fn targets(&self, points: &WeightedPointSet, s: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let z = self.power.z() as i32;
        let exact: Vec<f64> = (0..points.len())
            .map(|p| self.weights[p] * cost_to(points.point(p), s, self.power))
            .collect();
        let allow = (0..points.len())
            .map(|p| {
                let ca = self.weights[p] * self.point_cost_a[p];
                self.params.alpha * (exact[p].powi(z - 1) * ca.powi(3 - z)).sqrt()
            })
            .collect();
        (exact, allow)
    }

    fn worst_ratio(&self, fam: &NetFamily, c: &[f64], tau: f64, exact: &[f64], allow: &[f64], cap: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for p in 0..exact.len() {
            let err = (exact[p] - self.entry(fam, p, c, tau)).abs();
            let r = if err == 0.0 { 0.0 } else { err / allow[p] };
            worst = worst.max(r);
            if worst > cap {
                break;
            }
        }
        worst
    }

    /// Worst-point error ratio of one element against the candidate `s`.
    pub fn element_ratio(&self, points: &WeightedPointSet, s: &[f64], e: &NetElement) -> f64 {
        let (exact, allow) = self.targets(points, s);
        let fam = &self.families[e.family];
        let tau = fam.balls[e.ball].sequence[e.level];
        self.worst_ratio(fam, &self.center_coords(e), tau, &exact, &allow, f64::INFINITY)
    }

    /// Best element near the candidate center `s`: in every ball the lattice
    /// points adjacent to the projection of `s` are combined with the
    /// sequence values bracketing its residual and with 0.
    pub fn best_match(&self, points: &WeightedPointSet, s: &[f64]) -> Result<NetMatch> {
        if points.len() != self.weights.len() {
            return Err(param("point set does not match the net"));
        }
        points.check_dim(s.len())?;
        let (exact, allow) = self.targets(points, s);

        let per_family = exec::map_range(self.families.len(), |fi| {
            let fam = &self.families[fi];
            let rank = fam.basis.rank();
            let y = fam.basis.coords(s);
            let s_res = residual_sq(&fam.basis, s);
            let mut best: Option<NetMatch> = None;
            for (bi, ball) in fam.balls.iter().enumerate() {
                let mut offsets: Vec<Vec<i64>> = vec![Vec::new()];
                if ball.spacing > 0.0 {
                    for d in 0..rank {
                        let base = ((y[d] - ball.center_coords[d]) / ball.spacing).round() as i64;
                        offsets = offsets
                            .into_iter()
                            .flat_map(|o| {
                                (-1..=1).map(move |delta| {
                                    let mut o = o.clone();
                                    o.push(base + delta);
                                    o
                                })
                            })
                            .collect();
                    }
                    offsets.retain(|o| {
                        o.iter().map(|x| x * x).sum::<i64>() as f64 <= ball.lattice_radius_sq
                    });
                }
                let hi = ball.sequence.partition_point(|&v| v < s_res);
                let mut levels = vec![0, hi.saturating_sub(1), hi.min(ball.sequence.len() - 1)];
                levels.dedup();
                for offset in offsets {
                    let e = NetElement { family: fi, ball: bi, offset, level: 0 };
                    let c = self.center_coords(&e);
                    for &level in &levels {
                        let cap = best.as_ref().map_or(f64::INFINITY, |b| b.worst_ratio);
                        let r = self.worst_ratio(fam, &c, ball.sequence[level], &exact, &allow, cap);
                        if r < cap {
                            best = Some(NetMatch {
                                element: NetElement { level, ..e.clone() },
                                worst_ratio: r,
                            });
                        }
                    }
                }
            }
            best
        });
        let mut best: Option<NetMatch> = None;
        for m in per_family.into_iter().flatten() {
            if best.as_ref().is_none_or(|b| m.worst_ratio < b.worst_ratio) {
                best = Some(m);
            }
        }
        best.ok_or_else(|| param("net has no element near the candidate"))
    }
}

/// Outcome of [`verify_net`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub params: TypeParams,
    pub config: NetConfig,
    pub net_size: u128,
    pub slack: f64,
    pub trials: usize,
    pub covered: usize,
    pub coverage: f64,
    pub proposals: usize,
    /// Best element's worst-point ratio, per trial.
    pub worst_ratios: Vec<f64>,
}

impl CoverageReport {
    /// Coverage the same trials would have at another slack.
    pub fn coverage_at(&self, slack: f64) -> f64 {
        let covered = self.worst_ratios.iter().filter(|&&r| r <= slack).count();
        covered as f64 / self.trials as f64
    }
}

/// Draws a single center `s` for which every cluster of `a` has type `i`.
pub fn sample_typed_center<R: Rng + ?Sized>(
    points: &WeightedPointSet,
    a: &Solution,
    i: i32,
    rng: &mut R,
) -> Result<(Vec<f64>, usize)> {
    let asg = assign(points, a)?;
    let power = a.power();
    let minima_a: Vec<f64> = cluster_minima(points, &asg, a)?.into_iter().map(|(_, ma)| ma).collect();
    let base = minima_a.iter().copied().fold(f64::INFINITY, f64::min);
    if !(base > 0.0) {
        return Err(CoresetError::TypeInfeasible { i, proposals: 0 });
    }
    let distinct = points.distinct_indices();
    for attempt in 1..=MAX_PROPOSALS {
        let q = points.point(distinct[rng.random_range(0..distinct.len())]);
        let target = 2f64.powi(i) * base * (1.0 + rng.random::<f64>());
        let radius = power.to_dist(target);
        let mut u: Vec<f64> = (0..points.dim()).map(|_| rng.sample(StandardNormal)).collect();
        let norm = sq_norm(&u).sqrt();
        if !(norm > 0.0) {
            continue;
        }
        u.iter_mut().for_each(|x| *x *= radius / norm);
        let s: Vec<f64> = q.iter().zip(&u).map(|(a, b)| a + b).collect();
        let cand = Solution::new(vec![s], power)?;
        let ok = cluster_minima(points, &asg, &cand)?
            .into_iter()
            .all(|(ms, ma)| type_index(ms, ma) == Some(i));
        if ok {
            return Ok((cand.center(0).to_vec(), attempt));
        }
    }
    Err(CoresetError::TypeInfeasible {
        i,
        proposals: MAX_PROPOSALS,
    })
}

/// Fraction of random type-`i` candidates whose cost vector is matched by
/// some net element within `slack` times the allowed error at every point.
pub fn verify_net(
    net: &ClusteringNet,
    points: &WeightedPointSet,
    a: &Solution,
    trials: usize,
    slack: f64,
    seed: u64,
) -> Result<CoverageReport> {
    if trials == 0 {
        return Err(param("trials must be positive"));
    }
    if !(slack >= 1.0) {
        return Err(param(format!("slack must be >= 1, got {slack}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut proposals = 0;
    let mut worst_ratios = Vec::with_capacity(trials);
    for _ in 0..trials {
        let (s, used) = sample_typed_center(points, a, net.params.i, &mut rng)?;
        proposals += used;
        worst_ratios.push(net.best_match(points, &s)?.worst_ratio);
    }
    let covered = worst_ratios.iter().filter(|&&r| r <= slack).count();
    Ok(CoverageReport {
        params: net.params.clone(),
        config: net.config.clone(),
        net_size: net.size(),
        slack,
        trials,
        covered,
        coverage: covered as f64 / trials as f64,
        proposals,
        worst_ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(rows: Vec<Vec<f64>>) -> (WeightedPointSet, Solution) {
        let p = WeightedPointSet::unweighted(rows).unwrap();
        let dim = p.dim();
        let mut mean = vec![0.0; dim];
        for (x, _) in p.iter() {
            mean.iter_mut().zip(x).for_each(|(m, v)| *m += v / p.len() as f64);
        }
        (p, Solution::new(vec![mean], Power::Means).unwrap())
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(lattice_count(1, 2.5 * 2.5), 5);
        assert_eq!(lattice_count(2, 1.0), 5);
        assert_eq!(lattice_count(2, 2.0), 9);
        assert_eq!(lattice_count(3, 1.0), 7);
        assert_eq!(lattice_count(0, 4.0), 1);
        // brute force
        let t2 = 7.3f64 * 7.3;
        let mut n = 0u128;
        for a in -8i64..=8 {
            for b in -8i64..=8 {
                for c in -8i64..=8 {
                    if ((a * a + b * b + c * c) as f64) <= t2 {
                        n += 1;
                    }
                }
            }
        }
        assert_eq!(lattice_count(3, t2), n);
    }

    #[test]
    fn limits_are_refused() {
        let (p, a) = instance((0..9).map(|i| vec![i as f64]).collect());
        let params = TypeParams::new(4, 0.5, 0.1);
        assert!(matches!(
            build_net(&p, &a, &params, &NetConfig::default()),
            Err(CoresetError::NetLimit(_))
        ));
        let (p, a) = instance(vec![vec![0.0; 5], vec![1.0; 5]]);
        assert!(matches!(
            build_net(&p, &a, &params, &NetConfig::default()),
            Err(CoresetError::NetLimit(_))
        ));
        let (p, a) = instance(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let cfg = NetConfig { k: 2, ..NetConfig::default() };
        assert!(matches!(build_net(&p, &a, &params, &cfg), Err(CoresetError::NetLimit(_))));
        let cfg = NetConfig { max_subset: 4, ..NetConfig::default() };
        assert!(matches!(build_net(&p, &a, &params, &cfg), Err(CoresetError::NetLimit(_))));
        // type outside [3, ceil(log2 eps^-2)]
        assert!(build_net(&p, &a, &TypeParams::new(2, 0.5, 0.1), &NetConfig::default()).is_err());
        assert!(build_net(&p, &a, &TypeParams::new(8, 0.5, 0.1), &NetConfig::default()).is_err());
        assert!(build_net(&p, &a, &TypeParams::new(4, 0.6, 0.1), &NetConfig::default()).is_err());
    }

    #[test]
    fn net_generating_point_is_matched_exactly() {
        let (p, a) = instance(vec![vec![0.0, 1.0], vec![2.0, 0.5], vec![-1.0, -1.5]]);
        let cfg = NetConfig { radius_constant: 2.0, ..NetConfig::default() };
        let net = build_net(&p, &a, &TypeParams::new(3, 0.5, 0.1), &cfg).unwrap();
        // s = input point 1: U = {1}, offset 0 in its own ball, residual 0
        let fam = net.families.iter().position(|f| f.subset == vec![1]).unwrap();
        let e = NetElement { family: fam, ball: 1, offset: vec![0], level: 0 };
        assert!(net.element_ratio(&p, p.point(1), &e) < 1e-12);
        assert!(net.best_match(&p, p.point(1)).unwrap().worst_ratio < 1e-12);
    }
}
