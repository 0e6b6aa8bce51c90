//! Small subspaces that preserve inner products with a target vector.
//!
//! [`build_ip_basis`] grows a set `U` of input points greedily until
//! `|p^T (I - P_U) s| <= eps * ||(I - P_U) p|| * min_q ||q - s||` holds for
//! every input `p`, where `P_U` is the orthogonal projector onto `span(U)`.
//! Every round adds a point whose normalized residual has a component of at
//! least `eps * min_q ||q - s||` along the residual of `s`; those residual
//! directions are orthonormal, so at most `eps^{-2}` rounds follow the
//! initial point.

use serde::{Deserialize, Serialize};

use crate::cost::{dot, sq_dist, sq_norm};
use crate::error::{param, CoresetError, Result};
use crate::exec;

/// Relative residual below which a vector counts as inside the span.
const SPAN_TOL: f64 = 1e-10;
/// Violations are detected with this relative margin so that the bound
/// still holds after independent re-evaluation.
const VIOLATION_MARGIN: f64 = 1e-9;

/// Orthonormal basis of the span of some chosen input points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceBasis {
    /// Indices of the chosen source points `U`, in insertion order.
    pub chosen: Vec<usize>,
    /// Number of additions after the initial point.
    pub rounds: usize,
    dim: usize,
    basis: Vec<Vec<f64>>,
}

impl SubspaceBasis {
    pub fn empty(dim: usize) -> Self {
        SubspaceBasis {
            chosen: Vec::new(),
            rounds: 0,
            dim,
            basis: Vec::new(),
        }
    }

    /// Basis of the span of `vectors`; `chosen` lists their positions.
    pub fn span_of(dim: usize, vectors: &[&[f64]]) -> Result<Self> {
        let mut b = Self::empty(dim);
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(CoresetError::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            b.insert(i, v);
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Records `index` as chosen and extends the basis by `v` when `v` is
    /// not already in the span. Returns whether the rank grew.
    pub fn insert(&mut self, index: usize, v: &[f64]) -> bool {
        self.chosen.push(index);
        let r = self.residual(v);
        let norm = sq_norm(&r).sqrt();
        if norm <= SPAN_TOL * sq_norm(v).sqrt() || norm == 0.0 {
            return false;
        }
        self.basis.push(r.into_iter().map(|x| x / norm).collect());
        true
    }

    /// `(I - P_U) v` by modified Gram-Schmidt with one re-orthogonalization pass.
    pub fn residual(&self, v: &[f64]) -> Vec<f64> {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for u in &self.basis {
                let c = dot(u, &r);
                r.iter_mut().zip(u).for_each(|(x, ui)| *x -= c * ui);
            }
        }
        r
    }

    /// Coordinates of `P_U v` in the basis.
    pub fn coords(&self, v: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|u| dot(u, v)).collect()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }
}

/// Greedy construction of an inner-product preserving subset.
///
/// Starts from the point nearest to `s` and repeatedly adds the input with
/// the largest violation ratio `|p^T (I - P_U) s| / (||(I - P_U) p|| *
/// min_q ||q - s||)` while that ratio exceeds `eps` (ties to the lowest index).
pub fn build_ip_basis(points: &[Vec<f64>], s: &[f64], eps: f64) -> Result<SubspaceBasis> {
    let Some(first) = points.first() else {
        return Err(CoresetError::EmptyInstance);
    };
    if !(eps > 0.0 && eps < 1.0) {
        return Err(param(format!("eps must lie in (0, 1), got {eps}")));
    }
    let dim = first.len();
    for p in points.iter().chain(std::iter::once(&s.to_vec())) {
        if p.len() != dim {
            return Err(CoresetError::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
    }

    let mut nearest = 0;
    let mut best = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        let d = sq_dist(p, s);
        if d < best {
            best = d;
            nearest = i;
        }
    }
    let min_dist = best.sqrt();

    let mut basis = SubspaceBasis::empty(dim);
    basis.insert(nearest, &points[nearest]);

    // The potential argument bounds the loop; the rank bound is a backstop.
    while basis.rounds <= dim {
        let s_res = basis.residual(s);
        if sq_norm(&s_res).sqrt() <= SPAN_TOL * sq_norm(s).sqrt() {
            break;
        }
        let ratios = exec::map_slice(points, |p| {
            let p_res = basis.residual(p);
            let p_norm = sq_norm(&p_res).sqrt();
            if p_norm <= SPAN_TOL * sq_norm(p).sqrt() || p_norm == 0.0 {
                return 0.0;
            }
            dot(&p_res, &s_res).abs() / (p_norm * min_dist)
        });
        let mut worst = None;
        for (i, &r) in ratios.iter().enumerate() {
            if r > eps * (1.0 - VIOLATION_MARGIN) && worst.is_none_or(|w: usize| r > ratios[w]) {
                worst = Some(i);
            }
        }
        let Some(i) = worst else { break };
        basis.insert(i, &points[i]);
        basis.rounds += 1;
    }
    Ok(basis)
}

/// Largest `|p^T (I - P_U) s| / (||(I - P_U) p|| * min_q ||q - s||)` over
/// `points`, evaluated directly as `((I - P_U) p)^T ((I - P_U) s)`. Inputs
/// inside the span (up to rounding) have a zero left-hand side and contribute 0.
pub fn max_violation_ratio(points: &[Vec<f64>], s: &[f64], basis: &SubspaceBasis) -> f64 {
    let min_dist = points
        .iter()
        .map(|p| sq_dist(p, s))
        .fold(f64::INFINITY, f64::min)
        .sqrt();
    let s_res = basis.residual(s);
    points
        .iter()
        .map(|p| {
            let p_res = basis.residual(p);
            let norm = sq_norm(&p_res).sqrt();
            if norm == 0.0 || norm <= SPAN_TOL * sq_norm(p).sqrt() {
                0.0
            } else {
                dot(&p_res, &s_res).abs() / (norm * min_dist)
            }
        })
        .fold(0.0, f64::max)
}

/// The four terms of `||p - s||^2 = ||P_U (p - s)||^2 + ||(I - P_U) p||^2
/// + ||(I - P_U) s||^2 - 2 p^T (I - P_U) s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PythagoreanSplit {
    pub in_span: f64,
    pub point_residual: f64,
    pub center_residual: f64,
    /// `2 p^T (I - P_U) s`, entering the sum with a minus sign.
    pub cross: f64,
}

impl PythagoreanSplit {
    pub fn recombine(&self) -> f64 {
        self.in_span + self.point_residual + self.center_residual - self.cross
    }
}

pub fn pythagorean_split(p: &[f64], s: &[f64], basis: &SubspaceBasis) -> Result<PythagoreanSplit> {
    for v in [p, s] {
        if v.len() != basis.dim() {
            return Err(CoresetError::DimensionMismatch {
                expected: basis.dim(),
                found: v.len(),
            });
        }
    }
    let diff: Vec<f64> = p.iter().zip(s).map(|(a, b)| a - b).collect();
    let in_span = sq_norm(&basis.coords(&diff));
    let p_res = basis.residual(p);
    let s_res = basis.residual(s);
    Ok(PythagoreanSplit {
        in_span,
        point_residual: sq_norm(&p_res),
        center_residual: sq_norm(&s_res),
        cross: 2.0 * dot(&p_res, &s_res),
    })
}
