use serde::{Deserialize, Serialize};

use crate::error::{param, CoresetError, Result};
use crate::point::WeightedPointSet;

/// Integral weights obtained by a common scale factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundedWeights {
    pub points: WeightedPointSet,
    /// New weights are `round(scale * w)`.
    pub scale: f64,
    /// Original indices of the retained points, in order.
    pub kept: Vec<usize>,
    /// Original indices of zero-weight points that were dropped.
    pub dropped: Vec<usize>,
}

/// Scales weights by a common factor and rounds them to positive integers.
///
/// Already integral weights keep scale 1. Otherwise the scale is
/// `ceil(1 / (eps * min w))`, which makes every scaled weight at least
/// `1 / eps`, so rounding moves each weight (and the total) by a relative
/// amount of at most `eps / 2`.
pub fn round_weights(points: &WeightedPointSet, eps: f64) -> Result<RoundedWeights> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(param(format!("eps must lie in (0, 1), got {eps}")));
    }
    let (kept, dropped): (Vec<usize>, Vec<usize>) =
        (0..points.len()).partition(|&i| points.weight(i) > 0.0);
    if kept.is_empty() {
        return Err(CoresetError::EmptyInstance);
    }
    let base = points.select(&kept)?;
    let integral = base.weights().iter().all(|w| w.fract() == 0.0);
    let scale = if integral {
        1.0
    } else {
        let min_w = base.weights().iter().copied().fold(f64::INFINITY, f64::min);
        (1.0 / (eps * min_w)).ceil()
    };
    let weights = base
        .weights()
        .iter()
        .map(|w| (w * scale).round().max(1.0))
        .collect();
    let rounded = WeightedPointSet::from_flat(base.dim(), base.coords().to_vec(), weights)?;
    Ok(RoundedWeights {
        points: rounded,
        scale,
        kept,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(weights: Vec<f64>) -> WeightedPointSet {
        let rows = (0..weights.len()).map(|i| vec![i as f64]).collect();
        WeightedPointSet::new(rows, weights).unwrap()
    }

    #[test]
    fn unit_weights_are_untouched() {
        let r = round_weights(&set(vec![1.0, 1.0, 1.0]), 0.1).unwrap();
        assert_eq!(r.scale, 1.0);
        assert_eq!(r.points.weights(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn fractional_weights_stay_within_eps() {
        let p = set(vec![0.5, 1.5]);
        let r = round_weights(&p, 0.1).unwrap();
        assert!(r.points.weights().iter().all(|w| w.fract() == 0.0 && *w >= 1.0));
        let restored = r.points.total_weight() / r.scale;
        assert!((1.8..=2.2).contains(&restored), "{restored}");
        assert_eq!(r.scale, (1.0f64 / (0.1 * 0.5)).ceil());
        // every scale at or above the chosen one keeps the bound
        for s in (r.scale as u32)..(r.scale as u32 + 200) {
            let s = s as f64;
            let t: f64 = p.weights().iter().map(|w| (w * s).round()).sum::<f64>() / s;
            assert!((t - 2.0).abs() <= 0.1 * 2.0, "scale {s}");
        }
    }

    #[test]
    fn tiny_weight_survives_scaling() {
        let r = round_weights(&set(vec![1e-9, 1.0]), 0.1).unwrap();
        assert_eq!(r.scale, (1.0 / (0.1 * 1e-9f64)).ceil());
        assert!(r.points.weight(0) >= 1.0);
        let total = r.points.total_weight() / r.scale;
        assert!((total - (1.0 + 1e-9)).abs() <= 0.1 * (1.0 + 1e-9));
    }

    #[test]
    fn zero_weights_are_dropped_and_reported() {
        let r = round_weights(&set(vec![0.0, 2.0, 0.0, 3.0]), 0.1).unwrap();
        assert_eq!(r.dropped, vec![0, 2]);
        assert_eq!(r.kept, vec![1, 3]);
        assert_eq!(r.points.len(), 2);
        assert!(matches!(
            round_weights(&set(vec![0.0]), 0.1),
            Err(CoresetError::EmptyInstance)
        ));
    }
}
