//! Preprocessing that puts an instance into the shape the sampler needs:
//! lower dimension, integral weights, and groups of clusters whose costs
//! agree within a factor of two.

mod groups;
mod projection;
mod rounding;

pub use groups::{build_groups, Cell, Group, GroupedInstance, ZeroBucket};
pub use projection::{reduce_dimension, target_dimension, EmbeddingKind, Projection, DEFAULT_JL_CONSTANT};
pub use rounding::{round_weights, RoundedWeights};

use crate::error::{param, Result};

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 0.5 {
        Ok(())
    } else {
        Err(param(format!("eps must lie in (0, 1/2], got {eps}")))
    }
}
