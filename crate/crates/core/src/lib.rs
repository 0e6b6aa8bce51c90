//! Coresets for Euclidean k-means and k-median by group sensitivity
//! sampling, with tooling to check them empirically.
//!
//! The pipeline is: [`decompose::reduce_dimension`] and
//! [`decompose::round_weights`] prepare the instance, [`solver`] computes a
//! reference solution `A` with O(k) centers, [`decompose::build_groups`]
//! partitions its clusters into groups of comparable cost, and
//! [`sampler::draw_coreset`] samples the weighted coreset. [`pipeline`] wires
//! these together. [`harness`], [`subspace`] and [`netlab`] measure and probe
//! the result.

pub mod cost;
pub mod decompose;
pub mod error;
pub mod exec;
pub mod harness;
pub mod point;
pub mod netlab;
pub mod pipeline;
pub mod sampler;
pub mod solver;
pub mod subspace;
pub mod synthetic;

pub use cost::{cost_point, cost_set, cost_vector, dist, CostVector};
pub use error::{CoresetError, Result};
pub use point::{Point, Power, Solution, WeightedPointSet};
