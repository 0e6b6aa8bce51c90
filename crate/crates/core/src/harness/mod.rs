//! Empirical distortion measurement.

pub mod candidates;
pub mod evaluate;
pub mod probe;
pub mod sweep;
pub mod types;

pub use candidates::{generate_candidates, Candidate, CandidateContext, PoolSpec, Strategy};
pub use evaluate::{Aggregates, CandidateReport, DistortionReport, EvalContext};
pub use probe::{gaussian_probe, Multipliers, ProbeReport};
pub use sweep::{sweep, SweepConfig, SweepMode, SweepReport, SweepRow};
pub use types::{classify_types, cluster_minima, label, type_index, TypeHistogram, TypeLabel, DEFAULT_GAMMA};
