//! Problem instances, request distributions and the coverage probability `g`.

mod distribution;
mod element_set;
mod instance;

pub use distribution::{
    empirical_dist, eval_g, sample_scenario, Distribution, Evaluator, SamplerDist, Scenario, NORMALIZE_TOLERANCE,
};
pub use element_set::ElementSet;
pub use instance::{CoverSet, Instance};

/// Absolute tolerance for probability and cost comparisons.
pub const TOL: f64 = 1e-9;
