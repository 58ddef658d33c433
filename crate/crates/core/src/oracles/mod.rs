//! Analysis quantities of the UMDA runtime argument, closed-form bound
//! calculators, and Monte Carlo verifiers.

mod bounds;
mod stats;
pub mod verify;

pub use bounds::{level_based_bound, theta, trap_tail_bound, z0_expectation_bound, LevelBound, TheoryParams};
pub use stats::{block_stats, IterationStats};
pub use verify::{verify_block_distributions, verify_untouched_marginal_dynamics, Check, Moments, Report};
