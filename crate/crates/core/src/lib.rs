//! Runtime experiments for evolutionary algorithms and estimation of
//! distribution algorithms on the Deceptive Leading Blocks (DLB) benchmark.
//!
//! The crate provides the fitness functions, mutation-based EAs, UMDA and
//! MIMIC with margins, block-count instrumentation with Monte Carlo
//! verifiers, and a reproducible experiment harness.

pub mod bits;
pub mod budget;
pub mod ea;
pub mod eda;
pub mod error;
pub mod fitness;
pub mod harness;
pub mod optimizer;
pub mod oracles;
pub mod population;
pub mod rng;

pub use bits::BitString;
pub use budget::{EvaluationBudget, Evaluator};
pub use error::{Error, Result};
pub use fitness::FitnessFn;
pub use optimizer::Optimizer;
pub use population::{sort_population, Individual, SortedPopulation};
pub use rng::RngStream;
