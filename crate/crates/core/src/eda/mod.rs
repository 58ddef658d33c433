//! Estimation of distribution algorithms with margins: the univariate UMDA
//! and the chain-structured MIMIC.

mod entropy;
mod mimic;
mod umda;

pub use entropy::{conditional_entropy, empirical_entropy, EntropyBase, JointCounts};
pub use mimic::{build_chain, mimic_sample, ChainModel, ClampMode, Mimic};
pub use umda::{umda_step, umda_update, MarginalModel, Umda, UmdaGeneration};

/// `[1/n, 1 - 1/n]`
#[inline]
pub(crate) fn clamp_to_margins(p: f64, n: usize) -> f64 {
    let lo = 1.0 / n as f64;
    p.max(lo).min(1.0 - lo)
}
