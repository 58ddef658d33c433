//! Rank-based parent selection over a population sorted fittest first.
//!
//! Ranks are zero-based, 0 being the fittest. Equal-fitness individuals have
//! already been shuffled by the sort, so selecting by rank breaks fitness
//! ties uniformly.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Selection {
    /// Best of `k` ranks drawn uniformly with replacement.
    Tournament { k: usize },
    /// Uniform over the `μ` best ranks.
    Comma,
    /// `Pr(rank i) = (η - 2(η-1) i/(λ-1)) / λ` with `η ∈ (1, 2]`.
    LinearRanking { eta: f64 },
    /// `Pr(rank i) ∝ exp(-η i/λ)` with `η > 1`.
    ExponentialRanking { eta: f64 },
}

impl FromStr for Selection {
    type Err = Error;

    /// Accepts `tournament:<k>`, `comma`, `linrank:<eta>`, `exprank:<eta>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((kind, arg)) => (kind, Some(arg)),
            None => (s, None),
        };
        let float_arg = |what: &str| -> Result<f64> {
            let raw = arg.ok_or_else(|| Error::config(format!("{what} needs a parameter, e.g. {what}:1.5")))?;
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::config(format!("bad {what} parameter {raw:?}")))
        };
        match kind {
            "tournament" => {
                let raw = arg.ok_or_else(|| Error::config("tournament needs a size, e.g. tournament:2"))?;
                let k = raw
                    .parse::<usize>()
                    .map_err(|_| Error::config(format!("bad tournament size {raw:?}")))?;
                if k == 0 {
                    return Err(Error::config("tournament size must be at least 1"));
                }
                Ok(Selection::Tournament { k })
            }
            "comma" if arg.is_none() => Ok(Selection::Comma),
            "linrank" => {
                let eta = float_arg("linrank")?;
                if !(eta > 1.0 && eta <= 2.0) {
                    return Err(Error::config(format!("linear ranking needs eta in (1, 2], got {eta}")));
                }
                Ok(Selection::LinearRanking { eta })
            }
            "exprank" => {
                let eta = float_arg("exprank")?;
                if eta <= 1.0 {
                    return Err(Error::config(format!("exponential ranking needs eta > 1, got {eta}")));
                }
                Ok(Selection::ExponentialRanking { eta })
            }
            _ => Err(Error::config(format!("unknown selection {s:?}"))),
        }
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::Tournament { k } => write!(f, "tournament:{k}"),
            Selection::Comma => f.write_str("comma"),
            Selection::LinearRanking { eta } => write!(f, "linrank:{eta}"),
            Selection::ExponentialRanking { eta } => write!(f, "exprank:{eta}"),
        }
    }
}

/// A selection mechanism bound to a population size.
#[derive(Clone, Debug)]
pub struct Selector {
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    Tournament { k: usize, lambda: usize },
    Uniform { size: usize },
    Cdf(Vec<f64>),
}

impl Selector {
    /// `mu` is only used by comma selection.
    pub fn new(selection: Selection, lambda: usize, mu: usize) -> Self {
        assert!(lambda > 0);
        let kind = match selection {
            Selection::Tournament { k } => Kind::Tournament { k, lambda },
            Selection::Comma => Kind::Uniform {
                size: mu.clamp(1, lambda),
            },
            Selection::LinearRanking { eta } => {
                if lambda == 1 {
                    Kind::Uniform { size: 1 }
                } else {
                    let l = lambda as f64;
                    Kind::Cdf(cdf((0..lambda).map(|i| (eta - 2.0 * (eta - 1.0) * i as f64 / (l - 1.0)) / l)))
                }
            }
            Selection::ExponentialRanking { eta } => {
                let l = lambda as f64;
                Kind::Cdf(cdf((0..lambda).map(|i| (-eta * i as f64 / l).exp())))
            }
        };
        Self { kind }
    }

    /// Draws one rank.
    pub fn pick(&self, rng: &mut RngStream) -> usize {
        match &self.kind {
            Kind::Tournament { k, lambda } => (0..*k).map(|_| rng.index(*lambda)).min().expect("k >= 1"),
            Kind::Uniform { size } => rng.index(*size),
            Kind::Cdf(cdf) => {
                let u = rng.unit() * cdf[cdf.len() - 1];
                cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
            }
        }
    }

    /// Exact selection probability of each rank, for the mechanisms that
    /// have a closed form; tournament uses `((λ-i)^k - (λ-i-1)^k) / λ^k`.
    pub fn probabilities(&self, lambda: usize) -> Vec<f64> {
        match &self.kind {
            Kind::Tournament { k, lambda } => {
                let l = *lambda as f64;
                (0..*lambda)
                    .map(|i| {
                        let a = (l - i as f64) / l;
                        let b = (l - i as f64 - 1.0) / l;
                        a.powi(*k as i32) - b.powi(*k as i32)
                    })
                    .collect()
            }
            Kind::Uniform { size } => (0..lambda).map(|i| if i < *size { 1.0 / *size as f64 } else { 0.0 }).collect(),
            Kind::Cdf(cdf) => {
                let total = cdf[cdf.len() - 1];
                let mut prev = 0.0;
                cdf.iter()
                    .map(|&c| {
                        let p = (c - prev) / total;
                        prev = c;
                        p
                    })
                    .collect()
            }
        }
    }
}

fn cdf(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .map(|w| {
            acc += w.max(0.0);
            acc
        })
        .collect()
}
