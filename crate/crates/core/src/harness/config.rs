use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ea::{Crossover, Selection};
use crate::eda::ClampMode;
use crate::error::{Error, Result};
use crate::fitness::FitnessFn;

fn as_config(e: Error) -> Error {
    match e {
        Error::Parse(msg) | Error::InvalidArgument(msg) => Error::Config(msg),
        other => other,
    }
}

/// A population size, either fixed or derived from the problem size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SizeRule {
    Fixed(usize),
    /// `max(2, round(√n))`
    SqrtN,
    /// `max(2, round(√n · ln n))`
    SqrtNLnN,
    N,
    /// `max(1, ⌊λ/2⌋)`; only meaningful for μ.
    HalfLambda,
}

impl SizeRule {
    fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "sqrt_n" => Ok(SizeRule::SqrtN),
            "sqrt_n_ln_n" => Ok(SizeRule::SqrtNLnN),
            "n" => Ok(SizeRule::N),
            "lambda/2" => Ok(SizeRule::HalfLambda),
            other => match other.parse::<usize>() {
                Ok(v) => Ok(SizeRule::Fixed(v)),
                Err(_) => Err(Error::config(format!("unknown population size rule '{other}'"))),
            },
        }
    }

    /// Resolves against `n`; `lambda` is used by [`SizeRule::HalfLambda`].
    pub fn resolve(self, n: usize, lambda: usize) -> usize {
        let nf = n as f64;
        match self {
            SizeRule::Fixed(v) => v,
            SizeRule::SqrtN => (nf.sqrt().round() as usize).max(2),
            SizeRule::SqrtNLnN => ((nf.sqrt() * nf.ln()).round() as usize).max(2),
            SizeRule::N => n,
            SizeRule::HalfLambda => (lambda / 2).max(1),
        }
    }
}

impl fmt::Display for SizeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeRule::Fixed(v) => write!(f, "{v}"),
            SizeRule::SqrtN => f.write_str("sqrt_n"),
            SizeRule::SqrtNLnN => f.write_str("sqrt_n_ln_n"),
            SizeRule::N => f.write_str("n"),
            SizeRule::HalfLambda => f.write_str("lambda/2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawSize {
    Number(u64),
    Rule(String),
}

impl RawSize {
    fn rule(&self) -> Result<SizeRule> {
        match self {
            RawSize::Number(v) => usize::try_from(*v)
                .map(SizeRule::Fixed)
                .map_err(|_| Error::config(format!("population size {v} is too large"))),
            RawSize::Rule(s) => SizeRule::parse(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawSizes {
    One(u64),
    Many(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgorithm {
    id: String,
    #[serde(default)]
    mu: Option<RawSize>,
    #[serde(default)]
    lambda: Option<RawSize>,
    #[serde(default)]
    chi: Option<f64>,
    #[serde(default)]
    p_c: Option<f64>,
    #[serde(default)]
    selection: Option<String>,
    #[serde(default)]
    crossover: Option<String>,
    #[serde(default)]
    mimic_clamp: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    algorithm: RawAlgorithm,
    #[serde(default)]
    fitness: Option<String>,
    #[serde(default)]
    block_width: Option<u64>,
    n: RawSizes,
    budget: u64,
    repetitions: u64,
    #[serde(default)]
    master_seed: u64,
    #[serde(default)]
    trajectory_stride: Option<u64>,
    #[serde(default)]
    output: Option<PathBuf>,
}

/// A validated algorithm choice with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgorithmSpec {
    OnePlusLambda { lambda: SizeRule, chi: f64 },
    MuPlusOne { mu: SizeRule, chi: f64 },
    MuCommaLambda { mu: SizeRule, lambda: SizeRule, chi: f64 },
    Ga { mu: SizeRule, lambda: SizeRule, chi: f64, p_c: f64, selection: Selection, crossover: Crossover },
    Umda { mu: SizeRule, lambda: SizeRule },
    Mimic { mu: SizeRule, lambda: SizeRule, clamp: ClampMode },
}

/// Population sizes of one algorithm at one problem size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PopulationSizes {
    pub mu: usize,
    pub lambda: usize,
}

impl AlgorithmSpec {
    pub fn id(&self) -> &'static str {
        match self {
            AlgorithmSpec::OnePlusLambda { .. } => "1+lambda",
            AlgorithmSpec::MuPlusOne { .. } => "mu+1",
            AlgorithmSpec::MuCommaLambda { .. } => "mu,lambda",
            AlgorithmSpec::Ga { .. } => "ga",
            AlgorithmSpec::Umda { .. } => "umda",
            AlgorithmSpec::Mimic { .. } => "mimic",
        }
    }

    /// `(μ, λ)` at problem size `n`. The `(1+λ)` EA reports `μ = 1` and the
    /// `(μ+1)` EA reports `λ = 1`.
    pub fn sizes(&self, n: usize) -> PopulationSizes {
        let both = |mu: &SizeRule, lambda: &SizeRule| {
            let lambda = lambda.resolve(n, 0);
            PopulationSizes {
                mu: mu.resolve(n, lambda),
                lambda,
            }
        };
        match self {
            AlgorithmSpec::OnePlusLambda { lambda, .. } => PopulationSizes {
                mu: 1,
                lambda: lambda.resolve(n, 0),
            },
            AlgorithmSpec::MuPlusOne { mu, .. } => PopulationSizes {
                mu: mu.resolve(n, 0),
                lambda: 1,
            },
            AlgorithmSpec::MuCommaLambda { mu, lambda, .. }
            | AlgorithmSpec::Ga { mu, lambda, .. }
            | AlgorithmSpec::Umda { mu, lambda }
            | AlgorithmSpec::Mimic { mu, lambda, .. } => both(mu, lambda),
        }
    }

    /// Mutation rate `χ/n`, for the EAs.
    pub fn mutation_rate(&self, n: usize) -> Option<f64> {
        match self {
            AlgorithmSpec::OnePlusLambda { chi, .. }
            | AlgorithmSpec::MuPlusOne { chi, .. }
            | AlgorithmSpec::MuCommaLambda { chi, .. }
            | AlgorithmSpec::Ga { chi, .. } => Some(chi / n as f64),
            AlgorithmSpec::Umda { .. } | AlgorithmSpec::Mimic { .. } => None,
        }
    }

    pub fn is_eda(&self) -> bool {
        matches!(self, AlgorithmSpec::Umda { .. } | AlgorithmSpec::Mimic { .. })
    }

    fn from_raw(raw: &RawAlgorithm) -> Result<Self> {
        let size = |field: &Option<RawSize>, name: &str| -> Result<SizeRule> {
            field
                .as_ref()
                .ok_or_else(|| Error::config(format!("algorithm '{}' needs '{name}'", raw.id)))?
                .rule()
        };
        let mu_or_half = |field: &Option<RawSize>| -> Result<SizeRule> {
            field.as_ref().map_or(Ok(SizeRule::HalfLambda), RawSize::rule)
        };
        let chi = raw.chi.unwrap_or(1.0);
        let unused = |present: bool, name: &str| -> Result<()> {
            if present {
                Err(Error::config(format!("'{name}' does not apply to algorithm '{}'", raw.id)))
            } else {
                Ok(())
            }
        };
        let ga_only = || -> Result<()> {
            unused(raw.p_c.is_some(), "p_c")?;
            unused(raw.selection.is_some(), "selection")?;
            unused(raw.crossover.is_some(), "crossover")
        };
        let no_clamp = || unused(raw.mimic_clamp.is_some(), "mimic_clamp");
        let no_chi = || unused(raw.chi.is_some(), "chi");
        let spec = match raw.id.trim() {
            "1+lambda" => {
                ga_only()?;
                no_clamp()?;
                unused(raw.mu.is_some(), "mu")?;
                AlgorithmSpec::OnePlusLambda {
                    lambda: size(&raw.lambda, "lambda")?,
                    chi,
                }
            }
            "mu+1" => {
                ga_only()?;
                no_clamp()?;
                unused(raw.lambda.is_some(), "lambda")?;
                AlgorithmSpec::MuPlusOne {
                    mu: size(&raw.mu, "mu")?,
                    chi,
                }
            }
            "mu,lambda" => {
                ga_only()?;
                no_clamp()?;
                AlgorithmSpec::MuCommaLambda {
                    mu: size(&raw.mu, "mu")?,
                    lambda: size(&raw.lambda, "lambda")?,
                    chi,
                }
            }
            "ga" => {
                no_clamp()?;
                let selection = raw.selection.as_deref().unwrap_or("tournament:2").parse::<Selection>().map_err(as_config)?;
                let crossover = raw.crossover.as_deref().unwrap_or("uniform").parse::<Crossover>().map_err(as_config)?;
                AlgorithmSpec::Ga {
                    mu: size(&raw.mu, "mu")?,
                    lambda: size(&raw.lambda, "lambda")?,
                    chi,
                    p_c: raw.p_c.unwrap_or(0.5),
                    selection,
                    crossover,
                }
            }
            "umda" => {
                ga_only()?;
                no_clamp()?;
                no_chi()?;
                AlgorithmSpec::Umda {
                    mu: size(&raw.mu, "mu")?,
                    lambda: size(&raw.lambda, "lambda")?,
                }
            }
            "mimic" => {
                ga_only()?;
                no_chi()?;
                let clamp = match raw.mimic_clamp.as_deref() {
                    Some(s) => s.parse::<ClampMode>().map_err(as_config)?,
                    None => ClampMode::TwoSided,
                };
                AlgorithmSpec::Mimic {
                    mu: mu_or_half(&raw.mu)?,
                    lambda: size(&raw.lambda, "lambda")?,
                    clamp,
                }
            }
            other => return Err(Error::config(format!("unknown algorithm '{other}'"))),
        };
        Ok(spec)
    }

    fn check_at(&self, n: usize, budget: u64) -> Result<()> {
        let PopulationSizes { mu, lambda } = self.sizes(n);
        if mu == 0 || lambda == 0 {
            return Err(Error::config(format!("population sizes must be positive (mu={mu}, lambda={lambda}, n={n})")));
        }
        let needs_mu_le_lambda = !matches!(self, AlgorithmSpec::OnePlusLambda { .. } | AlgorithmSpec::MuPlusOne { .. });
        if needs_mu_le_lambda && mu > lambda {
            return Err(Error::config(format!("need mu <= lambda, got mu={mu}, lambda={lambda} at n={n}")));
        }
        if (budget as u128) < lambda as u128 {
            return Err(Error::config(format!("budget {budget} is below lambda={lambda} at n={n}")));
        }
        if let Some(rate) = self.mutation_rate(n) {
            let chi = rate * n as f64;
            if !(chi > 0.0 && chi < n as f64 / 2.0) {
                return Err(Error::config(format!("chi must lie in (0, n/2), got {chi} at n={n}")));
            }
        }
        if let AlgorithmSpec::Ga { p_c, selection, .. } = self {
            if !(0.0..=1.0).contains(p_c) {
                return Err(Error::config(format!("crossover probability {p_c} outside [0, 1]")));
            }
            if let Selection::Tournament { k: 0 } = selection {
                return Err(Error::config("tournament size must be at least 1"));
            }
        }
        Ok(())
    }
}

/// A validated experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmSpec,
    pub fitness: FitnessFn,
    /// Strictly increasing problem sizes.
    pub sizes: Vec<usize>,
    pub budget: u64,
    pub repetitions: usize,
    pub master_seed: u64,
    pub trajectory_stride: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::config(format!("invalid config: {e}")))?;
        Self::from_raw(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let algorithm = AlgorithmSpec::from_raw(&raw.algorithm)?;
        let mut fitness: FitnessFn = raw.fitness.as_deref().unwrap_or("dlb").parse().map_err(as_config)?;
        if let Some(w) = raw.block_width {
            match fitness {
                FitnessFn::Dlb { .. } => {
                    let width = usize::try_from(w).map_err(|_| Error::config("block width too large"))?;
                    fitness = FitnessFn::Dlb { width };
                }
                _ => return Err(Error::config("block_width applies to dlb only")),
            }
        }
        let sizes: Vec<usize> = match raw.n {
            RawSizes::One(v) => vec![v],
            RawSizes::Many(v) => v,
        }
        .into_iter()
        .map(|v| usize::try_from(v).map_err(|_| Error::config(format!("problem size {v} too large"))))
        .collect::<Result<_>>()?;
        if sizes.is_empty() {
            return Err(Error::config("at least one problem size is required"));
        }
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("problem sizes must be strictly increasing"));
        }
        if raw.repetitions == 0 {
            return Err(Error::config("repetitions must be at least 1"));
        }
        let repetitions = usize::try_from(raw.repetitions).map_err(|_| Error::config("too many repetitions"))?;
        if raw.budget == 0 {
            return Err(Error::config("budget must be positive"));
        }
        for &n in &sizes {
            fitness.validate(n).map_err(as_config)?;
            algorithm.check_at(n, raw.budget)?;
        }
        let trajectory_stride = match raw.trajectory_stride {
            Some(0) => return Err(Error::config("trajectory_stride must be positive")),
            Some(s) => s,
            None => (raw.budget / 200).max(1),
        };
        Ok(Self {
            algorithm,
            fitness,
            sizes,
            budget: raw.budget,
            repetitions,
            master_seed: raw.master_seed,
            trajectory_stride,
            output: raw.output,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::from_json(s)
    }

    #[test]
    fn minimal_umda() {
        let c = parse(r#"{"algorithm":{"id":"umda","mu":10,"lambda":1000},"n":200,"budget":1000000,"repetitions":3}"#)
            .unwrap();
        assert_eq!(c.algorithm.sizes(200), PopulationSizes { mu: 10, lambda: 1000 });
        assert_eq!(c.fitness, FitnessFn::DLB);
        assert_eq!(c.trajectory_stride, 5000);
        assert_eq!(c.master_seed, 0);
    }

    #[test]
    fn lambda_rules() {
        let c = parse(r#"{"algorithm":{"id":"mimic","lambda":"sqrt_n_ln_n"},"n":[10,26,50],"budget":100,"repetitions":1}"#)
            .unwrap();
        // √10·ln10 = 7.28, √50·ln50 = 27.66
        assert_eq!(c.algorithm.sizes(10), PopulationSizes { mu: 3, lambda: 7 });
        assert_eq!(c.algorithm.sizes(50), PopulationSizes { mu: 14, lambda: 28 });
        assert_eq!(SizeRule::SqrtN.resolve(10, 0), 3);
        assert_eq!(SizeRule::SqrtN.resolve(2, 0), 2);
        assert_eq!(SizeRule::N.resolve(40, 0), 40);
    }

    #[test]
    fn ga_defaults_and_selection() {
        let c = parse(r#"{"algorithm":{"id":"ga","mu":5,"lambda":10,"selection":"linrank:1.5","crossover":"one_point","p_c":0.3},"n":20,"budget":1000,"repetitions":1}"#).unwrap();
        match c.algorithm {
            AlgorithmSpec::Ga { p_c, crossover, .. } => {
                assert_eq!(p_c, 0.3);
                assert_eq!(crossover, Crossover::OnePoint);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejections() {
        let bad = [
            r#"{"algorithm":{"id":"cga","lambda":10},"n":20,"budget":100,"repetitions":1}"#,
            r#"{"algorithm":{"id":"umda","mu":10,"lambda":1000},"n":200,"budget":999,"repetitions":1}"#,
            r#"{"algorithm":{"id":"umda","mu":10,"lambda":100},"n":200,"budget":1000,"repetitions":0}"#,
            r#"{"algorithm":{"id":"umda","mu":10,"lambda":100},"n":[20,20],"budget":1000,"repetitions":1}"#,
            r#"{"algorithm":{"id":"umda","mu":10,"lambda":100},"n":21,"budget":1000,"repetitions":1}"#,
            r#"{"algorithm":{"id":"umda","mu":200,"lambda":100},"n":20,"budget":1000,"repetitions":1}"#,
            r#"{"algorithm":{"id":"ga","mu":2,"lambda":10,"selection":"roulette"},"n":20,"budget":1000,"repetitions":1}"#,
            r#"{"algorithm":{"id":"ga","mu":2,"lambda":10,"p_c":1.5},"n":20,"budget":1000,"repetitions":1}"#,
            r#"{"algorithm":{"id":"1+lambda","lambda":10,"chi":30},"n":20,"budget":1000,"repetitions":1}"#,
            r#"{"algorithm":{"id":"mimic","lambda":10,"mimic_clamp":"none"},"n":20,"budget":1000,"repetitions":1}"#,
            r#"{"algorithm":{"id":"umda","mu":1,"lambda":10,"chi":2},"n":20,"budget":1000,"repetitions":1}"#,
            r#"{"algorithm":{"id":"umda","mu":1,"lambda":10},"n":20,"budget":1000,"repetitions":1,"extra":1}"#,
            r#"{"algorithm":{"id":"umda","mu":1,"lambda":"huge"},"n":20,"budget":1000,"repetitions":1}"#,
            r#"{"algorithm":{"id":"umda","mu":1,"lambda":10},"n":20,"budget":1000,"repetitions":1,"trajectory_stride":0}"#,
            r#"{"algorithm":{"id":"umda","mu":1,"lambda":10},"fitness":"one_max","block_width":3,"n":21,"budget":1000,"repetitions":1}"#,
            r#"not json"#,
        ];
        for text in bad {
            let err = parse(text).unwrap_err();
            assert!(matches!(err, Error::Config(_)), "{text}: {err:?}");
        }
    }

    #[test]
    fn block_width_and_other_fitnesses() {
        let c = parse(r#"{"algorithm":{"id":"1+lambda","lambda":4},"fitness":"dlb","block_width":3,"n":[9,12],"budget":100,"repetitions":1}"#).unwrap();
        assert_eq!(c.fitness, FitnessFn::Dlb { width: 3 });
        let c = parse(r#"{"algorithm":{"id":"mu+1","mu":4},"fitness":"one_max","n":7,"budget":100,"repetitions":1}"#).unwrap();
        assert_eq!(c.fitness, FitnessFn::OneMax);
        assert_eq!(c.algorithm.sizes(7), PopulationSizes { mu: 4, lambda: 1 });
    }
}
