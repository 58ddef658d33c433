use std::fmt;
use std::str::FromStr;

use rand::RngCore;

use super::clamp_to_margins;
use super::entropy::{conditional_one, EntropyBase, EntropyTable};
use crate::bits::BitString;
use crate::budget::Evaluator;
use crate::error::{Error, Result};
use crate::oracles::{block_stats, IterationStats};
use crate::optimizer::Optimizer;
use crate::population::{sort_population, Individual, SortedPopulation};
use crate::rng::RngStream;

const TIE_TOLERANCE: f64 = 1e-12;

/// How sampling probabilities are kept away from 0 and 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ClampMode {
    /// `[1/n, 1 - 1/n]`.
    #[default]
    TwoSided,
    /// `max(p, 1/n)` on the probability of a one only.
    OneSided,
}

impl ClampMode {
    pub fn apply(self, p: f64, n: usize) -> f64 {
        match self {
            ClampMode::TwoSided => clamp_to_margins(p, n),
            ClampMode::OneSided => p.max(1.0 / n as f64).min(1.0),
        }
    }
}

impl FromStr for ClampMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "two_sided" => Ok(ClampMode::TwoSided),
            "one_sided" => Ok(ClampMode::OneSided),
            other => Err(Error::Parse(format!("unknown clamp mode '{other}'"))),
        }
    }
}

impl fmt::Display for ClampMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClampMode::TwoSided => "two_sided",
            ClampMode::OneSided => "one_sided",
        })
    }
}

/// Chain-structured model
/// `p(X_{π1}) p(X_{π2} | X_{π1}) ... p(X_{πn} | X_{πn-1})`.
///
/// `root_p` and `cond` hold the estimated probabilities of a one; the
/// clamp is applied when sampling. `cond[k - 1][b]` is
/// `Pr(X_{π_{k+1}} = 1 | X_{π_k} = b)` in zero-based chain positions.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainModel {
    pi: Vec<usize>,
    root_p: f64,
    cond: Vec<[f64; 2]>,
    clamp: ClampMode,
    root_threshold: u64,
    cond_thresholds: Vec<[u64; 2]>,
}

#[inline]
fn threshold(p: f64) -> u64 {
    (p * 4_294_967_296.0).round() as u64
}

impl ChainModel {
    pub fn new(pi: Vec<usize>, root_p: f64, cond: Vec<[f64; 2]>, clamp: ClampMode) -> Result<Self> {
        let n = pi.len();
        if n == 0 {
            return Err(Error::invalid("chain must cover at least one variable"));
        }
        let mut seen = vec![false; n];
        for &v in &pi {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::invalid("chain order is not a permutation"));
            }
        }
        if cond.len() != n - 1 {
            return Err(Error::invalid(format!("{} conditionals for {n} variables", cond.len())));
        }
        let valid = |p: f64| (0.0..=1.0).contains(&p);
        if !valid(root_p) || cond.iter().flatten().any(|&p| !valid(p)) {
            return Err(Error::invalid("chain probabilities must lie in [0, 1]"));
        }
        let root_threshold = threshold(clamp.apply(root_p, n));
        let cond_thresholds = cond
            .iter()
            .map(|q| [threshold(clamp.apply(q[0], n)), threshold(clamp.apply(q[1], n))])
            .collect();
        Ok(Self {
            pi,
            root_p,
            cond,
            clamp,
            root_threshold,
            cond_thresholds,
        })
    }

    pub fn n(&self) -> usize {
        self.pi.len()
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn clamp(&self) -> ClampMode {
        self.clamp
    }

    /// Estimated probability that the root is one, before clamping.
    pub fn root_p(&self) -> f64 {
        self.root_p
    }

    /// Estimated conditionals before clamping.
    pub fn conditionals(&self) -> &[[f64; 2]] {
        &self.cond
    }

    /// Clamped probability that the root is one.
    pub fn root_probability(&self) -> f64 {
        self.clamp.apply(self.root_p, self.n())
    }

    /// Clamped `Pr(X_{π_k} = a | X_{π_{k-1}} = b)` for chain position
    /// `k` in `1..n` (zero-based).
    pub fn probability(&self, k: usize, a: bool, b: bool) -> f64 {
        let one = self.clamp.apply(self.cond[k - 1][b as usize], self.n());
        if a {
            one
        } else {
            1.0 - one
        }
    }
}

/// Ancestral sampling: the root first, then each chain variable given the
/// value just drawn for its predecessor.
pub fn mimic_sample(chain: &ChainModel, rng: &mut RngStream) -> BitString {
    let n = chain.n();
    let mut genes = vec![0u8; n];
    let mut prev = (rng.next_u32() as u64) < chain.root_threshold;
    genes[chain.pi[0]] = prev as u8;
    for (k, th) in chain.cond_thresholds.iter().enumerate() {
        let v = (rng.next_u32() as u64) < th[prev as usize];
        genes[chain.pi[k + 1]] = v as u8;
        prev = v;
    }
    BitString::from_genes_unchecked(genes)
}

/// Uniform choice among near-minimal values, by reservoir sampling.
struct ArgMin {
    best: f64,
    index: usize,
    ties: usize,
}

impl ArgMin {
    fn new() -> Self {
        Self {
            best: f64::INFINITY,
            index: usize::MAX,
            ties: 0,
        }
    }

    fn offer(&mut self, value: f64, index: usize, rng: &mut RngStream) {
        if value < self.best - TIE_TOLERANCE {
            self.best = value;
            self.index = index;
            self.ties = 1;
        } else if (value - self.best).abs() <= TIE_TOLERANCE {
            self.ties += 1;
            if rng.index(self.ties) == 0 {
                self.index = index;
            }
        }
    }
}

/// Learns a chain from the selected individuals: the root minimizes the
/// empirical entropy and each successor minimizes the conditional entropy
/// given its predecessor. Ties are broken uniformly at random.
pub fn build_chain(selected: &[Individual], n: usize, clamp: ClampMode, rng: &mut RngStream) -> Result<ChainModel> {
    build_chain_in_base(selected, n, clamp, EntropyBase::Bits, rng)
}

pub(crate) fn build_chain_in_base(
    selected: &[Individual],
    n: usize,
    clamp: ClampMode,
    base: EntropyBase,
    rng: &mut RngStream,
) -> Result<ChainModel> {
    let mu = selected.len();
    if mu == 0 {
        return Err(Error::invalid("cannot learn a chain from no individuals"));
    }
    if n == 0 || selected.iter().any(|ind| ind.genome.len() != n) {
        return Err(Error::invalid("selected genomes must all have length n"));
    }
    // column-major bitsets, one per variable
    let words = mu.div_ceil(64);
    let mut cols = vec![0u64; n * words];
    for (r, ind) in selected.iter().enumerate() {
        let (w, bit) = (r / 64, 1u64 << (r % 64));
        for (i, &g) in ind.genome.genes().iter().enumerate() {
            if g == 1 {
                cols[i * words + w] |= bit;
            }
        }
    }
    let col = |i: usize| &cols[i * words..(i + 1) * words];
    let ones: Vec<u64> = (0..n).map(|i| col(i).iter().map(|w| w.count_ones() as u64).sum()).collect();
    let total = mu as u64;
    let mut table = EntropyTable::new(total, n, base);

    let mut root = ArgMin::new();
    for (i, &k) in ones.iter().enumerate() {
        root.offer(table.entropy(k), i, rng);
    }
    let mut pi = Vec::with_capacity(n);
    let mut used = vec![false; n];
    pi.push(root.index);
    used[root.index] = true;
    let mut cond = Vec::with_capacity(n.saturating_sub(1));
    let mut joint = vec![0u64; n];
    while pi.len() < n {
        let j = *pi.last().expect("non-empty");
        let cj = col(j);
        let count_1 = ones[j];
        let count_0 = total - count_1;
        let h0 = table.weighted_branch(count_0);
        let h1 = table.weighted_branch(count_1);
        let mut next = ArgMin::new();
        for i in (0..n).filter(|&i| !used[i]) {
            let both: u64 = if words == 1 {
                (cols[i] & cj[0]).count_ones() as u64
            } else {
                col(i).iter().zip(cj).map(|(a, b)| (a & b).count_ones() as u64).sum()
            };
            joint[i] = both;
            next.offer(h0[(ones[i] - both) as usize] + h1[both as usize], i, rng);
        }
        let i = next.index;
        let both = joint[i];
        cond.push([
            conditional_one(ones[i] - both, count_0, total, n),
            conditional_one(both, count_1, total, n),
        ]);
        pi.push(i);
        used[i] = true;
    }
    let root_p = ones[pi[0]] as f64 / mu as f64;
    ChainModel::new(pi, root_p, cond, clamp)
}

/// MIMIC with margins as an [`Optimizer`].
#[derive(Clone, Debug)]
pub struct Mimic {
    mu: usize,
    lambda: usize,
    clamp: ClampMode,
    population: SortedPopulation,
    chain: Option<ChainModel>,
    stats: Option<IterationStats>,
}

impl Mimic {
    /// Samples and sorts a uniformly random initial population.
    pub fn new(
        n: usize,
        mu: usize,
        lambda: usize,
        clamp: ClampMode,
        eval: &mut Evaluator,
        rng: &mut RngStream,
    ) -> Result<Self> {
        if mu == 0 || lambda < mu {
            return Err(Error::config(format!("need 1 <= mu <= lambda, got mu={mu}, lambda={lambda}")));
        }
        let pop = (0..lambda)
            .map(|_| Ok(eval.evaluate(BitString::random(n, rng)?)))
            .collect::<Result<Vec<_>>>()?;
        let population = sort_population(pop, rng);
        let stats = Self::stats_for(&population, mu, eval)?;
        Ok(Self {
            mu,
            lambda,
            clamp,
            population,
            chain: None,
            stats,
        })
    }

    fn stats_for(pop: &SortedPopulation, mu: usize, eval: &Evaluator) -> Result<Option<IterationStats>> {
        if eval.fitness_fn().is_dlb2() {
            block_stats(pop, mu, eval.fitness_fn()).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn population(&self) -> &SortedPopulation {
        &self.population
    }

    /// The chain learned in the latest generation.
    pub fn chain(&self) -> Option<&ChainModel> {
        self.chain.as_ref()
    }
}

impl Optimizer for Mimic {
    fn step(&mut self, eval: &mut Evaluator, rng: &mut RngStream) {
        let n = eval.n();
        let chain = build_chain(self.population.fittest(self.mu), n, self.clamp, rng).expect("valid population");
        let pop: Vec<Individual> = (0..self.lambda).map(|_| eval.evaluate(mimic_sample(&chain, rng))).collect();
        self.population = sort_population(pop, rng);
        self.stats = Self::stats_for(&self.population, self.mu, eval).expect("valid population");
        self.chain = Some(chain);
    }

    fn best(&self) -> &Individual {
        self.population.best().expect("lambda >= 1")
    }

    fn block_stats(&self) -> Option<&IterationStats> {
        self.stats.as_ref()
    }
}
