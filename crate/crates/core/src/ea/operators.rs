use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Flips each gene independently with probability `rate`.
///
/// For small rates the flipped positions are found by geometric skipping,
/// which has the same law as per-gene coin flips.
pub fn mutate_bitwise(x: &BitString, rate: f64, rng: &mut RngStream) -> BitString {
    let mut y = x.clone();
    let n = y.len();
    if rate <= 0.0 || n == 0 {
        return y;
    }
    if rate >= 1.0 {
        (0..n).for_each(|i| y.flip(i));
        return y;
    }
    if rate > 0.25 {
        for i in 0..n {
            if rng.bernoulli(rate) {
                y.flip(i);
            }
        }
        return y;
    }
    let log_q = (-rate).ln_1p();
    let mut i = 0usize;
    loop {
        // u in (0, 1]
        let u = 1.0 - rng.unit();
        let gap = (u.ln() / log_q).floor();
        if gap >= (n - i) as f64 {
            break;
        }
        i += gap as usize;
        y.flip(i);
        i += 1;
        if i >= n {
            break;
        }
    }
    y
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossover {
    /// Each gene taken from either parent with probability 1/2.
    Uniform,
    /// Prefix of the first parent up to a uniform cut point in `0..=n`,
    /// suffix of the second.
    OnePoint,
}

impl Crossover {
    pub fn apply(&self, x: &BitString, y: &BitString, rng: &mut RngStream) -> BitString {
        debug_assert_eq!(x.len(), y.len());
        let n = x.len();
        match self {
            Crossover::Uniform => {
                let mut z = x.clone();
                let mut word = 0u64;
                for i in 0..n {
                    if i % 64 == 0 {
                        word = rand::RngCore::next_u64(rng);
                    }
                    if word & 1 == 1 {
                        z.set(i, y.get(i));
                    }
                    word >>= 1;
                }
                z
            }
            Crossover::OnePoint => {
                let cut = rng.index(n + 1);
                let mut z = x.clone();
                for i in cut..n {
                    z.set(i, y.get(i));
                }
                z
            }
        }
    }
}

impl FromStr for Crossover {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Crossover::Uniform),
            "one_point" => Ok(Crossover::OnePoint),
            _ => Err(Error::config(format!("unknown crossover {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_zero_and_one() {
        let mut rng = RngStream::new(0, 0);
        let x: BitString = "1100101".parse().unwrap();
        assert_eq!(mutate_bitwise(&x, 0.0, &mut rng), x);
        assert_eq!(mutate_bitwise(&x, 1.0, &mut rng).to_string(), "0011010");
    }

    fn flip_moments(n: usize, rate: f64, trials: usize, seed: u64) -> (f64, f64) {
        let mut rng = RngStream::new(seed, 0);
        let x = BitString::zeros(n);
        let flips: Vec<f64> = (0..trials)
            .map(|_| mutate_bitwise(&x, rate, &mut rng).count_ones() as f64)
            .collect();
        let m = flips.iter().sum::<f64>() / trials as f64;
        let v = flips.iter().map(|f| (f - m).powi(2)).sum::<f64>() / (trials as f64 - 1.0);
        (m, v)
    }

    #[test]
    fn standard_rate_mean_flips() {
        // Binomial(100, 1/100): mean 1, variance 0.99
        let trials = 100_000;
        let (m, v) = flip_moments(100, 0.01, trials, 1);
        let sigma = (0.99f64 / trials as f64).sqrt();
        assert!((m - 1.0).abs() <= 4.0 * sigma, "mean {m}");
        assert!((v - 0.99).abs() < 0.03, "var {v}");
    }

    #[test]
    fn both_mutation_paths_agree_with_binomial() {
        for (rate, seed) in [(0.2, 2), (0.3, 3), (0.05, 4)] {
            let trials = 50_000;
            let (m, v) = flip_moments(40, rate, trials, seed);
            let mean = 40.0 * rate;
            let var = 40.0 * rate * (1.0 - rate);
            assert!((m - mean).abs() <= 4.0 * (var / trials as f64).sqrt(), "rate {rate}: {m}");
            assert!((v / var - 1.0).abs() < 0.05, "rate {rate}: var {v}");
        }
    }

    #[test]
    fn each_position_is_equally_likely() {
        let mut rng = RngStream::new(5, 0);
        let x = BitString::zeros(10);
        let mut hits = [0u32; 10];
        for _ in 0..50_000 {
            let y = mutate_bitwise(&x, 0.1, &mut rng);
            for (i, h) in hits.iter_mut().enumerate() {
                *h += y.get(i) as u32;
            }
        }
        // expected 5000 each, sd ~67
        assert!(hits.iter().all(|&h| (4700..5300).contains(&h)), "{hits:?}");
    }

    #[test]
    fn crossover_of_a_string_with_itself() {
        let mut rng = RngStream::new(0, 0);
        let x: BitString = "1011001110".parse().unwrap();
        for c in [Crossover::Uniform, Crossover::OnePoint] {
            for _ in 0..20 {
                assert_eq!(c.apply(&x, &x, &mut rng), x);
            }
        }
    }

    #[test]
    fn one_point_is_prefix_then_suffix() {
        let mut rng = RngStream::new(1, 0);
        let x = BitString::ones(12);
        let y = BitString::zeros(12);
        for _ in 0..50 {
            let z = Crossover::OnePoint.apply(&x, &y, &mut rng);
            let k = z.iter().take_while(|&b| b).count();
            assert!(z.iter().skip(k).all(|b| !b));
        }
    }
}
