use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A fixed-length binary string.
///
/// Genes are indexed from 0 here; gene `i` is `x_{i+1}` in one-based notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    genes: Vec<u8>,
}

impl BitString {
    pub fn zeros(n: usize) -> Self {
        Self { genes: vec![0; n] }
    }

    pub fn ones(n: usize) -> Self {
        Self { genes: vec![1; n] }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self {
            genes: bits.into_iter().map(u8::from).collect(),
        }
    }

    /// Builds from raw 0/1 bytes. Any other byte value is rejected.
    pub fn from_genes(genes: Vec<u8>) -> Result<Self> {
        if let Some(pos) = genes.iter().position(|&g| g > 1) {
            return Err(Error::invalid(format!("gene {pos} is {} (expected 0 or 1)", genes[pos])));
        }
        Ok(Self { genes })
    }

    /// Caller guarantees every byte is 0 or 1.
    pub(crate) fn from_genes_unchecked(genes: Vec<u8>) -> Self {
        debug_assert!(genes.iter().all(|&g| g <= 1));
        Self { genes }
    }

    /// Each gene independently 1 with probability 1/2.
    pub fn random(n: usize, rng: &mut RngStream) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("bitstring length must be at least 1"));
        }
        let mut genes = Vec::with_capacity(n);
        let mut word = 0u64;
        for i in 0..n {
            if i % 64 == 0 {
                word = rand::RngCore::next_u64(rng);
            }
            genes.push((word & 1) as u8);
            word >>= 1;
        }
        Ok(Self { genes })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.genes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.genes[i] == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        self.genes[i] = u8::from(value);
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.genes[i] ^= 1;
    }

    /// Genes as 0/1 bytes.
    #[inline]
    pub fn genes(&self) -> &[u8] {
        &self.genes
    }

    pub fn count_ones(&self) -> usize {
        self.genes.iter().map(|&g| g as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.genes.iter().map(|&g| g == 1)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &g in &self.genes {
            f.write_str(if g == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parses strings such as `"110111"` or `"11 01 11"`. Whitespace and `_`
/// are separators; any other character besides `0`/`1` is an error.
impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut genes = Vec::with_capacity(s.len());
        for (pos, c) in s.char_indices() {
            match c {
                '0' => genes.push(0),
                '1' => genes.push(1),
                '_' => {}
                c if c.is_whitespace() => {}
                c => return Err(Error::Parse(format!("unexpected character {c:?} at byte {pos}"))),
            }
        }
        if genes.is_empty() {
            return Err(Error::Parse("empty bitstring".into()));
        }
        Ok(Self { genes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_separators() {
        let x: BitString = "11 01_11".parse().unwrap();
        assert_eq!(x.to_string(), "110111");
        assert_eq!(x.len(), 6);
        assert!("".parse::<BitString>().is_err());
        assert!("10a1".parse::<BitString>().is_err());
    }

    #[test]
    fn random_has_requested_length() {
        let mut rng = RngStream::new(0, 0);
        assert_eq!(BitString::random(4, &mut rng).unwrap().len(), 4);
        assert_eq!(BitString::random(130, &mut rng).unwrap().len(), 130);
        assert!(BitString::random(0, &mut rng).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let a = BitString::random(100, &mut RngStream::new(5, 2)).unwrap();
        let b = BitString::random(100, &mut RngStream::new(5, 2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_mean_is_half() {
        // mean ones per string is 50, per-string sd is 5, so the mean over
        // 1e5 strings has sd 5/sqrt(1e5)
        let mut rng = RngStream::new(9, 0);
        let draws = 100_000;
        let total: usize = (0..draws)
            .map(|_| BitString::random(100, &mut rng).unwrap().count_ones())
            .sum();
        let mean = total as f64 / draws as f64;
        let sigma = 5.0 / (draws as f64).sqrt();
        assert!((mean - 50.0).abs() <= 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn from_genes_rejects_non_binary() {
        assert!(BitString::from_genes(vec![0, 1, 2]).is_err());
        assert_eq!(BitString::from_genes(vec![1, 0]).unwrap().to_string(), "10");
    }
}
