//! Seeded random streams.
//!
//! Every repetition of an experiment owns one [`RngStream`], identified by the
//! pair `(master_seed, stream_id)`. The generator is ChaCha8 keyed by the
//! master seed with the ChaCha stream counter set to `stream_id`, so distinct
//! ids give non-overlapping keystreams and the same pair always replays the
//! same draws.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_id);
        Self {
            master_seed,
            stream_id,
            inner,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh stream sharing this stream's master seed.
    pub fn sibling(&self, stream_id: u64) -> Self {
        Self::new(self.master_seed, stream_id)
    }

    /// Uniform float in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn unit(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// One Bernoulli trial. `p <= 0` never succeeds and `p >= 1` always does.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// Uniform index in `0..bound`. `bound` must be positive.
    #[inline]
    pub fn index(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        // Lemire's multiply-shift with rejection; unbiased.
        let bound = bound as u64;
        loop {
            let x = self.inner.next_u64();
            let m = (x as u128) * (bound as u128);
            let low = m as u64;
            if low >= bound || low >= bound.wrapping_neg() % bound {
                return (m >> 64) as usize;
            }
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Draws from `Binomial(trials, p)`.
pub fn sample_binomial(trials: u64, p: f64, rng: &mut RngStream) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("binomial probability {p} outside [0, 1]")));
    }
    if p == 0.0 || trials == 0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(trials);
    }
    let dist = Binomial::new(trials, p).map_err(|e| Error::invalid(e.to_string()))?;
    Ok(dist.sample(rng))
}

/// `E[X^2]` for `X ~ Binomial(trials, p)`: `np(p(n - 1) + 1)`.
pub fn binomial_second_moment(trials: u64, p: f64) -> f64 {
    let n = trials as f64;
    n * p * (p * (n - 1.0) + 1.0)
}
