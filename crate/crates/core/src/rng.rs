//! Seeded, splittable randomness.
//!
//! Every stochastic operation draws from an [`RngStream`]. A stream is a
//! ChaCha8 keystream selected by `(seed, stream_id)`: identical pairs replay
//! bit-exactly and distinct stream ids are independent keystreams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Two independent standard-normal variates.
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        (
            self.rng.sample(StandardNormal),
            self.rng.sample(StandardNormal),
        )
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Equiprobable bit.
    pub fn bit(&mut self) -> u8 {
        self.rng.random::<bool>() as u8
    }

    pub fn bits(&mut self, n: usize) -> Vec<u8> {
        (0..n).map(|_| self.bit()).collect()
    }
}

/// Packs independent indices into one stream id: `(domain, a, b)` with
/// `domain < 2^8`, `a < 2^24`, `b < 2^32`.
pub fn stream_key(domain: u8, a: u32, b: u32) -> u64 {
    debug_assert!(a < (1 << 24));
    ((domain as u64) << 56) | ((a as u64 & 0xff_ffff) << 32) | b as u64
}
