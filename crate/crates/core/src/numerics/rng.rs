//! Seeded random sampling.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) keyed from a 64-bit
//! seed. ChaCha output is specified bit-for-bit, so a seed yields the same
//! stream on every platform. Uniform reals take the top 53 bits of a 64-bit
//! draw; normals use the Box–Muller transform on two such uniforms.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Generator for an indexed sub-stream, e.g. per-sample noise.
    pub fn derived(seed: u64, stream: u64) -> Self {
        Self::new(derive_seed(seed, stream))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Uniform in `(0, 1]`, safe as a logarithm argument.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// Uniform integer in `0..n` (Lemire's widening multiply; `n > 0`).
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        ((self.inner.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Two independent standard-normal variates.
    #[inline]
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open0();
        let u2 = self.uniform();
        box_muller(u1, u2)
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

impl RngCore for SeededRng {
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

/// Box–Muller: `r = sqrt(-2 ln u1)`, returns `(r cos 2πu2, r sin 2πu2)`.
///
/// `u1` must lie in `(0, 1]`.
#[inline]
pub fn box_muller(u1: f64, u2: f64) -> (f64, f64) {
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with a stream index into an independent seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0x005E_ED0F_5EED)))
}
