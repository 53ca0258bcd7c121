//! Seeded random streams.
//!
//! Every stream is a xoshiro256** generator whose 64-bit seed is derived from
//! a master seed and a purpose tag by one round of the SplitMix64 finalizer.
//! The generator state is then expanded from that seed with SplitMix64 (the
//! `seed_from_u64` convention of `rand_xoshiro`). Uniform floats use the top
//! 53 bits: `(next_u64() >> 11) * 2^-53`, so they always lie in `[0, 1)`.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

/// Purpose tags for derived streams.
pub mod tag {
    pub const COORDS: u64 = 0x636f_6f72_6473; // "coords"
    pub const EDGES: u64 = 0x65_6467_6573; // "edges"
    pub const TRIAL: u64 = 0x74_7269_616c; // "trial"
    pub const REALIZE: u64 = 0x72_6561_6c69_7a65; // "realize"
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `seed` with a purpose `tag` into an independent child seed.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag.wrapping_add(GOLDEN)))
}

pub struct Stream {
    inner: Xoshiro256StarStar,
}

impl Stream {
    pub fn new(seed: u64, tag: u64) -> Self {
        Self { inner: Xoshiro256StarStar::seed_from_u64(derive_seed(seed, tag)) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound`, unbiased.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        let bound = bound as u64;
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return (v % bound) as usize;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
