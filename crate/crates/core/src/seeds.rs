//! Deterministic seed derivation and substream RNG construction.
//!
//! All stochastic code in the crate draws from ChaCha20 streams keyed by
//! `(seed, stream)` pairs, so any subset of work (one dataset sample, one
//! area estimate) can be regenerated independently and identically.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// RNG for substream `stream` of master seed `seed`. Distinct streams of the
/// same seed are statistically independent.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// RNG seeded directly by `seed` (stream 0).
pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Derives a child seed from `(seed, tag)` via two rounds of splitmix64.
/// Used where an API takes a single seed but must fan out to per-item seeds.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
