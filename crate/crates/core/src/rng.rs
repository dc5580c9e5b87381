//! Seed derivation and the per-trial random stream.
//!
//! Every trial owns a generator seeded by [`derive_seed`], so trials can be
//! sampled in any order or on any worker and still produce the same graphs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for edge sampling and Lanczos start vectors.
pub type TrialRng = ChaCha8Rng;

/// Name of the generator, recorded in output metadata.
pub const PRNG_NAME: &str = "chacha8(rand_chacha 0.3, seed_from_u64)";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 step: advance by the golden gamma, then apply the finalizer.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `(master_seed, n, p, trial_index)` into a 64-bit trial seed.
///
/// Inputs are absorbed one word at a time through the SplitMix64 finalizer;
/// `p` contributes its IEEE-754 bit pattern. Each absorption step is a
/// bijection of the running state, so for fixed `(master_seed, n, p)` the map
/// `trial_index -> seed` is injective.
pub fn derive_seed(master_seed: u64, n: u32, p: f64, trial_index: u64) -> u64 {
    let mut h = splitmix64(master_seed);
    h = splitmix64(h ^ u64::from(n));
    h = splitmix64(h ^ p.to_bits());
    splitmix64(h ^ trial_index)
}

pub fn trial_rng(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}
