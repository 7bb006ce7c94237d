//! Deterministic seed derivation.
//!
//! Every stochastic component draws from a ChaCha stream seeded through
//! [`derive_seed`], so a run is a pure function of its master seed: trial
//! streams are derived from `(master_seed, trial_index)` and component
//! streams within one trial from `(trial_seed, component_tag)`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; decorrelates nearby seed/index pairs.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent child seed from a parent seed and a stream index.
pub fn derive_seed(parent: u64, stream: u64) -> u64 {
    splitmix64(parent ^ splitmix64(stream.wrapping_add(1)))
}

/// ChaCha generator for the given derived stream.
pub fn stream_rng(parent: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(parent, stream))
}

/// Component tags for synthesis sub-streams. Keeping the tags fixed makes
/// each component's draw independent of the order the others are sampled.
pub mod component {
    pub const NOISE: u64 = 0x01;
    pub const BITS: u64 = 0x02;
    pub const DYNAMICS: u64 = 0x03;
    pub const ATTACKER: u64 = 0x04;
    pub const RIPPLE: u64 = 0x05;
    pub const PROXIMITY: u64 = 0x06;
}
