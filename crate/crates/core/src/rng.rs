//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a 64-bit seed. Child seeds
//! are derived by hashing `(parent, domain, index)` through the SplitMix64
//! finalizer, so a single trial of a sweep can be regenerated on its own
//! from the master seed without replaying any other trial.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tag for input-bit streams.
pub const INPUT_DOMAIN: u64 = 0x696e_7075_7462_6974;
/// Domain tag for channel-noise streams.
pub const NOISE_DOMAIN: u64 = 0x6e6f_6973_6567_6175;
/// Domain tag for per-trial seeds of a sweep.
pub const TRIAL_DOMAIN: u64 = 0x7472_6961_6c73_6565;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(parent: u64, domain: u64, index: u64) -> u64 {
    let a = mix64(parent.wrapping_add(GOLDEN));
    let b = mix64(a ^ domain.wrapping_mul(GOLDEN));
    mix64(
        b ^ index
            .wrapping_add(GOLDEN)
            .wrapping_mul(0xd6e8_feb8_6659_fd93),
    )
}

/// Input and noise seeds for one transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedPair {
    pub input: u64,
    pub noise: u64,
}

impl SeedPair {
    /// Splits a master seed into independent input and noise seeds.
    pub fn from_master(master: u64) -> Self {
        SeedPair {
            input: derive_seed(master, INPUT_DOMAIN, 0),
            noise: derive_seed(master, NOISE_DOMAIN, 0),
        }
    }
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
