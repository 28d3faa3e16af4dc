//! Stable seed derivation.
//!
//! Every random stream in the crate is a [`ChaCha8Rng`] seeded from a `u64`
//! obtained by mixing a parent seed with a stream label. The mixing is a
//! fixed function (SplitMix64 finalizer), so derived seeds are identical
//! across platforms, releases and thread schedules.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child stream `stream` of `parent`.
pub fn derive(parent: u64, stream: u64) -> u64 {
    splitmix64(parent ^ splitmix64(stream.wrapping_mul(GOLDEN)))
}

/// Folds a sequence of labels into `parent`, one [`derive`] per label.
pub fn derive_path(parent: u64, path: &[u64]) -> u64 {
    path.iter().fold(parent, |acc, &s| derive(acc, s))
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream labels used by the data generators.
pub(crate) mod streams {
    pub const INPUT: u64 = 1;
    pub const PROCESS_NOISE: u64 = 2;
    pub const CELL: u64 = 3;
    pub const FEATURES: u64 = 4;
    pub const ENSEMBLE: u64 = 5;
    pub const FOREST: u64 = 6;
    pub const TRAIN_DATA: u64 = 7;
    pub const TEST_DATA: u64 = 8;
}
