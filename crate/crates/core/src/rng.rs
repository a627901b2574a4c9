//! Seed derivation and random streams.
//!
//! Every random quantity is drawn from a ChaCha8 generator keyed by a 64-bit
//! seed plus a stream number:
//!
//! * arrivals of class `j` on a path use stream `j` of the path seed;
//! * thinning coin flips of a policy use stream `THINNING_STREAM | policy_id`
//!   of the same path seed.
//!
//! So every policy sees the same arrivals on a given path (common random
//! numbers) while drawing its accept/reject coins from its own stream, and
//! nothing depends on execution order or thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const THINNING_STREAM: u64 = 1 << 62;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for path `path_index` of sweep point `sweep_index`.
pub fn path_seed(base_seed: u64, sweep_index: u64, path_index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base_seed) ^ sweep_index) ^ path_index)
}

pub(crate) fn arrival_rng(path_seed: u64, class: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(path_seed);
    rng.set_stream(class as u64);
    rng
}

/// Uniform draws for accept/reject decisions of one policy on one path.
#[derive(Debug, Clone)]
pub struct ThinningStream {
    rng: ChaCha8Rng,
}

impl ThinningStream {
    pub fn new(path_seed: u64, policy_id: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(path_seed);
        rng.set_stream(THINNING_STREAM | u64::from(policy_id));
        Self { rng }
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}
