//! Counter-keyed seed derivation.
//!
//! Every unit of work (a path simulation or one shuffle of one path) gets a
//! seed that depends only on `(master_seed, path_index, stream)`, so any
//! subset of an ensemble can be recomputed in isolation and the results do
//! not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream used for simulating a path; shuffle `s` uses stream `s + 1`.
pub const SIMULATION_STREAM: u64 = 0;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master_seed: u64, path_index: u64, stream: u64) -> u64 {
    let a = splitmix64(master_seed);
    let b = splitmix64(a ^ path_index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    splitmix64(b ^ stream.wrapping_mul(0x8CB9_2BA7_2F3D_8DD7))
}

pub fn rng_for(master_seed: u64, path_index: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master_seed, path_index, stream))
}

pub fn shuffle_stream(shuffle_index: usize) -> u64 {
    shuffle_index as u64 + 1
}
