//! Deterministic RNG substreams for Monte Carlo work units.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for sweep point `point` under `master`.
pub fn point_seed(master: u64, point: u64) -> u64 {
    splitmix64(splitmix64(master) ^ point.wrapping_mul(0xd605_bbb5_8c8a_bd3d))
}

/// Independent stream for one frame of one point.
pub fn frame_rng(point_seed: u64, frame: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed);
    rng.set_stream(frame);
    rng
}
