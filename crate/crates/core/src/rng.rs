//! Named random streams derived from one user seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the stream `name` under the root `seed`.
pub fn stream_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a over the name, then mixed with the root.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(seed ^ splitmix64(h))
}

/// `index`-th child seed of `seed`, for per-sample or per-row seeding.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(splitmix64(index.wrapping_add(1))))
}

pub fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, name))
}
