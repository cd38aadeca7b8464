//! The seeded generator behind every randomized operation.
//!
//! ChaCha8 is a counter-based stream cipher generator with a fixed,
//! platform-independent output stream, so a seed reproduces the same
//! selections and splits on every machine.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent seed for a numbered sub-task (e.g. one class).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer over the stream index
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
