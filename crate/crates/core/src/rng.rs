//! Seeded random streams.
//!
//! Every independent unit of work (a bootstrap draw, a backtest origin, a
//! simulated path) gets its own ChaCha stream selected by a counter, so the
//! values it sees do not depend on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Salts that keep streams of different consumers apart under one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Simulation = 0x5349_4d00,
    Bootstrap = 0x424f_4f54,
    Signs = 0x5349_474e,
    Continuation = 0x434f_4e54,
    Backtest = 0x4241_434b,
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `(seed, purpose, index)`.
pub fn derive_seed(seed: u64, purpose: Purpose, index: u64) -> u64 {
    mix(mix(seed ^ purpose as u64).wrapping_add(index))
}

/// Stream number `stream` of the generator keyed by `(seed, purpose)`.
pub fn substream(seed: u64, purpose: Purpose, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed ^ purpose as u64));
    rng.set_stream(stream);
    rng
}
