//! Counter-based random streams.
//!
//! Every random draw in the crate comes from a stream keyed by
//! `(seed, purpose, index)`, so the value used for sample `index` never
//! depends on which worker evaluates it or in which order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tags that keep independent consumers of the same seed apart.
pub mod purpose {
    pub const VOLUME: u64 = 0x766f_6c75;
    pub const FIBER_TRIALS: u64 = 0x6669_6272;
    pub const CHARSET: u64 = 0x6368_7273;
    pub const WORDS: u64 = 0x776f_7264;
}

#[derive(Clone, Copy, Debug)]
pub struct CounterRng {
    key: [u8; 32],
}

impl CounterRng {
    pub fn new(seed: u64, purpose: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&purpose.to_le_bytes());
        key[16..24].copy_from_slice(&0x6b65_6c6c_6572_6c61u64.to_le_bytes());
        CounterRng { key }
    }

    /// Independent stream number `index`.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        rng
    }

    /// Four uniforms in `[0, 1)` for sample `index`.
    pub fn uniform4(&self, index: u64) -> [f64; 4] {
        let mut rng = self.stream(index);
        [rng.random(), rng.random(), rng.random(), rng.random()]
    }
}
