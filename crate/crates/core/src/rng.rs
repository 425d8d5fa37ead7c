//! Deterministic per-trial random substreams.
//!
//! Every Monte Carlo trial draws from its own ChaCha8 stream. The 256-bit key
//! is expanded with SplitMix64 from `(root seed, purpose, interferer count)`
//! and the trial index selects the ChaCha stream id, so a trial's numbers
//! depend only on those four values. Scheduling, worker count and the set of
//! other methods in a run never change what a trial sees.
//!
//! Geometry and fading use different purposes. Estimators run with the same
//! root seed and interferer count therefore share the geometry of trial `m`
//! while fading draws stay independent of it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a substream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    Geometry,
    Fading,
    TailError,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Geometry => 0x67656f6d, // "geom"
            Purpose::Fading => 0x66616465,   // "fade"
            Purpose::TailError => 0x74657272, // "terr"
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Key material for a family of trial streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamFamily {
    key: [u8; 32],
}

impl StreamFamily {
    pub fn new(seed: u64, purpose: Purpose, interferers: usize) -> Self {
        let mut state = splitmix64(seed ^ splitmix64(purpose.tag()));
        state = splitmix64(state ^ interferers as u64);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        Self { key }
    }

    /// Generator for one trial.
    pub fn trial(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        rng
    }
}
