//! Reproducible random streams.
//!
//! Every random decision draws from a ChaCha8 stream selected by a
//! [`StreamKey`]. ChaCha is counter based, so the stream for
//! `(seed, phase, player, round)` is independent of the order in which other
//! streams are consumed. Per-player sampling can therefore run on any thread
//! and still reproduce bit for bit.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// What a stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Phase {
    Learn = 0,
    Test = 1,
    Holdout = 2,
    Instance = 3,
    Partition = 4,
    Trial = 5,
}

/// Player index used for streams that are not tied to a single player
/// (e.g. the mixture draw of a round).
pub const ALL_PLAYERS: u32 = (1 << 20) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub phase: Phase,
    pub player: u32,
    pub round: u64,
}

impl StreamKey {
    pub fn new(phase: Phase, player: u32, round: u64) -> Self {
        StreamKey {
            phase,
            player,
            round,
        }
    }

    /// Packs the key into the 64-bit ChaCha stream id:
    /// 4 bits phase | 20 bits player | 40 bits round.
    pub fn stream_id(&self) -> u64 {
        debug_assert!(self.player <= ALL_PLAYERS);
        debug_assert!(self.round < (1 << 40));
        ((self.phase as u64) << 60) | ((self.player as u64) << 40) | (self.round & ((1 << 40) - 1))
    }
}

pub fn stream(seed: u64, key: StreamKey) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key.stream_id());
    rng
}

/// Seed for the `index`-th independent trial under `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    stream(base, StreamKey::new(Phase::Trial, 0, index)).next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_key_same_sequence() {
        let key = StreamKey::new(Phase::Test, 3, 17);
        let a: Vec<u64> = stream(9, key).random_iter().take(8).collect();
        let b: Vec<u64> = stream(9, key).random_iter().take(8).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn keys_select_distinct_streams() {
        let a: u64 = stream(9, StreamKey::new(Phase::Test, 3, 17)).random();
        let b: u64 = stream(9, StreamKey::new(Phase::Test, 4, 17)).random();
        let c: u64 = stream(9, StreamKey::new(Phase::Learn, 3, 17)).random();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
    }
}
