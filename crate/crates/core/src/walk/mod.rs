//! Seeded random walks as seen by an observer at the root.
//!
//! Every walk is exposed only through [`ReturnSource`]: the times at which
//! the walker is at the root. Estimators are generic over that trait, so
//! nothing downstream can look at the walker's position elsewhere.

mod estimate;
mod experiments;
mod lazy;
mod renewal;
mod source;
pub mod stats;
mod stream;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use estimate::{
    estimate_hitting, estimate_pk, estimate_pk_parallel, hoeffding_sample_size, observer_stats, run_chunked,
    run_experiment, Experiment, ObserverStats, PkEstimate, EXPERIMENT_CHUNK,
};
pub use experiments::{tally_stream, ExperimentSource, LazyEveryOtherView, LazyView, OutcomeSampler, Tally};
pub use lazy::{EveryOther, LazyReturns};
pub use renewal::{ChainView, GapSampler, RenewalStream};
pub use source::{RenewalWalk, SimulatedWalk, WalkSource};
pub use stream::WalkStream;

/// The observer's interface: successive root-visit times of one walk.
pub trait ReturnSource {
    /// Absolute tick of the next visit to the root; strictly increasing.
    fn next_return(&mut self) -> u64;

    /// Tick of the most recently reported return (0 before the first).
    fn clock(&self) -> u64;
}

impl<S: ReturnSource + ?Sized> ReturnSource for &mut S {
    fn next_return(&mut self) -> u64 {
        (**self).next_return()
    }

    fn clock(&self) -> u64 {
        (**self).clock()
    }
}

impl<S: ReturnSource + ?Sized> ReturnSource for Box<S> {
    fn next_return(&mut self) -> u64 {
        (**self).next_return()
    }

    fn clock(&self) -> u64 {
        (**self).clock()
    }
}

/// A [`ReturnSource`] viewed as the infinite sequence `T₁ < T₂ < …`.
pub struct ReturnTimes<S>(pub S);

impl<S: ReturnSource> Iterator for ReturnTimes<S> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        Some(self.0.next_return())
    }
}

/// Addresses one independent ChaCha stream: all randomness in a run is
/// drawn from `(master, stream)` pairs, so results do not depend on how
/// work is scheduled across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamSeed {
    pub master: u64,
    pub stream: u64,
}

impl StreamSeed {
    pub fn new(master: u64) -> Self {
        StreamSeed { master, stream: 0 }
    }

    /// Stream for chunk `chunk` of search level `level`.
    pub fn for_chunk(master: u64, level: u32, chunk: u32) -> Self {
        StreamSeed {
            master,
            stream: (u64::from(level) + 1) << 40 | u64::from(chunk) << 8,
        }
    }

    /// Stream for auxiliary consumers outside the search levels (node
    /// count estimation, parity checks), numbered by `tag`.
    pub fn auxiliary(master: u64, tag: u32) -> Self {
        StreamSeed {
            master,
            stream: u64::from(tag) << 8,
        }
    }

    /// A sibling stream for an auxiliary consumer (a lazifier, say).
    pub fn role(self, role: u8) -> Self {
        StreamSeed {
            master: self.master,
            stream: self.stream | u64::from(role),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// Fair coin flips served from a buffered 64-bit word.
pub(crate) struct Coins {
    rng: ChaCha8Rng,
    word: u64,
    left: u32,
}

impl Coins {
    pub(crate) fn new(rng: ChaCha8Rng) -> Self {
        Coins { rng, word: 0, left: 0 }
    }

    pub(crate) fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    #[inline]
    pub(crate) fn flip(&mut self) -> bool {
        if self.left == 0 {
            self.word = rand::RngCore::next_u64(&mut self.rng);
            self.left = 64;
        }
        let bit = self.word & 1 == 1;
        self.word >>= 1;
        self.left -= 1;
        bit
    }

    /// Number of flips up to and including the `heads`-th head, i.e. a sum
    /// of `heads` independent Geometric(1/2) variables on `{1, 2, …}`.
    pub(crate) fn flips_until_heads(&mut self, mut heads: u64) -> u64 {
        let mut flips = 0u64;
        while heads > 0 {
            if self.left == 0 {
                self.word = rand::RngCore::next_u64(&mut self.rng);
                self.left = 64;
            }
            // Only the low `left` bits of the buffer are unused.
            let avail = if self.left == 64 {
                self.word
            } else {
                self.word & ((1u64 << self.left) - 1)
            };
            let ones = u64::from(avail.count_ones());
            if ones < heads {
                heads -= ones;
                flips += u64::from(self.left);
                self.left = 0;
                continue;
            }
            let mut w = avail;
            for _ in 1..heads {
                w &= w - 1;
            }
            let pos = w.trailing_zeros() + 1;
            flips += u64::from(pos);
            self.word = if pos == 64 { 0 } else { self.word >> pos };
            self.left -= pos;
            heads = 0;
        }
        flips
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_streams_are_distinct() {
        let a = StreamSeed::for_chunk(7, 0, 0);
        let b = StreamSeed::for_chunk(7, 0, 1);
        let c = StreamSeed::for_chunk(7, 1, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(a.role(1), a);
        assert_ne!(StreamSeed::auxiliary(7, 0), a);
        assert_ne!(StreamSeed::auxiliary(7, 1), StreamSeed::auxiliary(7, 2));
        use rand::RngCore;
        assert_ne!(a.rng().next_u64(), b.rng().next_u64());
        assert_eq!(a.rng().next_u64(), a.rng().next_u64());
    }

    #[test]
    fn flips_until_heads_matches_single_flips() {
        // Same bit stream consumed two ways gives the same counts.
        let seed = StreamSeed::new(3);
        let mut batched = Coins::new(seed.rng());
        let mut single = Coins::new(seed.rng());
        for heads in [1u64, 5, 64, 3, 130, 1, 1, 17] {
            let mut flips = 0;
            let mut seen = 0;
            while seen < heads {
                flips += 1;
                if single.flip() {
                    seen += 1;
                }
            }
            assert_eq!(batched.flips_until_heads(heads), flips, "heads = {heads}");
        }
    }
}
