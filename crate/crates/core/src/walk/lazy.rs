use super::{Coins, ReturnSource, StreamSeed};

/// Turns the returns of a simple walk into the returns of its lazy version
/// using only the return times and the clock.
///
/// Each tick of the original walk is stretched into a Geometric(1/2) number
/// of lazy ticks, during which the walker stays put. While the walker sits
/// at the root every lazy tick is a return; between two original returns
/// `g` ticks apart, the lazy clock advances by a sum of `g` geometric
/// holding times. Positions away from the root are never needed.
pub struct LazyReturns<S> {
    inner: S,
    coins: Coins,
    /// Original tick of the walker's latest arrival at the root.
    arrived_original: u64,
    /// Lazy tick of that arrival.
    arrived_lazy: u64,
    /// Holding time at the root after that arrival.
    hold: u64,
    /// Lazy returns already emitted during the current hold.
    emitted_in_hold: u64,
    last: u64,
}

impl<S: ReturnSource> LazyReturns<S> {
    /// `inner` must be positioned at the root (fresh, or just after a return).
    pub fn new(inner: S, seed: StreamSeed) -> Self {
        let mut coins = Coins::new(seed.rng());
        let hold = coins.flips_until_heads(1);
        LazyReturns {
            arrived_original: inner.clock(),
            inner,
            coins,
            arrived_lazy: 0,
            hold,
            emitted_in_hold: 0,
            last: 0,
        }
    }

    pub fn into_inner(self) -> S {
        self.inner
    }
}

impl<S: ReturnSource> ReturnSource for LazyReturns<S> {
    fn next_return(&mut self) -> u64 {
        if self.emitted_in_hold + 1 < self.hold {
            self.emitted_in_hold += 1;
            self.last = self.arrived_lazy + self.emitted_in_hold;
            return self.last;
        }
        let t = self.inner.next_return();
        let gap = t - self.arrived_original;
        // The hold at the root is the first of the `gap` holding times.
        let rest = self.coins.flips_until_heads(gap - 1);
        self.arrived_lazy += self.hold + rest;
        self.arrived_original = t;
        self.hold = self.coins.flips_until_heads(1);
        self.emitted_in_hold = 0;
        self.last = self.arrived_lazy;
        self.last
    }

    fn clock(&self) -> u64 {
        self.last
    }
}

/// The walk observed every other tick: the returns of `M²` started at the
/// root. Odd-time returns are dropped and even times halved.
pub struct EveryOther<S> {
    inner: S,
    last: u64,
}

impl<S: ReturnSource> EveryOther<S> {
    pub fn new(inner: S) -> Self {
        EveryOther { inner, last: 0 }
    }
}

impl<S: ReturnSource> ReturnSource for EveryOther<S> {
    fn next_return(&mut self) -> u64 {
        loop {
            let t = self.inner.next_return();
            if t % 2 == 0 {
                self.last = t / 2;
                return self.last;
            }
        }
    }

    fn clock(&self) -> u64 {
        self.last
    }
}
