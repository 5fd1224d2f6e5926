use std::sync::Arc;

use rand::Rng;

use super::{Coins, ReturnSource, StreamSeed};
use crate::graph::RootedGraph;

/// Tick-level simulation of the simple (or lazy) random walk started at
/// the root. The position is private; only return times leave the type.
pub struct WalkStream {
    graph: Arc<RootedGraph>,
    coins: Coins,
    lazy: bool,
    position: usize,
    tick: u64,
    last_return: u64,
}

impl WalkStream {
    pub fn new(graph: Arc<RootedGraph>, seed: StreamSeed, lazy: bool) -> Self {
        let position = graph.root();
        WalkStream {
            graph,
            coins: Coins::new(seed.rng()),
            lazy,
            position,
            tick: 0,
            last_return: 0,
        }
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy
    }

    /// Ticks simulated so far.
    pub fn ticks(&self) -> u64 {
        self.tick
    }

    #[inline]
    fn step(&mut self) {
        self.tick += 1;
        if self.lazy && self.coins.flip() {
            return;
        }
        let nbrs = self.graph.neighbors(self.position);
        let i = if nbrs.len() == 2 {
            usize::from(self.coins.flip())
        } else {
            self.coins.rng().random_range(0..nbrs.len())
        };
        self.position = nbrs[i];
    }
}

impl ReturnSource for WalkStream {
    fn next_return(&mut self) -> u64 {
        let root = self.graph.root();
        loop {
            self.step();
            if self.position == root {
                self.last_return = self.tick;
                return self.tick;
            }
        }
    }

    fn clock(&self) -> u64 {
        self.last_return
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_family, Family};

    #[test]
    fn edge_returns_every_other_tick() {
        let k2 = Arc::new(build_family(Family::Complete, 2).unwrap());
        let mut w = WalkStream::new(k2, StreamSeed::new(11), false);
        for i in 1..=50 {
            assert_eq!(w.next_return(), 2 * i);
        }
        assert_eq!(w.clock(), 100);
    }

    #[test]
    fn deterministic_per_seed() {
        let g = Arc::new(build_family(Family::Hypercube, 3).unwrap());
        let run = |seed, lazy| {
            let mut w = WalkStream::new(g.clone(), StreamSeed::new(seed), lazy);
            (0..200).map(|_| w.next_return()).collect::<Vec<_>>()
        };
        assert_eq!(run(5, true), run(5, true));
        assert_ne!(run(5, true), run(6, true));
        assert!(run(5, false).iter().all(|t| t % 2 == 0));
    }
}
