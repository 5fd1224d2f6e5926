use std::sync::Arc;

use super::{GapSampler, RenewalStream, ReturnSource, StreamSeed, WalkStream};
use crate::graph::RootedGraph;

/// Produces independent non-lazy return streams, one per seed. Estimators
/// build lazy and every-other views on top of these, from return times
/// alone.
pub trait WalkSource: Sync {
    type Stream: ReturnSource + Send;

    fn plain(&self, seed: StreamSeed) -> Self::Stream;
}

impl<W: WalkSource + ?Sized> WalkSource for &W {
    type Stream = W::Stream;

    fn plain(&self, seed: StreamSeed) -> W::Stream {
        (**self).plain(seed)
    }
}

/// Tick-by-tick simulation of the walk.
#[derive(Debug, Clone)]
pub struct SimulatedWalk {
    graph: Arc<RootedGraph>,
}

impl SimulatedWalk {
    pub fn new(graph: RootedGraph) -> Self {
        SimulatedWalk { graph: Arc::new(graph) }
    }

    pub fn graph(&self) -> &RootedGraph {
        &self.graph
    }
}

impl WalkSource for SimulatedWalk {
    type Stream = WalkStream;

    fn plain(&self, seed: StreamSeed) -> WalkStream {
        WalkStream::new(self.graph.clone(), seed, false)
    }
}

/// Returns drawn as a renewal process from the walk's first-return law.
/// Much cheaper than tick-level simulation when returns are rare relative
/// to ticks, and equal in distribution.
#[derive(Debug, Clone)]
pub struct RenewalWalk {
    sampler: Arc<GapSampler>,
}

impl RenewalWalk {
    pub fn new(graph: &RootedGraph) -> Self {
        RenewalWalk {
            sampler: Arc::new(GapSampler::new(graph, false)),
        }
    }

    pub fn sampler(&self) -> &GapSampler {
        &self.sampler
    }
}

impl WalkSource for RenewalWalk {
    type Stream = RenewalStream;

    fn plain(&self, seed: StreamSeed) -> RenewalStream {
        RenewalStream::new(self.sampler.clone(), seed)
    }
}
