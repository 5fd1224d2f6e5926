use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExperimentSource, ReturnSource, StreamSeed, Tally};

/// Experiments per independent stream in parallel estimation. Fixed, so the
/// assignment of experiments to streams never depends on the thread count.
pub const EXPERIMENT_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Experiment {
    pub k: u64,
    pub success: bool,
    pub duration_ticks: u64,
}

/// Consumes returns until the first one at least `k` ticks after the
/// current clock; successful iff it lands exactly on `k`. The stream is left
/// at a return, where the next experiment starts afresh.
pub fn run_experiment<S: ReturnSource + ?Sized>(rt: &mut S, k: u64) -> Experiment {
    let start = rt.clock();
    loop {
        let elapsed = rt.next_return() - start;
        if elapsed >= k {
            return Experiment {
                k,
                success: elapsed == k,
                duration_ticks: elapsed,
            };
        }
    }
}

/// `⌈ln(2/δ) / (2ε²)⌉` experiments give additive error below `ε` with
/// probability at least `1 - δ` (Hoeffding).
///
/// # Panics
/// If `eps` or `delta` lies outside `(0, 1)`.
pub fn hoeffding_sample_size(eps: f64, delta: f64) -> u64 {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1), got {eps}");
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1), got {delta}");
    ((2.0 / delta).ln() / (2.0 * eps * eps)).ceil() as u64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PkEstimate {
    pub k: u64,
    pub p_hat: f64,
    pub experiments: u64,
    pub successes: u64,
    pub eps: f64,
    pub delta: f64,
    pub ticks: u64,
}

impl PkEstimate {
    fn from_counts(k: u64, eps: f64, delta: f64, experiments: u64, successes: u64, ticks: u64) -> Self {
        PkEstimate {
            k,
            p_hat: successes as f64 / experiments as f64,
            experiments,
            successes,
            eps,
            delta,
            ticks,
        }
    }
}

/// Estimates `P_k(r, r)` from one stream.
pub fn estimate_pk<S: ReturnSource + ?Sized>(rt: &mut S, k: u64, eps: f64, delta: f64) -> PkEstimate {
    let n = hoeffding_sample_size(eps, delta);
    let (mut successes, mut ticks) = (0, 0);
    for _ in 0..n {
        let e = run_experiment(rt, k);
        successes += u64::from(e.success);
        ticks += e.duration_ticks;
    }
    PkEstimate::from_counts(k, eps, delta, n, successes, ticks)
}

/// Runs exactly `experiments` experiments spread over independent streams,
/// [`EXPERIMENT_CHUNK`] per stream; stream `c` is seeded by
/// `StreamSeed::for_chunk(master, level, c)`.
pub fn run_chunked<E: ExperimentSource + ?Sized>(
    source: &E,
    master: u64,
    level: u32,
    k: u64,
    experiments: u64,
) -> Tally {
    let chunks = experiments.div_ceil(EXPERIMENT_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = EXPERIMENT_CHUNK.min(experiments - c * EXPERIMENT_CHUNK);
            source.run_experiments(StreamSeed::for_chunk(master, level, c as u32), k, count)
        })
        .reduce(Tally::default, Tally::merge)
}

/// [`estimate_pk`] with the experiments split over parallel streams. The
/// result depends only on `(master, level)`, not on scheduling.
pub fn estimate_pk_parallel<E: ExperimentSource + ?Sized>(
    source: &E,
    master: u64,
    level: u32,
    k: u64,
    eps: f64,
    delta: f64,
) -> PkEstimate {
    let n = hoeffding_sample_size(eps, delta);
    let t = run_chunked(source, master, level, k, n);
    PkEstimate::from_counts(k, eps, delta, n, t.successes, t.ticks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObserverStats {
    pub samples: u64,
    pub mean_gap: f64,
    pub mean_gap_sq: f64,
    /// Every observed return time was even.
    pub all_even: bool,
}

/// Sample moments of the first `m` return gaps and their parity.
pub fn observer_stats<S: ReturnSource + ?Sized>(rt: &mut S, m: u64) -> ObserverStats {
    assert!(m >= 1, "need at least one sample");
    let (mut sum, mut sum_sq) = (0f64, 0f64);
    let mut all_even = true;
    let mut prev = rt.clock();
    for _ in 0..m {
        let t = rt.next_return();
        let gap = (t - prev) as f64;
        prev = t;
        sum += gap;
        sum_sq += gap * gap;
        all_even &= t % 2 == 0;
    }
    ObserverStats {
        samples: m,
        mean_gap: sum / m as f64,
        mean_gap_sq: sum_sq / m as f64,
        all_even,
    }
}

/// Plug-in estimate of `H(π, r) = E(T₁²) / (2 E T₁) - 1/2`.
pub fn estimate_hitting<S: ReturnSource + ?Sized>(rt: &mut S, m: u64) -> f64 {
    let s = observer_stats(rt, m);
    s.mean_gap_sq / (2.0 * s.mean_gap) - 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_family, Family};
    use crate::walk::{LazyView, SimulatedWalk, WalkStream};
    use std::sync::Arc;

    fn edge_stream(seed: u64) -> WalkStream {
        WalkStream::new(
            Arc::new(build_family(Family::Complete, 2).unwrap()),
            StreamSeed::new(seed),
            false,
        )
    }

    #[test]
    fn sample_size_formula() {
        assert_eq!(hoeffding_sample_size(0.1, 0.05), 185);
    }

    #[test]
    fn experiments_on_an_edge() {
        let mut w = edge_stream(1);
        for _ in 0..10 {
            assert!(run_experiment(&mut w, 2).success);
            assert!(!run_experiment(&mut w, 3).success);
        }
        let e = estimate_pk(&mut w, 2, 0.1, 0.1);
        assert_eq!(e.p_hat, 1.0);
        assert_eq!(e.ticks, 2 * e.experiments);
    }

    #[test]
    fn observer_on_an_edge() {
        let mut w = edge_stream(2);
        let s = observer_stats(&mut w, 1000);
        assert_eq!((s.mean_gap, s.all_even), (2.0, true));
        assert_eq!(estimate_hitting(&mut w, 10), 0.5);
    }

    #[test]
    fn parallel_estimate_is_independent_of_thread_count() {
        let source = LazyView(SimulatedWalk::new(build_family(Family::Cycle, 5).unwrap()));
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_pk_parallel(&source, 99, 0, 3, 0.003, 0.05))
        };
        let one = run(1);
        assert!(one.experiments > 2 * EXPERIMENT_CHUNK);
        assert_eq!(one, run(3));
    }
}
