use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::renewal::{ChainView, TailSampler};
use super::{run_experiment, EveryOther, GapSampler, LazyReturns, ReturnSource, StreamSeed, WalkSource};
use crate::graph::RootedGraph;

/// Outcome counts of a batch of experiments.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub experiments: u64,
    pub successes: u64,
    pub ticks: u64,
}

impl Tally {
    pub fn merge(self, other: Tally) -> Tally {
        Tally {
            experiments: self.experiments + other.experiments,
            successes: self.successes + other.successes,
            ticks: self.ticks + other.ticks,
        }
    }

    pub fn record(&mut self, success: bool, ticks: u64) {
        self.experiments += 1;
        self.successes += u64::from(success);
        self.ticks += ticks;
    }
}

/// Runs batches of independent experiments on one chain, each batch on its
/// own seeded stream.
pub trait ExperimentSource: Sync {
    fn run_experiments(&self, seed: StreamSeed, k: u64, count: u64) -> Tally;
}

impl<E: ExperimentSource + ?Sized> ExperimentSource for &E {
    fn run_experiments(&self, seed: StreamSeed, k: u64, count: u64) -> Tally {
        (**self).run_experiments(seed, k, count)
    }
}

/// Runs `count` consecutive experiments on one return stream.
pub fn tally_stream<S: ReturnSource + ?Sized>(stream: &mut S, k: u64, count: u64) -> Tally {
    let mut t = Tally::default();
    for _ in 0..count {
        let e = run_experiment(stream, k);
        t.record(e.success, e.duration_ticks);
    }
    t
}

/// Experiments on the lazy chain, lazifying the plain returns of `W`.
#[derive(Debug, Clone)]
pub struct LazyView<W>(pub W);

impl<W: WalkSource> ExperimentSource for LazyView<W> {
    fn run_experiments(&self, seed: StreamSeed, k: u64, count: u64) -> Tally {
        let mut s = LazyReturns::new(self.0.plain(seed), seed.role(1));
        tally_stream(&mut s, k, count)
    }
}

/// Experiments on the lazified chain `(I + M²)/2`, built from the plain
/// returns of `W` observed every other tick.
#[derive(Debug, Clone)]
pub struct LazyEveryOtherView<W>(pub W);

impl<W: WalkSource> ExperimentSource for LazyEveryOtherView<W> {
    fn run_experiments(&self, seed: StreamSeed, k: u64, count: u64) -> Tally {
        let mut s = LazyReturns::new(EveryOther::new(self.0.plain(seed)), seed.role(1));
        tally_stream(&mut s, k, count)
    }
}

/// Experiments drawn directly from their exact outcome law.
///
/// An experiment started at a return ends at the first return `D ≥ k`, so
/// `P(D > k + i) = Σ_{m<k} u_m z_{k+i-m}` with `u` the renewal (return)
/// probabilities and `z` the first-return survival. One draw per experiment
/// replaces the whole run of returns; the law is identical.
#[derive(Debug)]
pub struct OutcomeSampler {
    view: ChainView,
    survival: Vec<f64>,
    tables: Mutex<HashMap<u64, Arc<TailSampler>>>,
}

impl OutcomeSampler {
    pub fn new(g: &RootedGraph, view: ChainView) -> Self {
        Self::from_gaps(&GapSampler::for_view(g, view))
    }

    pub fn from_gaps(gaps: &GapSampler) -> Self {
        OutcomeSampler {
            view: gaps.view(),
            survival: gaps.survival().to_vec(),
            tables: Mutex::new(HashMap::new()),
        }
    }

    pub fn view(&self) -> ChainView {
        self.view
    }

    /// Return probabilities `u_0 = 1, u_1, …, u_{len-1}` of the renewal
    /// process.
    pub fn return_probabilities(&self, len: usize) -> Vec<f64> {
        let f: Vec<f64> = self.survival.windows(2).map(|w| w[0] - w[1]).collect();
        let mut u = vec![0.0; len];
        if len > 0 {
            u[0] = 1.0;
        }
        for m in 1..len {
            u[m] = (1..=m.min(f.len())).map(|i| f[i - 1] * u[m - i]).sum();
        }
        u
    }

    fn table(&self, k: u64) -> Arc<TailSampler> {
        if let Some(t) = self.tables.lock().expect("table cache poisoned").get(&k) {
            return t.clone();
        }
        let k = k as usize;
        let u = self.return_probabilities(k);
        let z = |j: usize| self.survival.get(j).copied().unwrap_or(0.0);
        let tail: Vec<f64> = (0..self.survival.len())
            .map(|i| (0..k).map(|m| u[m] * z(k + i - m)).sum())
            .collect();
        let table = Arc::new(TailSampler::new(tail));
        self.tables
            .lock()
            .expect("table cache poisoned")
            .insert(k as u64, table.clone());
        table
    }
}

impl ExperimentSource for OutcomeSampler {
    fn run_experiments(&self, seed: StreamSeed, k: u64, count: u64) -> Tally {
        assert!(k >= 1, "experiments need k >= 1");
        let table = self.table(k);
        let mut rng = seed.rng();
        let mut t = Tally::default();
        for _ in 0..count {
            let i = table.sample(&mut rng) as u64;
            t.record(i == 0, k + i);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{lazy_transition_series, return_gen_fun};
    use crate::graph::{build_family, Family};
    use crate::walk::SimulatedWalk;
    use num_traits::ToPrimitive;

    #[test]
    fn return_probabilities_match_exact_lazy_series() {
        let g = build_family(Family::Cycle, 5).unwrap();
        let exact = lazy_transition_series(&g, 30).p;
        let u = OutcomeSampler::new(&g, ChainView::LAZY).return_probabilities(31);
        for (k, p) in exact.iter().enumerate() {
            assert!((u[k] - p.to_f64().unwrap()).abs() < 1e-13, "k={k}");
        }
        let f = return_gen_fun(&g).every_other().lazy().unwrap();
        let exact = f.series(20);
        let u = OutcomeSampler::new(&g, ChainView::LAZY_EVERY_OTHER).return_probabilities(20);
        for (k, p) in exact.iter().enumerate() {
            assert!((u[k] - p.to_f64().unwrap()).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn outcome_success_rate_is_the_return_probability() {
        let g = build_family(Family::Cycle, 6).unwrap();
        let s = OutcomeSampler::new(&g, ChainView::LAZY);
        let k = 7;
        let p = s.return_probabilities(k as usize + 1)[k as usize];
        let n = 400_000;
        let t = s.run_experiments(StreamSeed::new(5), k, n);
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((t.successes as f64 / n as f64 - p).abs() < 4.0 * sigma);
    }

    #[test]
    fn outcome_durations_match_simulated_experiments() {
        // mean experiment duration from the outcome law versus tick-level runs
        let g = build_family(Family::Complete, 4).unwrap();
        let k = 5;
        let n = 200_000;
        let exact = OutcomeSampler::new(&g, ChainView::LAZY).run_experiments(StreamSeed::new(1), k, n);
        let sim = LazyView(SimulatedWalk::new(g)).run_experiments(StreamSeed::new(2), k, n);
        let (a, b) = (exact.ticks as f64 / n as f64, sim.ticks as f64 / n as f64);
        assert!((a - b).abs() / a < 0.01, "{a} vs {b}");
    }
}
