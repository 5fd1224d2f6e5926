use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact::{lazy_series, lazy_transition_series, transition_series, SeriesTable};
use crate::graph::RootedGraph;
use crate::walk::{hoeffding_sample_size, run_chunked, ExperimentSource};

/// One evaluation of `Q_k`, with its cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QEval {
    pub q: f64,
    pub experiments: u64,
    pub ticks: u64,
}

/// Supplies `Q_k ≈ q_k = P_k(r, r) - 1/n` for the lazy chain.
pub trait QOracle {
    /// `index` is distinct for every evaluation within one search, so
    /// sampled oracles can give each its own random streams.
    fn evaluate(&self, k: u64, index: u32, eps: f64, delta: f64, n: usize) -> QEval;

    /// Largest `k` the oracle can answer, if bounded.
    fn max_k(&self) -> Option<u64> {
        None
    }
}

/// Noiseless oracle backed by an exact table of `q_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactOracle {
    q: Vec<f64>,
}

impl ExactOracle {
    pub fn new(q: Vec<f64>) -> Self {
        ExactOracle { q }
    }

    fn from_table(table: &SeriesTable) -> Self {
        let q = table.q.as_ref().expect("lazy tables carry q");
        ExactOracle::new(q.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect())
    }

    /// `q_0..=q_{k_max}` of the lazy walk.
    pub fn lazy(g: &RootedGraph, k_max: u64) -> Self {
        Self::from_table(&lazy_transition_series(g, k_max as usize))
    }

    /// `q` of the lazified two-step chain `(I + M²)/2`, whose stationary
    /// mass at the root is `1/n_component`.
    pub fn lazy_every_other(g: &RootedGraph, n_component: usize, k_max: u64) -> Self {
        let k_max = k_max as usize;
        let plain = transition_series(g, 2 * k_max);
        let squared = SeriesTable {
            n: n_component,
            k_max,
            lazy: false,
            p: plain.p.into_iter().step_by(2).collect(),
            s: None,
            z: None,
            q: None,
        };
        Self::from_table(&lazy_series(&squared, k_max).expect("table has k_max + 1 terms"))
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }
}

impl QOracle for ExactOracle {
    fn evaluate(&self, k: u64, _index: u32, _eps: f64, _delta: f64, _n: usize) -> QEval {
        QEval {
            q: self.q[k as usize],
            experiments: 0,
            ticks: 0,
        }
    }

    fn max_k(&self) -> Option<u64> {
        Some(self.q.len() as u64 - 1)
    }
}

/// Estimates `Q_k = P̂_k - 1/n` from experiments, with the Hoeffding sample
/// size for the requested accuracy.
#[derive(Debug, Clone)]
pub struct SampledOracle<E> {
    source: E,
    master: u64,
}

impl<E: ExperimentSource> SampledOracle<E> {
    pub fn new(source: E, master: u64) -> Self {
        SampledOracle { source, master }
    }

    pub fn source(&self) -> &E {
        &self.source
    }
}

impl<E: ExperimentSource> QOracle for SampledOracle<E> {
    fn evaluate(&self, k: u64, index: u32, eps: f64, delta: f64, n: usize) -> QEval {
        let experiments = hoeffding_sample_size(eps, delta);
        let t = run_chunked(&self.source, self.master, index, k, experiments);
        QEval {
            q: t.successes as f64 / experiments as f64 - 1.0 / n as f64,
            experiments,
            ticks: t.ticks,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_family, Family};
    use crate::walk::{ChainView, OutcomeSampler};

    #[test]
    fn exact_lazy_four_cycle() {
        let g = build_family(Family::Cycle, 4).unwrap();
        let o = ExactOracle::lazy(&g, 12);
        // lazy C₄: eigenvalues 1, 1/2, 1/2, 0, so q_k = 2^{-k}/2 for k ≥ 1
        assert!((o.q()[10] - 2f64.powi(-11)).abs() < 1e-18);
        assert_eq!(o.max_k(), Some(12));
    }

    #[test]
    fn every_other_matches_outcome_law() {
        let g = build_family(Family::Complete, 4).unwrap();
        let o = ExactOracle::lazy_every_other(&g, 4, 20);
        let u = OutcomeSampler::new(&g, ChainView::LAZY_EVERY_OTHER).return_probabilities(21);
        for k in 0..=20 {
            assert!((o.q()[k] - (u[k] - 0.25)).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn sampled_estimate_is_close() {
        let g = build_family(Family::Cycle, 6).unwrap();
        let exact = ExactOracle::lazy(&g, 8);
        let sampled = SampledOracle::new(OutcomeSampler::new(&g, ChainView::LAZY), 11);
        let e = sampled.evaluate(8, 0, 0.002, 0.01, 6);
        assert!((e.q - exact.q()[8]).abs() < 0.002);
        assert!(e.ticks >= 8 * e.experiments);
    }
}
