use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{evaluation_budget, gap_bounds, search_levels, search_window, GapError, GapParams, QOracle, SampledOracle};
use crate::walk::{
    hoeffding_sample_size, observer_stats, EveryOther, ExperimentSource, LazyEveryOtherView, LazyView, ReturnSource,
    StreamSeed, WalkSource,
};

/// Return gaps sampled per round when estimating `n`; doubled each round.
const NODE_COUNT_START: u64 = 1000;
const NODE_COUNT_ROUNDS: u32 = 24;
/// Plain returns inspected for the bipartiteness verdict. A non-bipartite
/// chain escapes detection only if all of them land on even ticks.
const PARITY_SAMPLES: u64 = 4096;

/// Whether the node count is supplied or estimated from return gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeCount {
    Known(usize),
    Estimate,
}

impl FromStr for NodeCount {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "estimate" {
            return Ok(NodeCount::Estimate);
        }
        s.parse()
            .map(NodeCount::Known)
            .map_err(|_| format!("expected an integer or \"estimate\", got {s:?}"))
    }
}

impl fmt::Display for NodeCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeCount::Known(n) => write!(f, "{n}"),
            NodeCount::Estimate => f.write_str("estimate"),
        }
    }
}

/// One evaluation made during the search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub k: u64,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub k_star: u64,
    #[serde(rename = "Q_k")]
    pub q_k: f64,
    #[serde(rename = "Q_k_minus_1")]
    pub q_k_minus_1: f64,
    /// `1 - Q_k^{1/k}`, the estimated gap of the lazy chain.
    pub tau_hat: f64,
    pub tau_lower: f64,
    pub tau_upper: f64,
    pub tau_log_lower: f64,
    pub tau_log_upper: f64,
    /// `2 · tau_hat`: the gap of the non-lazy chain, since lazy eigenvalues
    /// are `(1 + λ)/2`. Only as accurate as `tau_hat` itself.
    pub tau_nonlazy: f64,
    pub c: f64,
    pub eps: f64,
    pub delta: f64,
    pub n_used: usize,
    pub n_estimated: bool,
    /// Set when the graph is not known to be node-transitive; the accuracy
    /// guarantee does not apply then.
    pub heuristic: bool,
    pub k0: u64,
    pub levels: u32,
    pub eval_eps: f64,
    pub eval_delta: f64,
    pub experiments_per_eval: u64,
    pub total_experiments: u64,
    pub total_ticks: u64,
    /// Re-evaluations forced by a non-positive `Q_k` at the end.
    pub repairs: u32,
    pub trace: Vec<TraceEntry>,
}

/// Binary search for the first `k` in `[1, K₀]` with `Q_k ≤ n^{-c}`.
///
/// The interval `(lo, hi]` keeps `Q_lo > n^{-c}` (with `Q_0 = 1 - 1/n`) and
/// `hi` either evaluated at or below the threshold or still equal to `K₀`;
/// only midpoints are evaluated, so at most `⌈log₂ K₀⌉` evaluations are
/// made. A final `Q_k ≤ 0` leaves `tau_hat` undefined and is re-evaluated
/// once at twice the accuracy.
pub fn search_gap<O: QOracle + ?Sized>(
    oracle: &O,
    params: &GapParams,
    n: usize,
    n_estimated: bool,
) -> Result<GapEstimate, GapError> {
    params.validate()?;
    if n < 2 {
        return Err(GapError::InvalidParams(format!("n must be at least 2, got {n}")));
    }
    let k0 = search_window(n, params.c);
    let levels = search_levels(k0);
    if let Some(max_k) = oracle.max_k() {
        if max_k < k0 {
            return Err(GapError::InvalidParams(format!(
                "oracle answers k <= {max_k}, search needs {k0}"
            )));
        }
    }
    let (eval_eps, eval_delta) = evaluation_budget(params, n);
    let threshold = (n as f64).powf(-params.c);

    let mut trace = Vec::with_capacity(levels as usize);
    let (mut total_experiments, mut total_ticks) = (0u64, 0u64);
    let mut index = 0u32;
    let mut evaluate = |k: u64, eps: f64| -> Result<f64, GapError> {
        let e = oracle.evaluate(k, index, eps, eval_delta, n);
        index += 1;
        total_experiments += e.experiments;
        total_ticks += e.ticks;
        trace.push(TraceEntry {
            k,
            q: e.q,
            n: e.experiments,
        });
        match params.tick_cap {
            Some(cap) if total_ticks > cap => Err(GapError::BudgetOverflow { cap, used: total_ticks }),
            _ => Ok(e.q),
        }
    };

    let (mut lo, mut lo_q) = (0u64, 1.0 - 1.0 / n as f64);
    let (mut hi, mut hi_q) = (k0, None);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let q = evaluate(mid, eval_eps)?;
        if q > threshold {
            (lo, lo_q) = (mid, q);
        } else {
            (hi, hi_q) = (mid, Some(q));
        }
    }
    let Some(mut q_k) = hi_q else {
        return Err(GapError::SearchExhausted { k0 });
    };
    let mut repairs = 0;
    if q_k <= 0.0 {
        repairs += 1;
        q_k = evaluate(hi, eval_eps / 2.0)?;
        if q_k <= 0.0 || q_k > threshold {
            return Err(GapError::SearchExhausted { k0 });
        }
    }

    let bounds = gap_bounds(q_k, hi, n)?;
    Ok(GapEstimate {
        k_star: hi,
        q_k,
        q_k_minus_1: lo_q,
        tau_hat: bounds.upper,
        tau_lower: bounds.lower,
        tau_upper: bounds.upper,
        tau_log_lower: bounds.log_lower,
        tau_log_upper: bounds.log_upper,
        tau_nonlazy: 2.0 * bounds.upper,
        c: params.c,
        eps: params.eps,
        delta: params.delta,
        n_used: n,
        n_estimated,
        heuristic: false,
        k0,
        levels,
        eval_eps,
        eval_delta,
        experiments_per_eval: hoeffding_sample_size(eval_eps, eval_delta),
        total_experiments,
        total_ticks,
        repairs,
        trace,
    })
}

/// Rounds the mean return gap, doubling the sample until two consecutive
/// rounds agree. For a regular graph the mean gap is exactly `n`.
pub fn estimate_node_count<S: ReturnSource + ?Sized>(stream: &mut S) -> usize {
    let mut m = NODE_COUNT_START;
    let mut prev = observer_stats(stream, m).mean_gap.round() as usize;
    for _ in 0..NODE_COUNT_ROUNDS {
        m *= 2;
        let cur = observer_stats(stream, m).mean_gap.round() as usize;
        if cur == prev {
            break;
        }
        prev = cur;
    }
    prev.max(2)
}

/// Estimates the gap of the lazy chain from plain return streams.
pub fn estimate_gap<W: WalkSource>(
    source: &W,
    params: &GapParams,
    n: NodeCount,
    seed: u64,
) -> Result<GapEstimate, GapError> {
    estimate_gap_using(source, LazyView(source), params, n, seed)
}

/// [`estimate_gap`] with experiments on the lazy chain supplied separately
/// from the observer's plain returns (used only to estimate `n`).
pub fn estimate_gap_using<W: WalkSource, E: ExperimentSource>(
    observer: &W,
    experiments: E,
    params: &GapParams,
    n: NodeCount,
    seed: u64,
) -> Result<GapEstimate, GapError> {
    params.validate()?;
    let (n_used, n_estimated) = match n {
        NodeCount::Known(n) => (n, false),
        NodeCount::Estimate => {
            let mut plain = observer.plain(StreamSeed::auxiliary(seed, 1));
            (estimate_node_count(&mut plain), true)
        }
    };
    search_gap(&SampledOracle::new(experiments, seed), params, n_used, n_estimated)
}

/// Gap estimate for the two-step chain `M²`, and what it implies for
/// `1 - max(λ₂, |λ_n|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingGapEstimate {
    /// Search on the lazified `(I + M²)/2` restricted to the root's
    /// component.
    pub search: GapEstimate,
    /// All observed plain returns were at even times.
    pub bipartite: bool,
    /// Size of the root's component under `M²`.
    pub n_component: usize,
    /// `2 · tau_hat`, the gap of `M²` on that component.
    pub gap_m2: f64,
    /// `1 - √(1 - gap_m2)`.
    pub component_gap: f64,
    /// `1 - max(λ₂, |λ_n|)`: zero for bipartite graphs, where `λ_n = -1`,
    /// otherwise the component gap.
    pub mixing_gap: f64,
}

/// Derives the mixing-gap quantities from a search on the lazy two-step
/// chain.
pub fn mixing_from_search(search: GapEstimate, bipartite: bool) -> MixingGapEstimate {
    let gap_m2 = (2.0 * search.tau_hat).min(1.0);
    let component_gap = 1.0 - (1.0 - gap_m2).sqrt();
    MixingGapEstimate {
        bipartite,
        n_component: search.n_used,
        gap_m2,
        component_gap,
        mixing_gap: if bipartite { 0.0 } else { component_gap },
        search,
    }
}

/// Runs the gap search on the walk observed every other tick.
///
/// Parity of the plain returns decides bipartiteness. For a bipartite
/// node-transitive graph the root's `M²` component has `n/2` vertices; in
/// estimate mode its size is the rounded mean gap of the two-step returns.
pub fn estimate_mixing_gap<W: WalkSource>(
    source: &W,
    params: &GapParams,
    n: NodeCount,
    seed: u64,
) -> Result<MixingGapEstimate, GapError> {
    estimate_mixing_gap_using(source, LazyEveryOtherView(source), params, n, seed)
}

/// [`estimate_mixing_gap`] with experiments on the lazy two-step chain
/// supplied separately from the observer's plain returns.
pub fn estimate_mixing_gap_using<W: WalkSource, E: ExperimentSource>(
    observer: &W,
    experiments: E,
    params: &GapParams,
    n: NodeCount,
    seed: u64,
) -> Result<MixingGapEstimate, GapError> {
    params.validate()?;
    let mut plain = observer.plain(StreamSeed::auxiliary(seed, 1));
    let bipartite = observer_stats(&mut plain, PARITY_SAMPLES).all_even;
    let (n_component, n_estimated) = match n {
        NodeCount::Known(n) if bipartite => (n / 2, false),
        NodeCount::Known(n) => (n, false),
        NodeCount::Estimate => {
            let mut two_step = EveryOther::new(observer.plain(StreamSeed::auxiliary(seed, 2)));
            (estimate_node_count(&mut two_step), true)
        }
    };
    let search = search_gap(&SampledOracle::new(experiments, seed), params, n_component, n_estimated)?;
    Ok(mixing_from_search(search, bipartite))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap::ExactOracle;
    use crate::graph::{build_family, Family};
    use crate::walk::{ChainView, OutcomeSampler, SimulatedWalk};

    #[test]
    fn node_count_parses() {
        assert_eq!("estimate".parse(), Ok(NodeCount::Estimate));
        assert_eq!("12".parse(), Ok(NodeCount::Known(12)));
        assert!("x".parse::<NodeCount>().is_err());
    }

    #[test]
    fn noiseless_search_finds_first_crossing() {
        let g = build_family(Family::Cycle, 8).unwrap();
        let params = GapParams::new(2.0, 0.25, 0.1);
        let oracle = ExactOracle::lazy(&g, 400);
        let est = search_gap(&oracle, &params, 8, false).unwrap();
        let thr = 1.0 / 64.0;
        let q = oracle.q();
        assert!(q[est.k_star as usize] <= thr && q[est.k_star as usize - 1] > thr);
        assert!(est.trace.len() as u32 <= est.levels);
        assert_eq!(est.total_experiments, 0);
        let tau = (1.0 - (std::f64::consts::PI / 4.0).cos()) / 2.0;
        assert!(est.tau_lower <= tau && tau <= est.tau_upper);
    }

    #[test]
    fn oracle_too_short_is_rejected() {
        let g = build_family(Family::Cycle, 8).unwrap();
        let oracle = ExactOracle::lazy(&g, 50);
        let r = search_gap(&oracle, &GapParams::new(2.0, 0.25, 0.1), 8, false);
        assert!(matches!(r, Err(GapError::InvalidParams(_))));
    }

    #[test]
    fn tick_cap_aborts() {
        let g = build_family(Family::Complete, 4).unwrap();
        let mut params = GapParams::new(2.0, 0.25, 0.1);
        params.tick_cap = Some(1000);
        let oracle = SampledOracle::new(OutcomeSampler::new(&g, ChainView::LAZY), 1);
        assert!(matches!(
            search_gap(&oracle, &params, 4, false),
            Err(GapError::BudgetOverflow { cap: 1000, .. })
        ));
    }

    #[test]
    fn sampled_search_is_deterministic() {
        let g = build_family(Family::Complete, 4).unwrap();
        let params = GapParams::new(2.0, 0.25, 0.1);
        let oracle = SampledOracle::new(OutcomeSampler::new(&g, ChainView::LAZY), 3);
        let a = search_gap(&oracle, &params, 4, false).unwrap();
        let b = search_gap(&oracle, &params, 4, false).unwrap();
        assert_eq!(a, b);
        assert!((a.tau_hat / (2.0 / 3.0) - 1.0).abs() < 0.25);
    }

    #[test]
    fn node_count_of_a_cycle() {
        let w = SimulatedWalk::new(build_family(Family::Cycle, 6).unwrap());
        let mut s = w.plain(StreamSeed::new(8));
        assert_eq!(estimate_node_count(&mut s), 6);
    }
}
