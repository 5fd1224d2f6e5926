//! Spectral-gap estimation from return statistics.
//!
//! For the lazy walk on a node-transitive graph, `q_k = P_k(r, r) - 1/n`
//! decays like `λ₂^k`. Once `q_k` falls below `n^{-c}`, `1 - q_k^{1/k}`
//! pins down `τ = 1 - λ₂` to within a constant factor. The estimator finds
//! such a `k` by binary search over noisy estimates of `q_k`.

mod audit;
mod oracle;
mod peel;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use audit::{audit_budget, sandwich_audit, BudgetAudit, SandwichAudit};
pub use oracle::{ExactOracle, QEval, QOracle, SampledOracle};
pub use peel::{peel_diagnostic, PeelStep};
pub use search::{
    estimate_gap, estimate_gap_using, estimate_mixing_gap, estimate_mixing_gap_using, estimate_node_count,
    mixing_from_search, search_gap, GapEstimate, MixingGapEstimate, NodeCount, TraceEntry,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GapError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("outside the domain of the bounds: {0}")]
    DomainError(String),
    #[error("no threshold crossing found in [1, {k0}]; is the graph node-transitive?")]
    SearchExhausted { k0: u64 },
    #[error("tick budget of {cap} exceeded after {used} ticks")]
    BudgetOverflow { cap: u64, used: u64 },
}

/// Accuracy and cost settings of one estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapParams {
    /// Threshold exponent: the search looks for `q_k ≤ n^{-c}`.
    pub c: f64,
    /// Target relative accuracy of `tau_hat`.
    pub eps: f64,
    /// Overall failure probability.
    pub delta: f64,
    /// Abort with [`GapError::BudgetOverflow`] once this many walk ticks
    /// have been consumed.
    pub tick_cap: Option<u64>,
}

impl GapParams {
    pub fn new(c: f64, eps: f64, delta: f64) -> Self {
        GapParams {
            c,
            eps,
            delta,
            tick_cap: None,
        }
    }

    pub fn validate(&self) -> Result<(), GapError> {
        if !(self.c > 1.0 && self.c.is_finite()) {
            return Err(GapError::InvalidParams(format!("c must exceed 1, got {}", self.c)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(GapError::InvalidParams(format!(
                "eps must lie in (0, 1), got {}",
                self.eps
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(GapError::InvalidParams(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

/// Search window `K₀ = ⌈(c + 1) n² ln n⌉`.
pub fn search_window(n: usize, c: f64) -> u64 {
    let n = n as f64;
    ((c + 1.0) * n * n * n.ln()).ceil() as u64
}

/// Number of binary-search levels, `⌈log₂ K₀⌉`.
pub fn search_levels(k0: u64) -> u32 {
    (k0.max(2) - 1).ilog2() + 1
}

/// Per-evaluation accuracy `ε / (8 n^c)` and failure probability
/// `δ / ⌈log₂ K₀⌉`.
pub fn evaluation_budget(params: &GapParams, n: usize) -> (f64, f64) {
    let k0 = search_window(n, params.c);
    let levels = search_levels(k0);
    (
        params.eps / (8.0 * (n as f64).powf(params.c)),
        params.delta / f64::from(levels),
    )
}

/// Both brackets on `τ` implied by one value of `q_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapBounds {
    /// `(1 + ln n / ln q_k)(1 - q_k^{1/k})`.
    pub lower: f64,
    /// `1 - q_k^{1/k}`.
    pub upper: f64,
    /// `x / (1 + x)` with `x = ln(1/(n q_k)) / k`; zero when `n q_k ≥ 1`.
    pub log_lower: f64,
    /// `ln(n / q_k) / k`.
    pub log_upper: f64,
}

/// Brackets on the gap of a lazy node-transitive chain from `q_k`.
pub fn gap_bounds(q_k: f64, k: u64, n: usize) -> Result<GapBounds, GapError> {
    if !(q_k > 0.0 && q_k < 1.0) {
        return Err(GapError::DomainError(format!("q_k must lie in (0, 1), got {q_k}")));
    }
    if k == 0 {
        return Err(GapError::DomainError("k must be at least 1".into()));
    }
    if n < 2 {
        return Err(GapError::DomainError(format!("n must be at least 2, got {n}")));
    }
    let (k, nf) = (k as f64, n as f64);
    let upper = 1.0 - q_k.powf(1.0 / k);
    let lower = (1.0 + nf.ln() / q_k.ln()) * upper;
    let x = (1.0 / (nf * q_k)).ln() / k;
    let log_lower = if x > 0.0 { x / (1.0 + x) } else { 0.0 };
    let log_upper = (nf / q_k).ln() / k;
    Ok(GapBounds {
        lower,
        upper,
        log_lower,
        log_upper,
    })
}
