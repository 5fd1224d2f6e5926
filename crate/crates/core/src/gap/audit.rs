use serde::{Deserialize, Serialize};

use super::{search_levels, search_window, GapEstimate, GapParams};
use crate::walk::hoeffding_sample_size;

/// Cost of a finished search against the budget formula
/// `⌈log₂ K₀⌉ · N(ε/(8n^c), δ/⌈log₂ K₀⌉)`, recomputed from the parameters
/// alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetAudit {
    pub k0: u64,
    pub levels: u32,
    pub experiments_per_eval: u64,
    pub budget: u64,
    pub total_experiments: u64,
    pub within_budget: bool,
    pub k_star_in_window: bool,
}

impl BudgetAudit {
    pub fn passed(&self) -> bool {
        self.within_budget && self.k_star_in_window
    }
}

pub fn audit_budget(est: &GapEstimate) -> BudgetAudit {
    let n = est.n_used as f64;
    let k0 = search_window(est.n_used, est.c);
    let levels = search_levels(k0);
    let per_eval = hoeffding_sample_size(est.eps / (8.0 * n.powf(est.c)), est.delta / f64::from(levels));
    let budget = u64::from(levels) * per_eval;
    BudgetAudit {
        k0,
        levels,
        experiments_per_eval: per_eval,
        budget,
        total_experiments: est.total_experiments,
        within_budget: est.total_experiments <= budget,
        k_star_in_window: (1..=k0).contains(&est.k_star),
    }
}

/// Worst case of the estimator over all admissible noise, from exact `q`.
///
/// With every evaluation off by at most `η = ε/(8n^c)`, the search can
/// stop at any `k` with `q_k - η ≤ n^{-c} < q_{k-1} + η` and report any
/// `Q_k` within `η` of `q_k` (and at most `n^{-c}`). The audit takes the
/// extreme `1 - Q_k^{1/k}` over all of these and compares with `τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichAudit {
    pub tau: f64,
    pub eta: f64,
    /// Every `k` the noisy search could stop at.
    pub admissible_k: Vec<u64>,
    /// Smallest and largest reachable `tau_hat / τ`.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Both ratios lie within `[1 - ε, 1 + ε]`.
    pub holds: bool,
}

/// # Panics
/// If `q` does not reach `K₀`.
pub fn sandwich_audit(q: &[f64], tau: f64, n: usize, params: &GapParams) -> SandwichAudit {
    let nf = n as f64;
    let k0 = search_window(n, params.c);
    assert!(q.len() as u64 > k0, "need q_0..=q_K0");
    let eta = params.eps / (8.0 * nf.powf(params.c));
    let threshold = nf.powf(-params.c);
    let mut admissible_k = Vec::new();
    let (mut min_ratio, mut max_ratio) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 1..=k0 {
        let prev = if k == 1 {
            1.0 - 1.0 / nf
        } else {
            q[k as usize - 1] + eta
        };
        let qk = q[k as usize];
        if qk - eta > threshold || prev <= threshold {
            continue;
        }
        admissible_k.push(k);
        let lo = (qk - eta).max(f64::MIN_POSITIVE);
        let hi = (qk + eta).min(threshold);
        for big_q in [lo, hi] {
            let ratio = (1.0 - big_q.powf(1.0 / k as f64)) / tau;
            min_ratio = min_ratio.min(ratio);
            max_ratio = max_ratio.max(ratio);
        }
    }
    SandwichAudit {
        tau,
        eta,
        holds: !admissible_k.is_empty() && min_ratio >= 1.0 - params.eps && max_ratio <= 1.0 + params.eps,
        admissible_k,
        min_ratio,
        max_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap::{search_gap, ExactOracle};
    use crate::graph::{build_family, Family};

    #[test]
    fn exact_search_is_within_budget() {
        let g = build_family(Family::Complete, 4).unwrap();
        let params = GapParams::new(2.0, 0.25, 0.1);
        let est = search_gap(&ExactOracle::lazy(&g, 67), &params, 4, false).unwrap();
        let a = audit_budget(&est);
        assert!(a.passed());
        assert_eq!((a.k0, a.levels), (67, 7));
    }

    #[test]
    fn admissible_stops_include_the_noiseless_one() {
        let g = build_family(Family::Cycle, 6).unwrap();
        let params = GapParams::new(2.0, 0.25, 0.1);
        let k0 = search_window(6, 2.0);
        let oracle = ExactOracle::lazy(&g, k0);
        let est = search_gap(&oracle, &params, 6, false).unwrap();
        let tau = (1.0 - (std::f64::consts::PI / 3.0).cos()) / 2.0;
        let audit = sandwich_audit(oracle.q(), tau, 6, &params);
        assert!(audit.admissible_k.contains(&est.k_star));
        assert!(audit.min_ratio <= est.tau_hat / tau && est.tau_hat / tau <= audit.max_ratio);
    }
}
