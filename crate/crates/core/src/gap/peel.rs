use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact::lazy_transition_series;
use crate::graph::RootedGraph;

/// One eigenvalue recovered by peeling, with the estimate at every rung of
/// the `k` ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelStep {
    /// 1-based position in the descending spectrum.
    pub index: usize,
    /// `(k, [P_k - Σ_{j<i} λ_j^k / n]^{1/k})` per rung.
    pub ladder: Vec<(u64, f64)>,
    /// The estimate at the last rung.
    pub lambda: f64,
}

/// Recovers the top lazy eigenvalues one at a time from the exact return
/// series, each as the `k`-th root of what remains of `P_k` after the
/// eigenvalues already found are subtracted (with weight `1/n` each, as for
/// a node-transitive graph).
///
/// Diagnostic only: errors compound down the spectrum, and repeated or
/// nearly equal eigenvalues converge slowly. Peeling stops early once the
/// remainder is no longer positive.
pub fn peel_diagnostic(g: &RootedGraph, depth: usize, ladder: &[u64]) -> Vec<PeelStep> {
    let Some(&k_max) = ladder.iter().max() else {
        return Vec::new();
    };
    let n = g.n() as f64;
    let table = lazy_transition_series(g, k_max as usize);
    // q_k = P_k - 1/n exactly, then f64 from there on
    let q: Vec<f64> = table
        .q
        .expect("lazy tables carry q")
        .iter()
        .map(|x| x.to_f64().unwrap_or(0.0))
        .collect();
    let mut steps = vec![PeelStep {
        index: 1,
        ladder: ladder.iter().map(|&k| (k, 1.0)).collect(),
        lambda: 1.0,
    }];
    let mut found: Vec<f64> = Vec::new();
    for index in 2..=depth.max(1) {
        let mut rungs = Vec::with_capacity(ladder.len());
        for &k in ladder {
            let rest = q[k as usize] - found.iter().map(|l| l.powi(k as i32) / n).sum::<f64>();
            if !(rest > 0.0) || k == 0 {
                break;
            }
            rungs.push((k, rest.powf(1.0 / k as f64)));
        }
        if rungs.len() < ladder.len() {
            break;
        }
        let lambda = rungs.last().map_or(0.0, |r| r.1);
        found.push(lambda);
        steps.push(PeelStep {
            index,
            ladder: rungs,
            lambda,
        });
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_family, Family};

    #[test]
    fn second_eigenvalue_of_lazy_cycle() {
        let g = build_family(Family::Cycle, 6).unwrap();
        let steps = peel_diagnostic(&g, 2, &[10, 40, 160]);
        assert_eq!(steps.len(), 2);
        // lazy C₆: λ₂ = (1 + cos(π/3))/2 = 3/4 with multiplicity 2; the
        // root of 2·(3/4)^k/6 tends to 3/4 slowly
        let l2 = steps[1].lambda;
        assert!((l2 - 0.75).abs() < 0.01, "{l2}");
        let rungs: Vec<f64> = steps[1].ladder.iter().map(|r| r.1).collect();
        assert!((rungs[2] - 0.75).abs() < (rungs[0] - 0.75).abs());
    }
}
