//! End-to-end gap and mixing-gap estimation against exact spectra.

use batecho::exact::spectrum;
use batecho::gap::{
    estimate_gap, estimate_mixing_gap_using, mixing_from_search, sandwich_audit, search_gap, search_window,
    ExactOracle, GapError, GapParams, NodeCount,
};
use batecho::graph::{build_family, Family};
use batecho::walk::{ChainView, OutcomeSampler, RenewalWalk, SimulatedWalk};

fn params() -> GapParams {
    GapParams::new(2.0, 0.25, 0.1)
}

#[test]
fn tick_level_runs_on_complete_graph() {
    let g = build_family(Family::Complete, 4).unwrap();
    let tau = spectrum(&g).unwrap().lazy().gap();
    let walk = SimulatedWalk::new(g);
    for seed in 0..3 {
        let est = estimate_gap(&walk, &params(), NodeCount::Known(4), seed).unwrap();
        let ratio = est.tau_hat / tau;
        assert!((0.75..=1.25).contains(&ratio), "seed {seed}: ratio {ratio}");
        assert!(est.total_ticks > est.total_experiments);
    }
}

#[test]
fn estimated_node_count_is_flagged() {
    let g = build_family(Family::Complete, 4).unwrap();
    let est = estimate_gap(&RenewalWalk::new(&g), &params(), NodeCount::Estimate, 4).unwrap();
    assert!(est.n_estimated);
    assert_eq!(est.n_used, 4);
}

#[test]
fn renewal_backend_matches_tick_level_in_distribution() {
    let g = build_family(Family::Complete, 4).unwrap();
    let tau = spectrum(&g).unwrap().lazy().gap();
    let est = estimate_gap(&RenewalWalk::new(&g), &params(), NodeCount::Known(4), 1).unwrap();
    assert!((est.tau_hat / tau - 1.0).abs() <= 0.25);
}

/// Worst case over all noise the Hoeffding budget allows, computed from
/// the exact `q`: for the complete graph every admissible outcome is
/// within the accuracy target.
#[test]
fn admissible_noise_keeps_complete_graph_within_target() {
    let g = build_family(Family::Complete, 4).unwrap();
    let tau = spectrum(&g).unwrap().lazy().gap();
    let k0 = search_window(4, 2.0);
    let oracle = ExactOracle::lazy(&g, k0);
    let audit = sandwich_audit(oracle.q(), tau, 4, &params());
    assert!(audit.holds, "{audit:?}");
}

#[test]
fn mixing_gap_of_complete_graph() {
    let g = build_family(Family::Complete, 4).unwrap();
    let exact = spectrum(&g).unwrap().absolute_gap();
    let k0 = search_window(4, 2.0);
    let noiseless = search_gap(&ExactOracle::lazy_every_other(&g, 4, k0), &params(), 4, false).unwrap();
    let m = mixing_from_search(noiseless, false);
    assert!(
        m.mixing_gap >= exact - 1e-12 && m.mixing_gap <= 1.5 * exact,
        "{}",
        m.mixing_gap
    );

    let sampler = OutcomeSampler::new(&g, ChainView::LAZY_EVERY_OTHER);
    let est = estimate_mixing_gap_using(&RenewalWalk::new(&g), sampler, &params(), NodeCount::Known(4), 3).unwrap();
    assert!(!est.bipartite);
    assert_eq!(est.n_component, 4);
    let ratio = est.mixing_gap / exact;
    assert!((0.75..=1.25).contains(&ratio), "ratio {ratio}");
}

#[test]
fn mixing_gap_of_cube_is_zero_with_component_gap() {
    let g = build_family(Family::Hypercube, 3).unwrap();
    let spec = spectrum(&g).unwrap();
    assert!(spec.absolute_gap().abs() < 1e-9);
    // On the root's class, M² has eigenvalues 1 and (1/3)².
    let component_gap = 1.0 - spec.eigenvalues[1];
    let sampler = OutcomeSampler::new(&g, ChainView::LAZY_EVERY_OTHER);
    let est = estimate_mixing_gap_using(&RenewalWalk::new(&g), sampler, &params(), NodeCount::Known(8), 5).unwrap();
    assert!(est.bipartite);
    assert_eq!(est.n_component, 4);
    assert_eq!(est.mixing_gap, 0.0);
    let ratio = est.component_gap / component_gap;
    assert!((0.75..=1.25).contains(&ratio), "ratio {ratio}");
}

/// At the centre of a star, `P_k(r, r)` tends to `π(r) = 1/2`, so
/// `q_k = P_k - 1/n` never falls below `n^{-c}`.
#[test]
fn non_regular_root_exhausts_the_search() {
    let g = build_family(Family::Star, 3).unwrap();
    let k0 = search_window(g.n(), 2.0);
    let err = search_gap(&ExactOracle::lazy(&g, k0), &params(), g.n(), false).unwrap_err();
    assert_eq!(err, GapError::SearchExhausted { k0 });
}
