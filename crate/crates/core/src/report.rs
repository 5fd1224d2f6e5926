//! Report documents shared by the command-line tool and the tests, and
//! their JSON and CSV encodings.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::exact::{
    first_return_series, hitting_from_stationary, lazy_transition_series, nondegenerate_set, poles_to_eigenvalues,
    return_gen_fun, spectrum, ExactError, HittingReport, PoleEigenvalues, SeriesTable, Spectrum, CLUSTER_TOLERANCE,
    WEIGHT_TOLERANCE,
};
use crate::gap::{GapEstimate, MixingGapEstimate};
use crate::graph::{GraphTag, RootedGraph, TreeHandle};
use crate::ratfun::{h_of_tree, RatFun};
use crate::walk::{observer_stats, ReturnSource};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Caveat printed next to the non-lazy gap.
pub const NONLAZY_NOTE: &str =
    "tau_nonlazy = 2 * tau_hat uses the exact relation between lazy and plain eigenvalues; it inherits the error of tau_hat";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub root: usize,
    pub root_degree: usize,
    pub regular: bool,
    pub bipartite: bool,
    pub tags: Vec<GraphTag>,
}

impl GraphSummary {
    pub fn of(g: &RootedGraph) -> Self {
        GraphSummary {
            n: g.n(),
            edges: g.edge_count(),
            root: g.root(),
            root_degree: g.root_degree(),
            regular: g.regular_degree().is_some(),
            bipartite: g.is_bipartite(),
            tags: g.tags().iter().copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NondegenerateEntry {
    pub value: f64,
    pub nondegenerate: bool,
}

/// Everything the exact engine knows about a rooted graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactReport {
    pub graph: GraphSummary,
    pub k_max: usize,
    pub genfun: RatFun,
    pub series: SeriesTable,
    pub lazy_series: SeriesTable,
    pub spectrum: Spectrum,
    pub nondegenerate: Vec<NondegenerateEntry>,
    pub pole_eigenvalues: PoleEigenvalues,
    pub hitting: HittingReport,
    /// `h(x)` for trees.
    pub tree_h: Option<RatFun>,
}

pub fn exact_report(g: &RootedGraph, k_max: usize) -> Result<ExactReport, ExactError> {
    let fgen = return_gen_fun(g);
    let spec = spectrum(g)?;
    let nondegenerate = nondegenerate_set(&spec, CLUSTER_TOLERANCE, WEIGHT_TOLERANCE)
        .into_iter()
        .map(|(value, nondegenerate)| NondegenerateEntry { value, nondegenerate })
        .collect();
    let tree_h = TreeHandle::try_from(g.clone()).ok().map(|t| h_of_tree(&t));
    Ok(ExactReport {
        graph: GraphSummary::of(g),
        k_max,
        series: first_return_series(&fgen, g.n(), k_max),
        lazy_series: lazy_transition_series(g, k_max),
        pole_eigenvalues: poles_to_eigenvalues(&fgen)?,
        genfun: fgen.ratfun().clone(),
        spectrum: spec,
        nondegenerate,
        hitting: hitting_from_stationary(g)?,
        tree_h,
    })
}

/// What an observer at the root can reconstruct from `m` return gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObserveReport {
    pub seed: u64,
    pub samples: u64,
    pub mean_gap: f64,
    pub mean_gap_sq: f64,
    /// Assumed known to the observer.
    pub root_degree: usize,
    /// `round(d(r) · mean / 2)`.
    pub edge_count_hat: u64,
    /// `round(mean)`; meaningful for regular graphs only.
    pub node_count_hat: u64,
    /// All observed return times were even.
    pub bipartite: bool,
    /// `E(T₁²) / (2 E T₁) - 1/2` from the sample moments.
    pub hitting_estimate: f64,
}

pub fn observe_report<S: ReturnSource + ?Sized>(
    stream: &mut S,
    seed: u64,
    m: u64,
    root_degree: usize,
) -> ObserveReport {
    let s = observer_stats(stream, m);
    ObserveReport {
        seed,
        samples: m,
        mean_gap: s.mean_gap,
        mean_gap_sq: s.mean_gap_sq,
        root_degree,
        edge_count_hat: (root_degree as f64 * s.mean_gap / 2.0).round() as u64,
        node_count_hat: s.mean_gap.round() as u64,
        bipartite: s.all_even,
        hitting_estimate: s.mean_gap_sq / (2.0 * s.mean_gap) - 0.5,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub graph: GraphSummary,
    pub seed: u64,
    #[serde(flatten)]
    pub estimate: GapEstimate,
    pub nonlazy_note: String,
}

impl GapReport {
    /// Marks the estimate heuristic unless the graph is known to be
    /// node-transitive.
    pub fn new(g: &RootedGraph, seed: u64, mut estimate: GapEstimate) -> Self {
        estimate.heuristic = !g.has_tag(GraphTag::Transitive);
        GapReport {
            graph: GraphSummary::of(g),
            seed,
            estimate,
            nonlazy_note: NONLAZY_NOTE.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingGapReport {
    pub graph: GraphSummary,
    pub seed: u64,
    #[serde(flatten)]
    pub estimate: MixingGapEstimate,
}

impl MixingGapReport {
    pub fn new(g: &RootedGraph, seed: u64, mut estimate: MixingGapEstimate) -> Self {
        estimate.search.heuristic = !g.has_tag(GraphTag::Transitive);
        MixingGapReport {
            graph: GraphSummary::of(g),
            seed,
            estimate,
        }
    }
}

/// Flattens a JSON document into `(path, value)` rows: object keys joined
/// with `.`, array indices as path segments, scalars in their JSON
/// spelling with strings unquoted.
pub fn flatten_json(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |seg: &str| {
            if prefix.is_empty() {
                seg.to_string()
            } else {
                format!("{prefix}.{seg}")
            }
        };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, x)| walk(&join(k), x, out)),
            Value::Array(items) => items
                .iter()
                .enumerate()
                .for_each(|(i, x)| walk(&join(&i.to_string()), x, out)),
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

/// Two-column CSV (`key,value`) of [`flatten_json`].
pub fn to_csv<T: Serialize>(report: &T) -> Result<String, ReportError> {
    let v = serde_json::to_value(report)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"])?;
    for (k, x) in flatten_json(&v) {
        w.write_record([k, x])?;
    }
    let bytes = w.into_inner().map_err(|e| ReportError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields is UTF-8"))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}
