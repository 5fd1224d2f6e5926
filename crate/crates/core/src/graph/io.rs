//! Text and JSON encodings of rooted graphs.
//!
//! Text: first line `n root`, then one `u v` edge per line, LF-terminated.

use serde::{Deserialize, Serialize};

use super::{GraphError, GraphTag, RootedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub root: usize,
    pub edges: Vec<[usize; 2]>,
    pub tags: Vec<GraphTag>,
}

impl RootedGraph {
    pub fn to_edge_file(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.root());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the text format. Blank lines and lines starting with `#` are
    /// skipped; errors carry 1-based line numbers.
    pub fn parse_edge_file(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let pair = parse_pair(line).map_err(|message| GraphError::Parse { line: i + 1, message })?;
            match header {
                None => header = Some(pair),
                Some((n, _)) => {
                    for w in [pair.0, pair.1] {
                        if w >= n {
                            return Err(GraphError::Parse {
                                line: i + 1,
                                message: format!("vertex {w} out of range for n = {n}"),
                            });
                        }
                    }
                    edges.push(pair);
                }
            }
        }
        let (n, root) = header.ok_or(GraphError::Parse {
            line: 1,
            message: "missing \"n root\" header".into(),
        })?;
        RootedGraph::from_indexed_edges(n, &edges, root)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n(),
            root: self.root(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            tags: self.tags().iter().copied().collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        let edges: Vec<(usize, usize)> = json.edges.iter().map(|&[u, v]| (u, v)).collect();
        let mut g = RootedGraph::from_indexed_edges(json.n, &edges, json.root)?;
        for &tag in &json.tags {
            if tag == GraphTag::Tree && !g.is_tree() {
                return Err(GraphError::NotATree {
                    n: g.n(),
                    edges: g.edge_count(),
                });
            }
            g = g.with_tag(tag);
        }
        Ok(g)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize), String> {
    let mut parts = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize, String> {
        let tok = parts.next().ok_or_else(|| format!("missing {what}"))?;
        tok.parse::<usize>()
            .map_err(|_| format!("{what} {tok:?} is not a non-negative integer"))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected trailing field {extra:?}"));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_family, build_leafy, Family, LeafyMode};
    use proptest::prelude::*;

    #[test]
    fn text_format_is_exact() {
        let g = build_family(Family::Cycle, 4).unwrap();
        assert_eq!(g.to_edge_file(), "4 0\n0 1\n0 3\n1 2\n2 3\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = RootedGraph::parse_edge_file("3 0\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err:?}");
        let err = RootedGraph::parse_edge_file("3 0\n0 1\n\n1 7\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 4, .. }), "{err:?}");
        let err = RootedGraph::parse_edge_file("").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
        let err = RootedGraph::parse_edge_file("4 0\n0 1\n2 3\n").unwrap_err();
        assert_eq!(err, GraphError::Disconnected { vertex: 2 });
    }

    #[test]
    fn json_shape() {
        let g = build_family(Family::Complete, 3).unwrap();
        let v = serde_json::to_value(g.to_json()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"n":3,"root":0,"edges":[[0,1],[0,2],[1,2]],"tags":["transitive"]})
        );
    }

    proptest! {
        #[test]
        fn builders_round_trip_through_both_encodings(
            kind in 0usize..5, size in 1usize..7, seed in any::<u64>()
        ) {
            let g = match kind {
                0 => build_family(Family::Cycle, size + 2).unwrap(),
                1 => build_family(Family::Hypercube, size.min(5)).unwrap(),
                2 => build_family(Family::Star, size).unwrap(),
                3 => crate::graph::build_gab(size, 7 - size).unwrap().into_graph(),
                _ => build_leafy(2, 2, LeafyMode::Expander, seed).unwrap(),
            };
            let text = RootedGraph::parse_edge_file(&g.to_edge_file()).unwrap();
            prop_assert_eq!(text.edges(), g.edges());
            prop_assert_eq!(text.root(), g.root());
            let json = RootedGraph::from_json(&g.to_json()).unwrap();
            prop_assert_eq!(&json, &g);
            let relabeled = RootedGraph::from_edge_list(&g.edges(), g.root()).unwrap();
            prop_assert_eq!(relabeled.n(), g.n());
            prop_assert_eq!(relabeled.edge_count(), g.edge_count());
        }
    }
}
