//! Rooted simple graphs and the families used as fixtures and counterexamples.
//!
//! A [`RootedGraph`] is validated on construction: undirected, simple,
//! connected, and with the root inside the vertex range. Every builder in
//! [`builders`] funnels through the same validation, so a value of this type
//! is always a legal input for the exact and statistical engines.

mod builders;
mod canonical;
mod io;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builders::{attach_new_root, build_family, build_gab, build_leafy, glue_at_roots, Family, LeafyMode};
pub use canonical::tree_canonical_form;
pub use io::GraphJson;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge list is empty")]
    EmptyEdgeList,
    #[error("graph is disconnected: vertex {vertex} is unreachable from the root")]
    Disconnected { vertex: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("root {root} is not a vertex of the graph (n = {n})")]
    RootOutOfRange { root: usize, n: usize },
    #[error("edge endpoint {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("a graph needs at least two vertices, got {n}")]
    TooFewVertices { n: usize },
    #[error("{family} needs parameter >= {min}, got {got}")]
    ParameterTooSmall {
        family: &'static str,
        min: usize,
        got: usize,
    },
    #[error("no simple {degree}-regular graph on blocks of {block} vertices")]
    InfeasibleRegularGraph { degree: usize, block: usize },
    #[error("random {degree}-regular graph on {vertices} vertices not found after {retries} attempts")]
    RegularGraphRetriesExhausted {
        degree: usize,
        vertices: usize,
        retries: usize,
    },
    #[error("glue list is empty")]
    EmptyGlueList,
    #[error("glue multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("graph is not a tree: {edges} edges on {n} vertices")]
    NotATree { n: usize, edges: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Structural facts known by construction. Transitivity is never verified
/// algorithmically; only builders of node-transitive families set it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphTag {
    Tree,
    Transitive,
}

/// A connected simple undirected graph with a distinguished root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    adjacency: Vec<Vec<usize>>,
    root: usize,
    tags: BTreeSet<GraphTag>,
}

impl RootedGraph {
    /// Builds a graph on the explicit vertex set `0..n`.
    pub fn from_indexed_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewVertices { n });
        }
        if root >= n {
            return Err(GraphError::RootOutOfRange { root, n });
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(GraphError::DuplicateEdge { u: a, v: b });
            }
        }
        let graph = RootedGraph {
            adjacency,
            root,
            tags: BTreeSet::new(),
        };
        if let Some(vertex) = graph.first_unreachable() {
            return Err(GraphError::Disconnected { vertex });
        }
        Ok(graph)
    }

    /// Builds a graph whose vertex set is the union of the edge endpoints,
    /// relabeled `0..n` in order of first appearance. `root` is given in the
    /// original labels.
    pub fn from_edge_list(edges: &[(usize, usize)], root: usize) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::EmptyEdgeList);
        }
        let mut labels: Vec<usize> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut relabel = |x: usize| {
            *index.entry(x).or_insert_with(|| {
                labels.push(x);
                labels.len() - 1
            })
        };
        let relabeled: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (relabel(u), relabel(v))).collect();
        let n = labels.len();
        let root = match index.get(&root) {
            Some(&r) => r,
            None => return Err(GraphError::RootOutOfRange { root, n }),
        };
        Self::from_indexed_edges(n, &relabeled, root).map_err(|e| match e {
            GraphError::SelfLoop { vertex } => GraphError::SelfLoop { vertex: labels[vertex] },
            GraphError::DuplicateEdge { u, v } => GraphError::DuplicateEdge {
                u: labels[u].min(labels[v]),
                v: labels[u].max(labels[v]),
            },
            GraphError::Disconnected { vertex } => GraphError::Disconnected { vertex: labels[vertex] },
            other => other,
        })
    }

    pub(crate) fn with_tag(mut self, tag: GraphTag) -> Self {
        self.tags.insert(tag);
        self
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn root_degree(&self) -> usize {
        self.degree(self.root)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn tags(&self) -> &BTreeSet<GraphTag> {
        &self.tags
    }

    pub fn has_tag(&self, tag: GraphTag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.n()
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Same graph, different root. Transitivity survives re-rooting.
    pub fn rerooted(&self, root: usize) -> Result<Self, GraphError> {
        if root >= self.n() {
            return Err(GraphError::RootOutOfRange { root, n: self.n() });
        }
        Ok(RootedGraph { root, ..self.clone() })
    }

    fn first_unreachable(&self) -> Option<usize> {
        let seen = self.reachable_from(self.root, None);
        seen.iter().position(|&s| !s)
    }

    fn reachable_from(&self, start: usize, removed: Option<usize>) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        if let Some(r) = removed {
            seen[r] = true;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if let Some(r) = removed {
            seen[r] = false;
        }
        seen
    }

    /// Whether deleting `v` disconnects the remaining vertices.
    pub fn is_cut_vertex(&self, v: usize) -> bool {
        if self.n() <= 2 {
            return false;
        }
        let start = (0..self.n()).find(|&u| u != v).unwrap_or(0);
        let seen = self.reachable_from(start, Some(v));
        seen.iter().enumerate().any(|(u, &reached)| u != v && !reached)
    }

    /// Two-colouring by BFS from the root, or an odd closed walk as witness.
    pub fn bipartition(&self) -> Bipartition {
        let n = self.n();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        let mut parent = vec![usize::MAX; n];
        colour[self.root] = Some(false);
        let mut queue = VecDeque::from([self.root]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].expect("queued vertices are coloured");
            for &v in &self.adjacency[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        parent[v] = u;
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => {
                        return Bipartition::OddCycle(self.odd_cycle(&parent, u, v));
                    }
                    Some(_) => {}
                }
            }
        }
        Bipartition::TwoColouring(colour.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.bipartition(), Bipartition::TwoColouring(_))
    }

    // Edge u-v joins two vertices of equal BFS colour: splice the two tree
    // paths at their lowest common ancestor.
    fn odd_cycle(&self, parent: &[usize], u: usize, v: usize) -> Vec<usize> {
        let path_to_root = |mut x: usize| {
            let mut path = vec![x];
            while x != self.root {
                x = parent[x];
                path.push(x);
            }
            path
        };
        let pu = path_to_root(u);
        let pv = path_to_root(v);
        let on_pv: std::collections::HashSet<usize> = pv.iter().copied().collect();
        let lca = *pu.iter().find(|x| on_pv.contains(x)).expect("paths share the root");
        let mut cycle: Vec<usize> = pu.iter().copied().take_while(|&x| x != lca).collect();
        cycle.push(lca);
        let tail: Vec<usize> = pv.iter().copied().take_while(|&x| x != lca).collect();
        cycle.extend(tail.into_iter().rev());
        cycle
    }
}

impl fmt::Display for RootedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_file())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartition {
    /// `true`/`false` side per vertex; the root is on side `false`.
    TwoColouring(Vec<bool>),
    /// Vertices of an odd cycle, consecutive entries adjacent and the last
    /// adjacent to the first.
    OddCycle(Vec<usize>),
}

/// A rooted graph certified to be a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeHandle(RootedGraph);

impl TreeHandle {
    pub fn graph(&self) -> &RootedGraph {
        &self.0
    }

    pub fn into_graph(self) -> RootedGraph {
        self.0
    }

    /// Children lists when the tree hangs from its root.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let g = &self.0;
        let mut children = vec![Vec::new(); g.n()];
        let mut parent = vec![usize::MAX; g.n()];
        let mut stack = vec![g.root()];
        parent[g.root()] = g.root();
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    children[u].push(v);
                    stack.push(v);
                }
            }
        }
        children
    }
}

impl TryFrom<RootedGraph> for TreeHandle {
    type Error = GraphError;

    fn try_from(g: RootedGraph) -> Result<Self, GraphError> {
        if !g.is_tree() {
            return Err(GraphError::NotATree {
                n: g.n(),
                edges: g.edge_count(),
            });
        }
        Ok(TreeHandle(g.with_tag(GraphTag::Tree)))
    }
}

impl AsRef<RootedGraph> for TreeHandle {
    fn as_ref(&self) -> &RootedGraph {
        &self.0
    }
}

impl std::ops::Deref for TreeHandle {
    type Target = RootedGraph;

    fn deref(&self) -> &RootedGraph {
        &self.0
    }
}
