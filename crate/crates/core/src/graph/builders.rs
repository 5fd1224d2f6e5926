use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{GraphError, GraphTag, RootedGraph, TreeHandle};

const REGULAR_RETRIES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Parameter: number of vertices. Rooted at an end.
    Path,
    /// Parameter: number of vertices.
    Cycle,
    /// Parameter: number of vertices.
    Complete,
    /// Parameter: number of leaves. Rooted at the centre.
    Star,
    /// Parameter: dimension.
    Hypercube,
}

impl Family {
    fn min_parameter(self) -> usize {
        match self {
            Family::Path | Family::Complete => 2,
            Family::Cycle => 3,
            Family::Star | Family::Hypercube => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Star => "star",
            Family::Hypercube => "hypercube",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "complete" => Ok(Family::Complete),
            "star" => Ok(Family::Star),
            "hypercube" => Ok(Family::Hypercube),
            other => Err(format!("unknown graph family {other:?}")),
        }
    }
}

/// The named graph rooted at vertex 0.
pub fn build_family(kind: Family, size: usize) -> Result<RootedGraph, GraphError> {
    if size < kind.min_parameter() {
        return Err(GraphError::ParameterTooSmall {
            family: kind.name(),
            min: kind.min_parameter(),
            got: size,
        });
    }
    let (n, edges): (usize, Vec<(usize, usize)>) = match kind {
        Family::Path => (size, (1..size).map(|i| (i - 1, i)).collect()),
        Family::Cycle => (size, (0..size).map(|i| (i, (i + 1) % size)).collect()),
        Family::Complete => (
            size,
            (0..size).flat_map(|u| (u + 1..size).map(move |v| (u, v))).collect(),
        ),
        Family::Star => (size + 1, (1..=size).map(|i| (0, i)).collect()),
        Family::Hypercube => {
            let n = 1usize << size;
            let edges = (0..n)
                .flat_map(|u| (0..size).map(move |b| (u, u ^ (1 << b))))
                .filter(|&(u, v)| u < v)
                .collect();
            (n, edges)
        }
    };
    let g = RootedGraph::from_indexed_edges(n, &edges, 0)?;
    Ok(match kind {
        Family::Path | Family::Star => g.with_tag(GraphTag::Tree),
        Family::Cycle | Family::Complete | Family::Hypercube => g.with_tag(GraphTag::Transitive),
    })
}

/// The height-3 tree whose root has one neighbour of degree `a`, each of
/// whose other `a - 1` neighbours has degree `b`.
pub fn build_gab(a: usize, b: usize) -> Result<TreeHandle, GraphError> {
    for (got, name) in [(a, "G_{a,b} parameter a"), (b, "G_{a,b} parameter b")] {
        if got < 1 {
            return Err(GraphError::ParameterTooSmall {
                family: name,
                min: 1,
                got,
            });
        }
    }
    let mut edges = vec![(0, 1)];
    let mut next = 2;
    for _ in 1..a {
        let middle = next;
        edges.push((1, middle));
        next += 1;
        for _ in 1..b {
            edges.push((middle, next));
            next += 1;
        }
    }
    TreeHandle::try_from(RootedGraph::from_indexed_edges(next, &edges, 0)?)
}

/// Identifies the roots of `mult` copies of every listed tree.
pub fn glue_at_roots(parts: &[(TreeHandle, usize)]) -> Result<TreeHandle, GraphError> {
    if parts.is_empty() {
        return Err(GraphError::EmptyGlueList);
    }
    let mut edges = Vec::new();
    let mut next = 1;
    for (tree, mult) in parts {
        if *mult == 0 {
            return Err(GraphError::ZeroMultiplicity);
        }
        for _ in 0..*mult {
            let mut map = vec![0usize; tree.n()];
            for (v, slot) in map.iter_mut().enumerate() {
                if v != tree.root() {
                    *slot = next;
                    next += 1;
                }
            }
            edges.extend(tree.edges().into_iter().map(|(u, v)| (map[u], map[v])));
        }
    }
    TreeHandle::try_from(RootedGraph::from_indexed_edges(next, &edges, 0)?)
}

/// Hangs the tree from a fresh leaf attached to its root; the leaf becomes
/// vertex 0 and the new root.
pub fn attach_new_root(tree: &TreeHandle) -> TreeHandle {
    let mut edges: Vec<(usize, usize)> = tree.edges().into_iter().map(|(u, v)| (u + 1, v + 1)).collect();
    edges.push((0, tree.root() + 1));
    let g = RootedGraph::from_indexed_edges(tree.n() + 1, &edges, 0)
        .expect("adding a pendant vertex to a tree yields a tree");
    TreeHandle::try_from(g).expect("edge count is n - 1")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafyMode {
    /// A seeded random regular graph on the whole leaf set.
    Expander,
    /// A circulant inside each depth-1 subtree (pairs of subtrees when the
    /// degree is odd), making the root a cutpoint.
    Cutpoint,
}

impl FromStr for LeafyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "expander" => Ok(LeafyMode::Expander),
            "cutpoint" => Ok(LeafyMode::Cutpoint),
            other => Err(format!("unknown leafy mode {other:?}")),
        }
    }
}

/// A full tree of height `h` with every internal vertex of degree `d + 1`,
/// plus a `d`-regular graph on its leaves. The result is `(d+1)`-regular.
pub fn build_leafy(h: usize, d: usize, mode: LeafyMode, seed: u64) -> Result<RootedGraph, GraphError> {
    if h < 1 {
        return Err(GraphError::ParameterTooSmall {
            family: "leafy height",
            min: 1,
            got: h,
        });
    }
    if d < 2 {
        return Err(GraphError::ParameterTooSmall {
            family: "leafy degree",
            min: 2,
            got: d,
        });
    }
    let mut edges = Vec::new();
    let mut level: Vec<usize> = vec![0];
    let mut next = 1;
    for depth in 0..h {
        let fan = if depth == 0 { d + 1 } else { d };
        let mut below = Vec::with_capacity(level.len() * fan);
        for &u in &level {
            for _ in 0..fan {
                edges.push((u, next));
                below.push(next);
                next += 1;
            }
        }
        level = below;
    }
    let leaves = level;
    // Odd d forces odd per-subtree blocks, which carry no d-regular graph;
    // pairing the d + 1 subtrees keeps every added edge away from the root.
    let subtrees_per_block = if d % 2 == 1 { 2 } else { 1 };
    let block = subtrees_per_block * leaves.len() / (d + 1);
    match mode {
        LeafyMode::Cutpoint => {
            for chunk in leaves.chunks(block) {
                edges.extend(circulant(chunk, d)?);
            }
        }
        LeafyMode::Expander => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            edges.extend(random_regular(&leaves, d, &mut rng)?);
        }
    }
    RootedGraph::from_indexed_edges(next, &edges, 0)
}

// i ~ i±1, …, i±⌊d/2⌋, plus the antipode when d is odd.
fn circulant(vertices: &[usize], d: usize) -> Result<Vec<(usize, usize)>, GraphError> {
    let m = vertices.len();
    if d >= m || (d % 2 == 1 && m % 2 == 1) {
        return Err(GraphError::InfeasibleRegularGraph { degree: d, block: m });
    }
    let mut edges = Vec::with_capacity(m * d / 2);
    for i in 0..m {
        for off in 1..=d / 2 {
            edges.push((vertices[i], vertices[(i + off) % m]));
        }
        if d % 2 == 1 && i < m / 2 {
            edges.push((vertices[i], vertices[i + m / 2]));
        }
    }
    Ok(edges)
}

// Configuration model: pair up d copies of every vertex uniformly, reject
// loops, repeated pairs and disconnected outcomes.
fn random_regular(vertices: &[usize], d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>, GraphError> {
    let m = vertices.len();
    if d >= m || (m * d) % 2 == 1 {
        return Err(GraphError::InfeasibleRegularGraph { degree: d, block: m });
    }
    let mut stubs: Vec<usize> = (0..m).flat_map(|i| std::iter::repeat_n(i, d)).collect();
    'attempt: for _ in 0..REGULAR_RETRIES {
        stubs.shuffle(rng);
        let mut seen = std::collections::HashSet::with_capacity(m * d / 2);
        let mut pairs = Vec::with_capacity(m * d / 2);
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            pairs.push((u, v));
        }
        if is_connected(m, &pairs) {
            return Ok(pairs.into_iter().map(|(u, v)| (vertices[u], vertices[v])).collect());
        }
    }
    Err(GraphError::RegularGraphRetriesExhausted {
        degree: d,
        vertices: m,
        retries: REGULAR_RETRIES,
    })
}

fn is_connected(m: usize, pairs: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); m];
    for &(u, v) in pairs {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; m];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degree_sequence(g: &RootedGraph) -> Vec<usize> {
        let mut d = g.degrees();
        d.sort_unstable();
        d
    }

    #[test]
    fn families() {
        let c4 = build_family(Family::Cycle, 4).unwrap();
        assert_eq!((c4.n(), c4.regular_degree()), (4, Some(2)));
        let k4 = build_family(Family::Complete, 4).unwrap();
        assert_eq!((k4.n(), k4.edge_count()), (4, 6));
        let q3 = build_family(Family::Hypercube, 3).unwrap();
        assert_eq!((q3.n(), q3.regular_degree()), (8, Some(3)));
        assert!(q3.has_tag(GraphTag::Transitive));
        let star = build_family(Family::Star, 3).unwrap();
        assert_eq!((star.n(), star.root_degree()), (4, 3));
    }

    #[test]
    fn family_parameter_too_small() {
        assert_eq!(
            build_family(Family::Cycle, 2),
            Err(GraphError::ParameterTooSmall {
                family: "cycle",
                min: 3,
                got: 2
            })
        );
    }

    #[test]
    fn gab_degenerate_cases() {
        let path = build_gab(2, 2).unwrap();
        assert_eq!(path.n(), 4);
        assert_eq!(degree_sequence(&path), vec![1, 1, 2, 2]);
        assert_eq!(path.root_degree(), 1);

        let star = build_gab(4, 1).unwrap();
        assert_eq!(star.n(), 5);
        assert_eq!(degree_sequence(&star), vec![1, 1, 1, 1, 4]);
        assert_eq!(star.root_degree(), 1);

        let edge = build_gab(1, 4).unwrap();
        assert_eq!(edge.n(), 2);
    }

    #[test]
    fn gab_vertex_count_formula() {
        for a in 1..=6 {
            for b in 1..=6 {
                let t = build_gab(a, b).unwrap();
                assert_eq!(t.n(), 2 + (a - 1) * b, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn glue_counts_and_root_degree() {
        let edge = build_gab(1, 4).unwrap();
        assert_eq!(glue_at_roots(&[(edge.clone(), 1)]).unwrap(), edge);

        let star = build_gab(4, 1).unwrap();
        let left = glue_at_roots(&[(edge.clone(), 1), (star.clone(), 2)]).unwrap();
        assert_eq!(left.n(), 1 + 1 + 2 * 4);
        assert_eq!(left.root_degree(), 3);

        let path = build_gab(2, 2).unwrap();
        let right = glue_at_roots(&[(path, 3)]).unwrap();
        assert_eq!(right.n(), 10);
        assert_eq!(right.root_degree(), 3);

        assert_eq!(glue_at_roots(&[]), Err(GraphError::EmptyGlueList));
        assert_eq!(glue_at_roots(&[(edge, 0)]), Err(GraphError::ZeroMultiplicity));
    }

    #[test]
    fn attach_root_to_edge_gives_path() {
        let edge = build_gab(1, 1).unwrap();
        let p3 = attach_new_root(&edge);
        assert_eq!(p3.n(), 3);
        assert_eq!(p3.root_degree(), 1);
        assert_eq!(degree_sequence(&p3), vec![1, 1, 2]);
    }

    #[test]
    fn leafy_height_one_is_k4() {
        for mode in [LeafyMode::Expander] {
            let g = build_leafy(1, 2, mode, 7).unwrap();
            assert_eq!(g.n(), 4);
            assert_eq!(g.edge_count(), 6);
        }
    }

    #[test]
    fn leafy_cutpoint_blocks_need_room() {
        assert_eq!(
            build_leafy(2, 2, LeafyMode::Cutpoint, 0),
            Err(GraphError::InfeasibleRegularGraph { degree: 2, block: 2 })
        );
        assert_eq!(
            build_leafy(1, 2, LeafyMode::Cutpoint, 0),
            Err(GraphError::InfeasibleRegularGraph { degree: 2, block: 1 })
        );
    }

    #[test]
    fn leafy_is_regular_and_cutpoint_mode_cuts() {
        for (h, d) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
            let g = build_leafy(h, d, LeafyMode::Expander, 11).unwrap();
            assert_eq!(g.regular_degree(), Some(d + 1), "expander h={h} d={d}");
        }
        for (h, d) in [(3, 2), (2, 3), (3, 3), (4, 2)] {
            let g = build_leafy(h, d, LeafyMode::Cutpoint, 0).unwrap();
            assert_eq!(g.regular_degree(), Some(d + 1), "cutpoint h={h} d={d}");
            assert!(g.is_cut_vertex(g.root()), "cutpoint h={h} d={d}");
        }
    }

    #[test]
    fn leafy_expander_is_seed_deterministic() {
        let a = build_leafy(3, 2, LeafyMode::Expander, 99).unwrap();
        let b = build_leafy(3, 2, LeafyMode::Expander, 99).unwrap();
        assert_eq!(a, b);
    }
}
