use serde::{Deserialize, Serialize};

use super::ExactError;
use crate::graph::RootedGraph;
use crate::linalg::jacobi_eigen;

/// Off-diagonal norm at which the Jacobi iteration stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
/// Eigenvalues closer than this are treated as one.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;
/// A cluster whose summed root weight exceeds this is nondegenerate.
pub const WEIGHT_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    pub value: f64,
    pub multiplicity: usize,
    pub root_weight: f64,
    pub nondegenerate: bool,
}

/// Transition eigenvalues (descending, with multiplicity) and the squared
/// root entries `f_i(r)^2` of an orthonormal eigenbasis of the symmetrised
/// matrix, so that `P_k(r, r) = Σ w_i λ_i^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub root_weights: Vec<f64>,
    pub clusters: Vec<EigenCluster>,
}

impl Spectrum {
    pub fn from_parts(eigenvalues: Vec<f64>, root_weights: Vec<f64>) -> Self {
        let mut pairs: Vec<(f64, f64)> = eigenvalues.into_iter().zip(root_weights).collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let (eigenvalues, root_weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let clusters = cluster(&eigenvalues, &root_weights, CLUSTER_TOLERANCE, WEIGHT_TOLERANCE);
        Spectrum {
            eigenvalues,
            root_weights,
            clusters,
        }
    }

    /// Spectrum of the lazy walk `(I + M) / 2`.
    pub fn lazy(&self) -> Self {
        Self::from_parts(
            self.eigenvalues.iter().map(|l| (1.0 + l) / 2.0).collect(),
            self.root_weights.clone(),
        )
    }

    /// Spectrum of `M²`.
    pub fn squared(&self) -> Self {
        Self::from_parts(
            self.eigenvalues.iter().map(|l| l * l).collect(),
            self.root_weights.clone(),
        )
    }

    /// `1 - λ₂`, counting multiplicity.
    pub fn gap(&self) -> f64 {
        1.0 - self.eigenvalues.get(1).copied().unwrap_or(0.0)
    }

    /// `1 - max(λ₂, |λ_n|)`.
    pub fn absolute_gap(&self) -> f64 {
        let second = self.eigenvalues.get(1).copied().unwrap_or(0.0);
        let last = self.eigenvalues.last().copied().unwrap_or(0.0).abs();
        1.0 - second.max(last)
    }

    /// `Σ w_i λ_i^k`.
    pub fn return_probability(&self, k: u32) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.root_weights)
            .map(|(l, w)| w * l.powi(k as i32))
            .sum()
    }
}

fn cluster(values: &[f64], weights: &[f64], tol: f64, weight_tol: f64) -> Vec<EigenCluster> {
    let mut out: Vec<(Vec<f64>, f64)> = Vec::new();
    for (&v, &w) in values.iter().zip(weights) {
        match out.last_mut() {
            Some((members, weight)) if (members.last().unwrap() - v).abs() <= tol => {
                members.push(v);
                *weight += w;
            }
            _ => out.push((vec![v], w)),
        }
    }
    out.into_iter()
        .map(|(members, root_weight)| EigenCluster {
            value: members.iter().sum::<f64>() / members.len() as f64,
            multiplicity: members.len(),
            root_weight,
            nondegenerate: root_weight > weight_tol,
        })
        .collect()
}

/// Eigendecomposition of `N = Δ^{-1/2} A Δ^{-1/2}`, which is similar to
/// the transition matrix `M = Δ^{-1} A`.
pub fn spectrum(g: &RootedGraph) -> Result<Spectrum, ExactError> {
    let n = g.n();
    let d: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    let mut a = vec![vec![0.0; n]; n];
    for u in 0..n {
        for &v in g.neighbors(u) {
            a[u][v] = 1.0 / (d[u] * d[v]).sqrt();
        }
    }
    let cap = 100 * n * n;
    let eig =
        jacobi_eigen(a, JACOBI_TOLERANCE, cap).map_err(|rotations| ExactError::ConvergenceFailure { rotations })?;
    let r = g.root();
    let weights = eig.vectors.iter().map(|v| v[r] * v[r]).collect();
    Ok(Spectrum::from_parts(eig.values, weights))
}

/// Distinct eigenvalues with a nondegeneracy flag: clusters of eigenvalues
/// within `cluster_tol`, flagged when their summed root weight exceeds
/// `weight_tol`.
pub fn nondegenerate_set(spec: &Spectrum, cluster_tol: f64, weight_tol: f64) -> Vec<(f64, bool)> {
    cluster(&spec.eigenvalues, &spec.root_weights, cluster_tol, weight_tol)
        .into_iter()
        .map(|c| (c.value, c.nondegenerate))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_family, Family};

    #[test]
    fn complete_graph_k4() {
        let s = spectrum(&build_family(Family::Complete, 4).unwrap()).unwrap();
        let expect = [1.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0];
        for (a, b) in s.eigenvalues.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((s.root_weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(s.clusters.len(), 2);
        assert_eq!(s.clusters[1].multiplicity, 3);
        assert!((s.lazy().gap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn edge_has_two_nondegenerate_eigenvalues() {
        let s = spectrum(&build_family(Family::Complete, 2).unwrap()).unwrap();
        let set = nondegenerate_set(&s, CLUSTER_TOLERANCE, WEIGHT_TOLERANCE);
        assert_eq!(set.len(), 2);
        assert!(set.iter().all(|&(_, flag)| flag));
        assert!((set[0].0 - 1.0).abs() < 1e-12 && (set[1].0 + 1.0).abs() < 1e-12);
        assert!((s.root_weights[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cycle_absolute_gap() {
        let s = spectrum(&build_family(Family::Cycle, 4).unwrap()).unwrap();
        assert!(s.absolute_gap().abs() < 1e-12);
        assert!((s.gap() - 1.0).abs() < 1e-12);
        let sq = s.squared();
        assert_eq!(sq.clusters[0].multiplicity, 2);
    }
}
