use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{return_gen_fun, ExactError};
use crate::graph::RootedGraph;
use crate::linalg::solve_rational;

/// `H(π, r)`, the expected hitting time of the root from stationarity,
/// computed two ways.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingReport {
    #[serde(with = "crate::json::rational")]
    pub value: BigRational,
    /// Average of the exact hitting times under `π(x) = d(x) / 2|E|`.
    #[serde(with = "crate::json::rational")]
    pub linear_system: BigRational,
    /// `E(T₁²) / (2 E T₁) - 1/2`.
    #[serde(with = "crate::json::rational")]
    pub moment_formula: BigRational,
    #[serde(with = "crate::json::rational")]
    pub mean_t1: BigRational,
    #[serde(with = "crate::json::rational")]
    pub second_moment_t1: BigRational,
}

/// Exact `E T₁` and `E T₁²` from the Taylor expansion of `1/f` at `t = 1`.
///
/// With `1/f(1+u) = c₀ + c₁u + c₂u² + …` (and `c₀ = 0` by recurrence),
/// `E T₁ = -c₁` and `E T₁(T₁-1) = -2c₂`.
pub fn first_return_moments(g: &RootedGraph) -> (BigRational, BigRational) {
    let inv = return_gen_fun(g).ratfun().recip().expect("f is nonzero");
    let c = inv
        .shift(&BigInt::one())
        .series(3)
        .expect("f has a pole at 1, so 1/f is regular there");
    debug_assert!(c[0].is_zero());
    let mean = -c[1].clone();
    let second = -(&c[2] * BigRational::from_integer(2.into())) - &c[1];
    (mean, second)
}

/// Expected hitting times of the root from every vertex, exactly.
pub fn hitting_times(g: &RootedGraph) -> Vec<BigRational> {
    let r = g.root();
    let others: Vec<usize> = (0..g.n()).filter(|&v| v != r).collect();
    let index = |v: usize| if v < r { v } else { v - 1 };
    let m = others.len();
    let mut a = vec![vec![BigRational::zero(); m]; m];
    let b = vec![BigRational::one(); m];
    // H(x) - Σ_{y ~ x, y ≠ r} H(y) / d(x) = 1
    for (i, &x) in others.iter().enumerate() {
        a[i][i] = BigRational::one();
        let w = BigRational::new(BigInt::one(), BigInt::from(g.degree(x)));
        for &y in g.neighbors(x) {
            if y != r {
                a[i][index(y)] -= &w;
            }
        }
    }
    let h = solve_rational(a, b).expect("hitting-time system is nonsingular on a connected graph");
    let mut out = vec![BigRational::zero(); g.n()];
    for (i, &x) in others.iter().enumerate() {
        out[x] = h[i].clone();
    }
    out
}

pub fn hitting_from_stationary(g: &RootedGraph) -> Result<HittingReport, ExactError> {
    let h = hitting_times(g);
    let two_e = BigInt::from(2 * g.edge_count());
    let linear_system = h
        .iter()
        .enumerate()
        .map(|(x, hx)| hx * BigRational::new(BigInt::from(g.degree(x)), two_e.clone()))
        .fold(BigRational::zero(), |acc, t| acc + t);
    let (mean_t1, second_moment_t1) = first_return_moments(g);
    let moment_formula = &second_moment_t1 / (&mean_t1 * BigRational::from_integer(2.into()))
        - BigRational::new(BigInt::one(), BigInt::from(2));
    if linear_system != moment_formula {
        return Err(ExactError::MomentMismatch {
            linear_system: linear_system.to_string(),
            moment_formula: moment_formula.to_string(),
        });
    }
    Ok(HittingReport {
        value: linear_system.clone(),
        linear_system,
        moment_formula,
        mean_t1,
        second_moment_t1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub edge_count: u64,
    pub node_count: Option<u64>,
}

/// `|E| = d(r) E(T₁) / 2`, and `n = E(T₁)` for regular graphs.
pub fn reconstruct_counts(mean_t1: &BigRational, d_root: u64, regular: bool) -> Result<Reconstruction, ExactError> {
    let edges = mean_t1 * BigRational::new(BigInt::from(d_root), BigInt::from(2));
    let as_count = |q: &BigRational, what: &'static str| {
        if q.is_integer() && q.numer() > &BigInt::zero() {
            q.numer().to_u64().ok_or(ExactError::NonIntegerResult {
                quantity: what,
                value: q.to_string(),
            })
        } else {
            Err(ExactError::NonIntegerResult {
                quantity: what,
                value: q.to_string(),
            })
        }
    };
    Ok(Reconstruction {
        edge_count: as_count(&edges, "edge count")?,
        node_count: regular.then(|| as_count(mean_t1, "node count")).transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_family, Family, RootedGraph};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn edge_by_hand() {
        let k2 = build_family(Family::Complete, 2).unwrap();
        let rep = hitting_from_stationary(&k2).unwrap();
        assert_eq!(rep.value, q(1, 2));
        assert_eq!(rep.mean_t1, q(2, 1));
        assert_eq!(rep.second_moment_t1, q(4, 1));
    }

    #[test]
    fn routes_agree_on_small_graphs() {
        for (fam, size) in [
            (Family::Cycle, 3),
            (Family::Cycle, 4),
            (Family::Star, 3),
            (Family::Path, 5),
        ] {
            let g = build_family(fam, size).unwrap();
            let rep = hitting_from_stationary(&g).unwrap();
            assert_eq!(rep.linear_system, rep.moment_formula);
        }
        // a lollipop: triangle with a pendant path, rooted on the path
        let g = RootedGraph::from_edge_list(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 2)], 0).unwrap();
        let rep = hitting_from_stationary(&g).unwrap();
        assert_eq!(rep.mean_t1, q(10, 1));
    }

    #[test]
    fn counts() {
        assert_eq!(
            reconstruct_counts(&q(2, 1), 1, true).unwrap(),
            Reconstruction {
                edge_count: 1,
                node_count: Some(2)
            }
        );
        assert_eq!(
            reconstruct_counts(&q(4, 1), 2, true).unwrap(),
            Reconstruction {
                edge_count: 4,
                node_count: Some(4)
            }
        );
        assert_eq!(
            reconstruct_counts(&q(2, 1), 3, false).unwrap(),
            Reconstruction {
                edge_count: 3,
                node_count: None
            }
        );
        assert!(matches!(
            reconstruct_counts(&q(5, 2), 1, false),
            Err(ExactError::NonIntegerResult { .. })
        ));
    }
}
