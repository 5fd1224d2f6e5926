use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{ExactError, GenFun};
use crate::graph::RootedGraph;

/// Exact return statistics indexed by step count `0..=k_max`.
///
/// `p[k]` is the probability of being at the root after `k` steps, `s[k]`
/// the probability that the first return happens at step `k` (`s[0] = 0`),
/// `z[k]` the probability of no return within the first `k` steps, and
/// `q[k] = p[k] - 1/n` (filled for lazy chains only).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTable {
    pub n: usize,
    pub k_max: usize,
    pub lazy: bool,
    #[serde(with = "crate::json::rational_vec")]
    pub p: Vec<BigRational>,
    #[serde(with = "crate::json::opt_rational_vec")]
    pub s: Option<Vec<BigRational>>,
    #[serde(with = "crate::json::opt_rational_vec")]
    pub z: Option<Vec<BigRational>>,
    #[serde(with = "crate::json::opt_rational_vec")]
    pub q: Option<Vec<BigRational>>,
}

/// Lowest common multiple of the vertex degrees.
fn degree_lcm(g: &RootedGraph) -> BigInt {
    g.degrees()
        .into_iter()
        .fold(BigInt::one(), |acc, d| acc.lcm(&BigInt::from(d)))
}

/// `P_k(r, r)` for `k = 0..=k_max` by pushing the root indicator through the
/// transition operator. The row vector is kept as integers scaled by
/// `L^k` (`L` the lcm of the degrees, or `2L` for the lazy walk), so every
/// step is integer arithmetic.
fn root_return_probabilities(g: &RootedGraph, k_max: usize, lazy: bool) -> Vec<BigRational> {
    let n = g.n();
    let l = degree_lcm(g);
    let share: Vec<BigInt> = g.degrees().into_iter().map(|d| &l / BigInt::from(d)).collect();
    let scale = if lazy { &l * 2 } else { l.clone() };
    let mut u = vec![BigInt::zero(); n];
    u[g.root()] = BigInt::one();
    let mut denom = BigInt::one();
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(BigRational::one());
    for _ in 0..k_max {
        let mut next: Vec<BigInt> = if lazy {
            u.iter().map(|x| x * &l).collect()
        } else {
            vec![BigInt::zero(); n]
        };
        for (y, uy) in u.iter().enumerate() {
            if uy.is_zero() {
                continue;
            }
            let w = uy * &share[y];
            for &x in g.neighbors(y) {
                next[x] += &w;
            }
        }
        u = next;
        denom *= &scale;
        out.push(BigRational::new(u[g.root()].clone(), denom.clone()));
    }
    out
}

/// `P_k(r, r)` of the simple random walk, `k = 0..=k_max`.
pub fn transition_series(g: &RootedGraph, k_max: usize) -> SeriesTable {
    SeriesTable {
        n: g.n(),
        k_max,
        lazy: false,
        p: root_return_probabilities(g, k_max, false),
        s: None,
        z: None,
        q: None,
    }
}

/// `P'_k(r, r)` of the lazy walk by direct iteration of `(I + M) / 2`.
/// Independent of [`lazy_series`]; the two are cross-checked in tests.
pub fn lazy_transition_series(g: &RootedGraph, k_max: usize) -> SeriesTable {
    let p = root_return_probabilities(g, k_max, true);
    let q = Some(excess_over_uniform(&p, g.n()));
    SeriesTable {
        n: g.n(),
        k_max,
        lazy: true,
        p,
        s: None,
        z: None,
        q,
    }
}

fn excess_over_uniform(p: &[BigRational], n: usize) -> Vec<BigRational> {
    let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
    p.iter().map(|x| x - &inv_n).collect()
}

/// Lazy return probabilities `2^-k Σ_j C(k, j) P_j` from a non-lazy table.
pub fn lazy_series(table: &SeriesTable, k_max: usize) -> Result<SeriesTable, ExactError> {
    if table.lazy {
        return Err(ExactError::AlreadyLazy);
    }
    if table.p.len() <= k_max {
        return Err(ExactError::SeriesTooShort {
            have: table.p.len().saturating_sub(1),
            need: k_max,
        });
    }
    // Common denominator, then the binomial transform as k rounds of
    // neighbour sums: after m rounds, c[0] = Σ_j C(m, j) a_j.
    let den = table.p[..=k_max]
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut c: Vec<BigInt> = table.p[..=k_max]
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    let mut p = Vec::with_capacity(k_max + 1);
    let mut pow2 = BigInt::one();
    for k in 0..=k_max {
        p.push(BigRational::new(c[0].clone(), &den * &pow2));
        for j in 0..c.len() - 1 {
            let next = c[j + 1].clone();
            c[j] += next;
        }
        c.pop();
        pow2 <<= 1;
        debug_assert!(c.len() == k_max - k || k == k_max);
    }
    let q = Some(excess_over_uniform(&p, table.n));
    Ok(SeriesTable {
        n: table.n,
        k_max,
        lazy: true,
        p,
        s: None,
        z: None,
        q,
    })
}

/// `p`, `s` and `z` up to `k_max` from a return generating function: `s`
/// from the expansion of `1 / f`, `z` from the cumulative identity.
pub fn first_return_series(fgen: &GenFun, n: usize, k_max: usize) -> SeriesTable {
    let p = fgen.series(k_max + 1);
    let inv = fgen.ratfun().recip().expect("f(0) = 1, so f is nonzero");
    let mut s: Vec<BigRational> = inv
        .series(k_max + 1)
        .expect("1/f is regular at 0")
        .into_iter()
        .map(|c| -c)
        .collect();
    s[0] = BigRational::zero();
    let mut z = Vec::with_capacity(k_max + 1);
    let mut acc = BigRational::one();
    for sk in &s {
        acc -= sk;
        z.push(acc.clone());
    }
    let lazy = fgen.is_lazy();
    let q = lazy.then(|| excess_over_uniform(&p, n));
    SeriesTable {
        n,
        k_max,
        lazy,
        p,
        s: Some(s),
        z: Some(z),
        q,
    }
}
