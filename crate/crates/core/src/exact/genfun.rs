use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::ExactError;
use crate::graph::RootedGraph;
use crate::linalg::poly_determinant;
use crate::ratfun::{real_roots, IntPoly, RatFun};

/// The return generating function `f(t) = Σ P_k(r, r) t^k` of a walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenFun {
    f: RatFun,
    lazy: bool,
}

impl GenFun {
    /// Wraps `f`, checking `f(0) = 1`.
    pub fn from_ratfun(f: RatFun, lazy: bool) -> Result<Self, ExactError> {
        match f.eval(&BigRational::from_integer(0.into())) {
            Some(v) if v.is_one() => Ok(GenFun { f, lazy }),
            _ => Err(ExactError::NotAGenFun),
        }
    }

    pub fn ratfun(&self) -> &RatFun {
        &self.f
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy
    }

    /// First `terms` coefficients, i.e. `P_0 ..= P_{terms-1}`.
    pub fn series(&self, terms: usize) -> Vec<BigRational> {
        self.f.series(terms).expect("denominator is 1 at t = 0")
    }

    /// Generating function of the lazy walk, `2/(2-t) · f(t/(2-t))`.
    pub fn lazy(&self) -> Result<Self, ExactError> {
        if self.lazy {
            return Err(ExactError::AlreadyLazy);
        }
        let two_minus_t = IntPoly::from_i64s(&[2, -1]);
        let inner = self.f.compose(&IntPoly::x(), &two_minus_t).expect("nonzero");
        let outer = RatFun::from_i64s(&[2], &[2, -1]).expect("nonzero");
        Ok(GenFun {
            f: &outer * &inner,
            lazy: true,
        })
    }

    /// Generating function of the walk observed every other step:
    /// `F` with `F(t²) = (f(t) + f(-t)) / 2`.
    pub fn every_other(&self) -> Self {
        let flipped = self
            .f
            .compose(&IntPoly::from_i64s(&[0, -1]), &IntPoly::one())
            .expect("nonzero");
        let sum = &self.f + &flipped;
        let half = &sum * &RatFun::from_i64s(&[1], &[2]).expect("nonzero");
        GenFun {
            f: half.even_part().expect("f(t) + f(-t) is even"),
            lazy: self.lazy,
        }
    }
}

/// `f(t) = d(r) · det(Δ' - tA') / det(Δ - tA)`, where `Δ` and `A` are the
/// degree and adjacency matrices and primes delete the root's row and
/// column. Both determinants are integer polynomials.
pub fn return_gen_fun(g: &RootedGraph) -> GenFun {
    let full = pencil(g, None);
    let minor = pencil(g, Some(g.root()));
    let num = poly_determinant(minor).scale(&BigInt::from(g.root_degree()));
    let den = poly_determinant(full);
    let f = RatFun::new(num, den).expect("det(Δ - tA) is nonzero at t = 0");
    GenFun::from_ratfun(f, false).expect("P_0 = 1")
}

fn pencil(g: &RootedGraph, skip: Option<usize>) -> Vec<Vec<IntPoly>> {
    let keep: Vec<usize> = (0..g.n()).filter(|&v| Some(v) != skip).collect();
    keep.iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| {
                    if i == j {
                        IntPoly::from_i64s(&[g.degree(i) as i64])
                    } else if g.neighbors(i).binary_search(&j).is_ok() {
                        IntPoly::from_i64s(&[0, -1])
                    } else {
                        IntPoly::zero()
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleEigenvalues {
    /// Nonzero nondegenerate eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Whether 0 is a nondegenerate eigenvalue (`f` stays positive at infinity).
    pub zero_nondegenerate: bool,
}

/// Nondegenerate eigenvalues read off `f`: the reciprocals of the poles,
/// plus 0 exactly when numerator and denominator have equal degree.
pub fn poles_to_eigenvalues(fgen: &GenFun) -> Result<PoleEigenvalues, ExactError> {
    let f = fgen.ratfun();
    let mut eigenvalues: Vec<f64> = real_roots(f.denominator())?.into_iter().map(|x| 1.0 / x).collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Ok(PoleEigenvalues {
        eigenvalues,
        zero_nondegenerate: f.numerator().degree() == f.denominator().degree(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::transition_series;
    use crate::graph::{build_family, Family};

    #[test]
    fn edge_generating_function() {
        let k2 = build_family(Family::Complete, 2).unwrap();
        let f = return_gen_fun(&k2);
        assert_eq!(f.ratfun(), &RatFun::from_i64s(&[1], &[1, 0, -1]).unwrap());
        let poles = poles_to_eigenvalues(&f).unwrap();
        assert_eq!(poles.eigenvalues, vec![1.0, -1.0]);
        assert!(!poles.zero_nondegenerate);
    }

    #[test]
    fn triangle_series_matches_iteration() {
        let tri = build_family(Family::Cycle, 3).unwrap();
        let f = return_gen_fun(&tri);
        assert_eq!(f.series(51), transition_series(&tri, 50).p);
    }

    #[test]
    fn lazy_and_every_other_transforms() {
        let c4 = build_family(Family::Cycle, 4).unwrap();
        let f = return_gen_fun(&c4);
        let lazy = f.lazy().unwrap();
        let direct = crate::exact::lazy_transition_series(&c4, 40);
        assert_eq!(lazy.series(41), direct.p);
        assert!(lazy.lazy().is_err());
        let even = f.every_other();
        let p = transition_series(&c4, 40).p;
        let every: Vec<_> = p.iter().step_by(2).cloned().collect();
        assert_eq!(even.series(21), every);
    }

    #[test]
    fn rejects_non_generating_functions() {
        let g = RatFun::from_i64s(&[2], &[1, -1]).unwrap();
        assert_eq!(GenFun::from_ratfun(g, false), Err(ExactError::NotAGenFun));
    }
}
