use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use super::{h_of_tree, IntPoly, RatFun};
use crate::graph::{attach_new_root, build_gab, glue_at_roots, tree_canonical_form, GraphError, TreeHandle};
use crate::linalg::rational_nullspace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForgeError {
    #[error("{k} has fewer than three factorizations k = a·b; pick a composite k >= 4")]
    NoThreeDivisorPairs { k: usize },
    #[error("the h-functions of the chosen trees are linearly independent")]
    NoDependency,
    #[error("dependency {0:?} does not have exactly three nonzero terms")]
    DegenerateDependency(Vec<BigInt>),
    #[error("dependency coefficient {0} is too large to glue")]
    CoefficientTooLarge(BigInt),
    #[error("forged trees failed verification: {0}")]
    VerificationFailed(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Integer `c` with `Σ c_i funs_i = 0`, content 1 and first nonzero entry
/// positive; `None` if the functions are linearly independent over `Q`.
pub fn find_dependency(funs: &[RatFun]) -> Option<Vec<BigInt>> {
    if funs.len() < 2 {
        return None;
    }
    // Over the common denominator Π den_j, function i has numerator
    // num_i · Π_{j≠i} den_j; a dependency is a kernel vector of the
    // coefficient matrix of these numerators.
    let numerators: Vec<IntPoly> = (0..funs.len())
        .map(|i| {
            funs.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(funs[i].numerator().clone(), |acc, (_, f)| &acc * f.denominator())
        })
        .collect();
    let rows = numerators.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let matrix: Vec<Vec<BigRational>> = (0..rows)
        .map(|d| {
            numerators
                .iter()
                .map(|p| BigRational::from_integer(p.coeff(d)))
                .collect()
        })
        .collect();
    let kernel = rational_nullspace(matrix, funs.len());
    let v = kernel.into_iter().next()?;
    let lcm = v.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if ints.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative) {
        content = -content;
    }
    for c in ints.iter_mut() {
        *c = &*c / &content;
    }
    Some(ints)
}

/// Two non-isomorphic rooted trees with the same `h`, hence the same
/// return-time distribution and root degree.
#[derive(Debug, Clone)]
pub struct ForgedPair {
    pub left: TreeHandle,
    pub right: TreeHandle,
    /// The `(a, b)` parameters of the three `G_{a,b}` building blocks.
    pub pairs: Vec<(usize, usize)>,
    pub dependency: Vec<BigInt>,
    pub h: RatFun,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForgeCertificate {
    pub k: usize,
    pub h_equal: bool,
    pub pairs: Vec<(usize, usize)>,
    pub dependency: Vec<String>,
    pub h: RatFun,
    pub left_canonical: String,
    pub right_canonical: String,
}

impl ForgedPair {
    pub fn certificate(&self, k: usize) -> ForgeCertificate {
        ForgeCertificate {
            k,
            h_equal: h_of_tree(&self.left) == h_of_tree(&self.right),
            pairs: self.pairs.clone(),
            dependency: self.dependency.iter().map(ToString::to_string).collect(),
            h: self.h.clone(),
            left_canonical: tree_canonical_form(&self.left),
            right_canonical: tree_canonical_form(&self.right),
        }
    }
}

fn smallest_prime_factor(k: usize) -> Option<usize> {
    (2..).take_while(|p| p * p <= k).find(|p| k % p == 0)
}

/// Glue copies of `G_{1,k}`, `G_{p,k/p}`, `G_{k,1}` (`p` the smallest prime
/// factor of `k`) according to the sign of their dependency coefficients,
/// then attach a new root to both sides.
pub fn forge_tree_pair(k: usize) -> Result<ForgedPair, ForgeError> {
    let p = match smallest_prime_factor(k) {
        Some(p) if k >= 4 => p,
        _ => return Err(ForgeError::NoThreeDivisorPairs { k }),
    };
    let pairs = vec![(1, k), (p, k / p), (k, 1)];
    let blocks: Vec<TreeHandle> = pairs.iter().map(|&(a, b)| build_gab(a, b)).collect::<Result<_, _>>()?;
    let hs: Vec<RatFun> = blocks.iter().map(h_of_tree).collect();
    let dependency = find_dependency(&hs).ok_or(ForgeError::NoDependency)?;
    if dependency.iter().filter(|c| !c.is_zero()).count() != 3 {
        return Err(ForgeError::DegenerateDependency(dependency));
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (block, c) in blocks.iter().zip(&dependency) {
        let copies = c
            .abs()
            .to_usize()
            .ok_or_else(|| ForgeError::CoefficientTooLarge(c.clone()))?;
        let side = if c.is_positive() { &mut left } else { &mut right };
        side.push((block.clone(), copies));
    }
    let left = attach_new_root(&glue_at_roots(&left)?);
    let right = attach_new_root(&glue_at_roots(&right)?);
    let h = h_of_tree(&left);
    if h != h_of_tree(&right) {
        return Err(ForgeError::VerificationFailed("h functions differ"));
    }
    if tree_canonical_form(&left) == tree_canonical_form(&right) {
        return Err(ForgeError::VerificationFailed("trees are isomorphic"));
    }
    Ok(ForgedPair {
        left,
        right,
        pairs,
        dependency,
        h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn dependencies() {
        let h = |a, b| h_of_tree(&build_gab(a, b).unwrap());
        assert_eq!(find_dependency(&[h(1, 4), h(2, 2), h(4, 1)]), Some(ints(&[1, -3, 2])));
        assert_eq!(find_dependency(&[RatFun::one(), RatFun::one()]), Some(ints(&[1, -1])));
        let geo = RatFun::from_i64s(&[0, 1], &[1, -1]).unwrap();
        assert_eq!(find_dependency(&[RatFun::one(), geo]), None);
        assert_eq!(find_dependency(&[RatFun::one()]), None);
    }

    #[test]
    fn forge_four_gives_the_eleven_vertex_pair() {
        let pair = forge_tree_pair(4).unwrap();
        assert_eq!(pair.dependency, ints(&[1, -3, 2]));
        assert_eq!((pair.left.n(), pair.right.n()), (11, 11));
        assert_eq!((pair.left.root_degree(), pair.right.root_degree()), (1, 1));
        let cert = pair.certificate(4);
        assert!(cert.h_equal);
        assert_ne!(cert.left_canonical, cert.right_canonical);
    }

    #[test]
    fn forge_six_and_bad_inputs() {
        let pair = forge_tree_pair(6).unwrap();
        assert_eq!(pair.pairs, vec![(1, 6), (2, 3), (6, 1)]);
        assert_eq!(pair.dependency, ints(&[2, -5, 3]));
        for k in [0, 1, 2, 3, 5, 7, 13] {
            assert_eq!(forge_tree_pair(k).unwrap_err(), ForgeError::NoThreeDivisorPairs { k });
        }
    }
}
