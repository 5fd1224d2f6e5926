use num_bigint::BigInt;
use num_rational::BigRational;

use super::{real_roots, IntPoly, RatFun, RatFunError};
use crate::exact::{first_return_series, return_gen_fun, GenFun};
use crate::graph::TreeHandle;

/// `(1 + h) / (1 + (1 - x) h)`: the function of a tree after a new leaf is
/// attached to its root and made the root.
fn add_root(h: &RatFun) -> RatFun {
    let one = RatFun::one();
    let one_minus_x = RatFun::from_poly(IntPoly::from_i64s(&[1, -1]));
    let num = &one + h;
    let den = &one + &(&one_minus_x * h);
    (&num / &den).expect("1 + (1 - x) h is 1 at x = 0")
}

/// `h_G(x) = d(r) Σ z_{2k} x^k`, built structurally: children of a vertex
/// contribute additively, and each child subtree enters through [`add_root`].
pub fn h_of_tree(tree: &TreeHandle) -> RatFun {
    let children = tree.children();
    let mut order = Vec::with_capacity(tree.n());
    let mut stack = vec![tree.root()];
    while let Some(u) = stack.pop() {
        order.push(u);
        stack.extend(children[u].iter().copied());
    }
    // A single vertex has h = 0; add_root(0) = 1 is the single edge.
    let mut h = vec![RatFun::zero(); tree.n()];
    for &u in order.iter().rev() {
        let mut acc = RatFun::zero();
        for &c in &children[u] {
            acc = &acc + &add_root(&h[c]);
        }
        h[u] = acc;
    }
    h.swap_remove(tree.root())
}

/// The first `terms` coefficients `d(r) z_{2k}`, from the exact survival
/// series of the walk.
pub fn h_from_series(tree: &TreeHandle, terms: usize) -> Vec<BigRational> {
    let f = return_gen_fun(tree.graph());
    let table = first_return_series(&f, tree.n(), 2 * terms);
    let z = table.z.expect("first_return_series fills z");
    let d = BigRational::from_integer(BigInt::from(tree.root_degree()));
    (0..terms).map(|k| &z[2 * k] * &d).collect()
}

/// `h(x) = d / ((1 - x) F(x))` where `f(t) = F(t²)`; `None` when `f` is not
/// even, i.e. the graph is not bipartite.
pub fn h_from_genfun(fgen: &GenFun, d_root: usize) -> Option<RatFun> {
    let big_f = fgen.ratfun().even_part()?;
    let one_minus_x = RatFun::from_poly(IntPoly::from_i64s(&[1, -1]));
    let d = RatFun::from_i64(d_root as i64);
    Some((&d / &(&one_minus_x * &big_f)).expect("F(0) = 1"))
}

/// Real roots of the numerator of `h`.
pub fn h_numerator_roots(h: &RatFun) -> Result<Vec<f64>, RatFunError> {
    real_roots(h.numerator())
}

/// `±1/√x` for each positive root `x`, descending.
pub fn eigenvalues_from_h_roots(roots: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = roots
        .iter()
        .filter(|&&x| x > 0.0)
        .flat_map(|&x| {
            let l = 1.0 / x.sqrt();
            [l, -l]
        })
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{attach_new_root, build_gab, glue_at_roots};
    use proptest::prelude::*;

    fn gab_formula(a: i64, b: i64) -> RatFun {
        RatFun::from_i64s(&[a * b, -(b - 1)], &[a * b, -(a * b - 1)]).unwrap()
    }

    #[test]
    fn single_edge_and_path() {
        assert_eq!(h_of_tree(&build_gab(1, 1).unwrap()), RatFun::one());
        assert_eq!(h_of_tree(&build_gab(1, 4).unwrap()), RatFun::one());
        let p4 = build_gab(2, 2).unwrap();
        assert_eq!(h_of_tree(&p4), RatFun::from_i64s(&[4, -1], &[4, -3]).unwrap());
        assert_eq!(h_of_tree(&build_gab(3, 5).unwrap()), gab_formula(3, 5));
    }

    #[test]
    fn series_route_agrees() {
        let p4 = build_gab(2, 2).unwrap();
        let s = h_from_series(&p4, 3);
        assert_eq!(
            s,
            vec![
                BigRational::from_integer(1.into()),
                BigRational::new(1.into(), 2.into()),
                BigRational::new(3.into(), 8.into()),
            ]
        );
        let edge = build_gab(1, 1).unwrap();
        let s = h_from_series(&edge, 5);
        assert_eq!(s[0], BigRational::from_integer(1.into()));
        assert!(s[1..].iter().all(|c| c == &BigRational::from_integer(0.into())));
    }

    #[test]
    fn genfun_route_and_roots() {
        let p4 = build_gab(2, 2).unwrap();
        let h = h_from_genfun(&return_gen_fun(p4.graph()), p4.root_degree()).unwrap();
        assert_eq!(h, h_of_tree(&p4));
        let roots = h_numerator_roots(&h).unwrap();
        assert_eq!(roots, vec![4.0]);
        assert_eq!(eigenvalues_from_h_roots(&roots), vec![0.5, -0.5]);
        let tri = crate::graph::build_family(crate::graph::Family::Cycle, 3).unwrap();
        assert!(h_from_genfun(&return_gen_fun(&tri), 2).is_none());
    }

    fn arb_tree() -> impl Strategy<Value = TreeHandle> {
        (2usize..9, any::<u64>()).prop_map(|(n, seed)| {
            // random recursive tree: vertex i attaches to a pseudo-random earlier one
            let mut x = seed | 1;
            let edges: Vec<(usize, usize)> = (1..n)
                .map(|i| {
                    x ^= x << 13;
                    x ^= x >> 7;
                    x ^= x << 17;
                    ((x % i as u64) as usize, i)
                })
                .collect();
            let root = (seed as usize) % n;
            TreeHandle::try_from(crate::graph::RootedGraph::from_indexed_edges(n, &edges, root).unwrap()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn gluing_adds(a in arb_tree(), b in arb_tree()) {
            let glued = glue_at_roots(&[(a.clone(), 1), (b.clone(), 1)]).unwrap();
            prop_assert_eq!(h_of_tree(&glued), &h_of_tree(&a) + &h_of_tree(&b));
        }

        #[test]
        fn attaching_a_root_applies_the_formula(t in arb_tree()) {
            let lifted = attach_new_root(&t);
            prop_assert_eq!(h_of_tree(&lifted), add_root(&h_of_tree(&t)));
        }

        #[test]
        fn structural_and_genfun_routes_agree(t in arb_tree()) {
            let via_f = h_from_genfun(&return_gen_fun(t.graph()), t.root_degree()).unwrap();
            prop_assert_eq!(via_f, h_of_tree(&t));
        }
    }
}
