use super::TreeHandle;

/// AHU encoding of a rooted tree: every vertex becomes `(` followed by the
/// sorted encodings of its children and `)`. Two rooted trees are
/// isomorphic iff their encodings are equal.
pub fn tree_canonical_form(tree: &TreeHandle) -> String {
    let children = tree.children();
    let mut order = Vec::with_capacity(tree.n());
    let mut stack = vec![tree.root()];
    while let Some(u) = stack.pop() {
        order.push(u);
        stack.extend(children[u].iter().copied());
    }
    let mut code: Vec<String> = vec![String::new(); tree.n()];
    for &u in order.iter().rev() {
        let mut parts: Vec<String> = children[u].iter().map(|&c| std::mem::take(&mut code[c])).collect();
        parts.sort_unstable();
        let mut s = String::with_capacity(2 + parts.iter().map(String::len).sum::<usize>());
        s.push('(');
        for p in parts {
            s.push_str(&p);
        }
        s.push(')');
        code[u] = s;
    }
    std::mem::take(&mut code[tree.root()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_gab, RootedGraph};

    #[test]
    fn relabeling_does_not_change_the_code() {
        let a =
            TreeHandle::try_from(RootedGraph::from_edge_list(&[(0, 1), (1, 2), (1, 3), (3, 4)], 0).unwrap()).unwrap();
        let b =
            TreeHandle::try_from(RootedGraph::from_edge_list(&[(9, 5), (5, 8), (8, 7), (5, 6)], 9).unwrap()).unwrap();
        assert_eq!(tree_canonical_form(&a), tree_canonical_form(&b));
    }

    #[test]
    fn root_choice_matters() {
        let path = build_gab(2, 2).unwrap();
        let from_middle = TreeHandle::try_from(path.graph().rerooted(1).unwrap()).unwrap();
        assert_ne!(tree_canonical_form(&path), tree_canonical_form(&from_middle));
        assert_eq!(tree_canonical_form(&path), "(((())))");
    }
}
