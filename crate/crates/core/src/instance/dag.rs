//! Reachability utilities over small task DAGs.
//!
//! Nodes are `0..n`. Closures are kept as one bit row per node, which is
//! compact enough for the instance sizes seen in line balancing (a few
//! hundred tasks at most).

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DagError {
    #[error("cyclic precedence")]
    Cycle,
    #[error("node {node} out of range (n = {n})")]
    OutOfRange { node: usize, n: usize },
}

fn check_range(edges: &[(usize, usize)], n: usize) -> Result<(), DagError> {
    for &(a, b) in edges {
        for node in [a, b] {
            if node >= n {
                return Err(DagError::OutOfRange { node, n });
            }
        }
    }
    Ok(())
}

/// Kahn's algorithm; smallest ready node first so the order is canonical.
pub fn topological_order(edges: &[(usize, usize)], n: usize) -> Result<Vec<usize>, DagError> {
    check_range(edges, n)?;
    let mut indegree = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        out[a].push(b);
        indegree[b] += 1;
    }
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| indegree[v] == 0).map(std::cmp::Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(v)) = ready.pop() {
        order.push(v);
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(std::cmp::Reverse(w));
            }
        }
    }
    if order.len() != n {
        return Err(DagError::Cycle);
    }
    Ok(order)
}

/// Row `a` holds every node reachable from `a` through at least one edge.
pub fn reachability(edges: &[(usize, usize)], n: usize) -> Result<Vec<FixedBitSet>, DagError> {
    let order = topological_order(edges, n)?;
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        out[a].push(b);
    }
    let mut rows = vec![FixedBitSet::with_capacity(n); n];
    for &v in order.iter().rev() {
        let mut row = FixedBitSet::with_capacity(n);
        for &w in &out[v] {
            row.insert(w);
            row.union_with(&rows[w]);
        }
        rows[v] = row;
    }
    Ok(rows)
}

fn rows_to_pairs(rows: &[FixedBitSet]) -> Vec<(usize, usize)> {
    rows.iter()
        .enumerate()
        .flat_map(|(a, row)| row.ones().map(move |b| (a, b)))
        .collect()
}

/// All pairs `(a, b)` with `b` reachable from `a`, sorted.
pub fn transitive_closure(edges: &[(usize, usize)], n: usize) -> Result<Vec<(usize, usize)>, DagError> {
    Ok(rows_to_pairs(&reachability(edges, n)?))
}

/// The unique minimal edge set with the same closure, sorted.
///
/// An arc `(a, b)` of the closure survives iff no direct successor `c != b`
/// of `a` (in the closure) reaches `b`.
pub fn transitive_reduction(edges: &[(usize, usize)], n: usize) -> Result<Vec<(usize, usize)>, DagError> {
    let rows = reachability(edges, n)?;
    let mut reduced = Vec::new();
    for (a, row) in rows.iter().enumerate() {
        let mut implied = FixedBitSet::with_capacity(n);
        for c in row.ones() {
            implied.union_with(&rows[c]);
        }
        for b in row.ones() {
            if !implied.contains(b) {
                reduced.push((a, b));
            }
        }
    }
    Ok(reduced)
}

#[cfg(test)]
mod tests {
    use super::*;

    // 0-based edges of the fig1 fixture
    fn fig1() -> Vec<(usize, usize)> {
        vec![(0, 1), (0, 2), (2, 3), (2, 4), (1, 4), (4, 5)]
    }

    /// Floyd-Warshall style reachability, independent of the DFS/topological route.
    fn closure_oracle(edges: &[(usize, usize)], n: usize) -> Vec<(usize, usize)> {
        let mut m = vec![vec![false; n]; n];
        for &(a, b) in edges {
            m[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if m[i][k] && m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if m[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn fig1_closure_has_eleven_arcs() {
        let closure = transitive_closure(&fig1(), 6).unwrap();
        assert_eq!(closure, closure_oracle(&fig1(), 6));
        assert_eq!(closure.len(), 11);
        let mut expected = fig1();
        expected.extend([(0, 3), (0, 4), (0, 5), (1, 5), (2, 5)]);
        expected.sort();
        assert_eq!(closure, expected);
    }

    #[test]
    fn small_closures() {
        assert!(transitive_closure(&[], 3).unwrap().is_empty());
        assert_eq!(
            transitive_closure(&[(0, 1), (1, 2)], 3).unwrap(),
            vec![(0, 1), (0, 2), (1, 2)]
        );
    }

    #[test]
    fn reduction_recovers_fig1() {
        let closure = transitive_closure(&fig1(), 6).unwrap();
        let mut expected = fig1();
        expected.sort();
        assert_eq!(transitive_reduction(&closure, 6).unwrap(), expected);
        assert_eq!(
            transitive_reduction(&[(0, 1), (1, 2), (0, 2)], 3).unwrap(),
            vec![(0, 1), (1, 2)]
        );
        assert!(transitive_reduction(&[], 4).unwrap().is_empty());
    }

    #[test]
    fn cycles_are_rejected() {
        assert_eq!(transitive_closure(&[(0, 1), (1, 0)], 2), Err(DagError::Cycle));
        assert_eq!(transitive_reduction(&[(2, 2)], 3), Err(DagError::Cycle));
        assert!(matches!(
            transitive_closure(&[(0, 5)], 2),
            Err(DagError::OutOfRange { node: 5, .. })
        ));
    }

    #[test]
    fn topological_order_is_canonical() {
        assert_eq!(topological_order(&fig1(), 6).unwrap(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(topological_order(&[(2, 0)], 3).unwrap(), vec![1, 2, 0]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn dag() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
            (1usize..=12).prop_flat_map(|n| {
                let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
                let len = pairs.len();
                (Just(n), Just(pairs), proptest::collection::vec(any::<bool>(), len)).prop_map(|(n, pairs, mask)| {
                    let edges = pairs
                        .into_iter()
                        .zip(mask)
                        .filter_map(|(p, keep)| keep.then_some(p))
                        .collect();
                    (n, edges)
                })
            })
        }

        proptest! {
            #[test]
            fn closure_matches_oracle((n, edges) in dag()) {
                prop_assert_eq!(transitive_closure(&edges, n).unwrap(), closure_oracle(&edges, n));
            }

            #[test]
            fn reduction_of_closure_equals_reduction((n, edges) in dag()) {
                let closure = transitive_closure(&edges, n).unwrap();
                let reduced = transitive_reduction(&edges, n).unwrap();
                prop_assert_eq!(transitive_reduction(&closure, n).unwrap(), reduced.clone());
                prop_assert_eq!(closure_oracle(&reduced, n), closure);
                // minimality: dropping any arc changes the closure
                for i in 0..reduced.len() {
                    let mut fewer = reduced.clone();
                    fewer.remove(i);
                    prop_assert_ne!(closure_oracle(&fewer, n), closure_oracle(&reduced, n));
                }
            }
        }
    }
}
