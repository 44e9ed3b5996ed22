#![allow(dead_code)]

use oddfan::Graph;
use proptest::prelude::*;

/// Graphs on up to `max_order` vertices with arbitrary edge sets.
pub fn graph(max_order: usize) -> impl Strategy<Value = Graph> {
    (0..=max_order).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut it = bits.into_iter();
            Graph::from_fn(n, |_, _| it.next().unwrap_or(false))
        })
    })
}

/// All subsets of `0..n` as bitmasks, for brute-force checks.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
}

pub fn brute_independence(g: &Graph) -> usize {
    subsets(g.order())
        .filter(|s| g.is_independent(s))
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

pub fn brute_matching(g: &Graph) -> usize {
    fn go(g: &Graph, used: &mut Vec<bool>, from: usize) -> usize {
        let Some(u) = (from..g.order()).find(|&u| !used[u]) else {
            return 0;
        };
        used[u] = true;
        let mut best = go(g, used, u + 1);
        for v in g.neighbor_iter(u).filter(|&v| !used[v]).collect::<Vec<_>>() {
            used[v] = true;
            best = best.max(1 + go(g, used, u + 1));
            used[v] = false;
        }
        used[u] = false;
        best
    }
    go(g, &mut vec![false; g.order()], 0)
}
