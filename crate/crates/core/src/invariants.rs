//! Exact independence number and matching number.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Orders up to which the default budget is expected to finish on any input.
pub const EXACT_ORDER_CEILING: usize = 64;

const DEFAULT_NODE_LIMIT: u64 = 200_000_000;

/// A set of pairwise disjoint edges, each stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks that every pair is an edge of `g` and no vertex repeats.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut seen = FixedBitSet::with_capacity(g.order());
        for &(u, v) in &self.edges {
            if !g.has_edge(u, v) {
                return Err(Error::InvalidMatching(format!("{u}-{v} is not an edge")));
            }
            for w in [u, v] {
                if seen.put(w) {
                    return Err(Error::InvalidMatching(format!("vertex {w} is matched twice")));
                }
            }
        }
        Ok(())
    }

    pub fn matched_vertices(&self) -> VertexSet {
        self.edges.iter().flat_map(|&(u, v)| [u, v]).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndependentSet {
    pub members: VertexSet,
}

impl IndependentSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Node-expansion limit for the independent set search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: None };

    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::nodes(DEFAULT_NODE_LIMIT)
    }
}

/// The search ran out of budget; `best` is only a lower bound on α.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("independent set search exceeded {nodes} nodes; best lower bound {}", best.len())]
pub struct BudgetExceeded {
    pub best: IndependentSet,
    pub nodes: u64,
}

/// Maximum independent set by branch and bound: a maximum clique search in
/// the complement, bounded by greedy colouring of the complement (a clique
/// cover of `g`).
pub fn max_independent_set(g: &Graph, budget: Budget) -> std::result::Result<IndependentSet, BudgetExceeded> {
    let n = g.order();
    let comp: Vec<FixedBitSet> = (0..n)
        .map(|v| {
            let mut bits = g.neighbors(v).clone();
            bits.toggle_range(..);
            bits.set(v, false);
            bits
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(comp[v].count_ones(..)), v));

    let mut search = CliqueSearch {
        adj: &comp,
        best: greedy_clique(&comp, &order),
        current: Vec::new(),
        nodes: 0,
        limit: budget.max_nodes,
        exceeded: false,
    };
    search.expand(order);

    let best = IndependentSet {
        members: VertexSet::new(search.best),
    };
    if search.exceeded {
        Err(BudgetExceeded {
            best,
            nodes: search.nodes,
        })
    } else {
        Ok(best)
    }
}

/// α(g) with no node limit.
pub fn independence_number(g: &Graph) -> usize {
    match max_independent_set(g, Budget::UNLIMITED) {
        Ok(set) => set.len(),
        Err(_) => unreachable!("unlimited budget"),
    }
}

fn greedy_clique(adj: &[FixedBitSet], order: &[usize]) -> Vec<usize> {
    let mut clique: Vec<usize> = Vec::new();
    for &v in order {
        if clique.iter().all(|&u| adj[u].contains(v)) {
            clique.push(v);
        }
    }
    clique
}

struct CliqueSearch<'a> {
    adj: &'a [FixedBitSet],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    limit: Option<u64>,
    exceeded: bool,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, candidates: Vec<usize>) {
        self.nodes += 1;
        if self.limit.is_some_and(|l| self.nodes > l) {
            self.exceeded = true;
            return;
        }
        let (order, colours) = self.colour_sort(&candidates);
        for i in (0..order.len()).rev() {
            if self.exceeded || self.current.len() + colours[i] <= self.best.len() {
                return;
            }
            let v = order[i];
            self.current.push(v);
            let next: Vec<usize> = order[..i]
                .iter()
                .copied()
                .filter(|&u| self.adj[v].contains(u))
                .collect();
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
        }
    }

    /// Greedy sequential colouring; returns vertices grouped by colour with
    /// the (1-based) colour of each position, non-decreasing.
    fn colour_sort(&self, candidates: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in candidates {
            match classes
                .iter_mut()
                .find(|class| class.iter().all(|&u| !self.adj[v].contains(u)))
            {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(candidates.len());
        let mut colours = Vec::with_capacity(candidates.len());
        for (c, class) in classes.into_iter().enumerate() {
            colours.extend(std::iter::repeat_n(c + 1, class.len()));
            order.extend(class);
        }
        (order, colours)
    }
}

const UNMATCHED: usize = usize::MAX;

/// Maximum-cardinality matching by Edmonds' blossom algorithm.
///
/// Roots are tried in ascending id order and neighbours are scanned in
/// ascending order, so the result is a deterministic function of `g`.
pub fn max_matching(g: &Graph) -> Matching {
    let n = g.order();
    let mut blossom = Blossom {
        g,
        mate: vec![UNMATCHED; n],
        parent: vec![UNMATCHED; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    for root in 0..n {
        if blossom.mate[root] == UNMATCHED {
            if let Some(end) = blossom.find_path(root) {
                blossom.augment(end);
            }
        }
    }
    let edges = (0..n)
        .filter_map(|v| {
            let m = blossom.mate[v];
            (m != UNMATCHED && v < m).then_some((v, m))
        })
        .collect();
    Matching { edges }
}

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == UNMATCHED {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = UNMATCHED);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);

        while let Some(v) = self.queue.pop_front() {
            let neighbours: Vec<usize> = self.g.neighbor_iter(v).collect();
            for to in neighbours {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != UNMATCHED && self.parent[self.mate[to]] != UNMATCHED) {
                    // Odd cycle: contract the blossom onto its base.
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == UNMATCHED {
                    self.parent[to] = v;
                    if self.mate[to] == UNMATCHED {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != UNMATCHED {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// The vertices a maximal matching leaves uncovered. They are pairwise
/// non-adjacent, which is the constructive content of `α(G) >= n - 2ν(G)`.
pub fn greedy_independent_from_matching(g: &Graph, m: &Matching) -> Result<IndependentSet> {
    m.validate(g)?;
    let matched = m.matched_vertices().to_bits(g.order());
    let free: Vec<usize> = (0..g.order()).filter(|&v| !matched.contains(v)).collect();
    for (i, &u) in free.iter().enumerate() {
        if let Some(&v) = free[i + 1..].iter().find(|&&v| g.has_edge(u, v)) {
            return Err(Error::MatchingNotMaximal(u, v));
        }
    }
    Ok(IndependentSet {
        members: VertexSet::new(free),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, petersen, star};

    #[test]
    fn independence_examples() {
        assert_eq!(independence_number(&cycle(5)), 2);
        assert_eq!(independence_number(&Graph::complete(7)), 1);
        assert_eq!(independence_number(&Graph::empty(6)), 6);
        assert_eq!(independence_number(&Graph::empty(0)), 0);
        // Exhaustive enumeration over all 2^10 subsets of the Petersen graph.
        let p = petersen();
        let brute = (0u32..1 << 10)
            .filter(|mask| {
                let s: Vec<usize> = (0..10).filter(|&i| mask >> i & 1 == 1).collect();
                p.is_independent(&s)
            })
            .map(u32::count_ones)
            .max()
            .unwrap();
        assert_eq!(brute, 4);
        let mis = max_independent_set(&p, Budget::default()).unwrap();
        assert_eq!(mis.len(), 4);
        assert!(p.is_independent(mis.members.as_slice()));
    }

    #[test]
    fn budget_exceeded_reports_lower_bound() {
        let g = crate::generators::gnp_random(40, 0.5, 3).unwrap();
        let err = max_independent_set(&g, Budget::nodes(2)).unwrap_err();
        assert!(!err.best.is_empty());
        assert!(g.is_independent(err.best.members.as_slice()));
    }

    #[test]
    fn matching_examples() {
        assert_eq!(max_matching(&cycle(5)).len(), 2);
        assert_eq!(max_matching(&Graph::complete(4)).len(), 2);
        let pm = max_matching(&petersen());
        assert_eq!(pm.len(), 5);
        pm.validate(&petersen()).unwrap();
        assert_eq!(max_matching(&Graph::empty(3)).len(), 0);
    }

    #[test]
    fn matching_needs_blossom_contraction() {
        // Triangle 0-1-2 with pendant paths 2-3 and 0-4-5: greedy along the
        // triangle blocks the augmenting path through the odd cycle.
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (0, 4), (4, 5)]).unwrap();
        assert_eq!(max_matching(&g).len(), 3);
    }

    #[test]
    fn greedy_independent_examples() {
        let c5 = cycle(5);
        let free = greedy_independent_from_matching(&c5, &max_matching(&c5)).unwrap();
        assert_eq!(free.len(), 1);

        let k4 = Graph::complete(4);
        assert!(greedy_independent_from_matching(&k4, &max_matching(&k4))
            .unwrap()
            .is_empty());

        let s = star(5);
        let m = Matching { edges: vec![(0, 1)] };
        let free = greedy_independent_from_matching(&s, &m).unwrap();
        assert_eq!(free.members, VertexSet::new([2, 3, 4, 5]));
    }

    #[test]
    fn greedy_independent_rejects_non_maximal() {
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let m = Matching { edges: vec![(1, 2)] };
        assert!(greedy_independent_from_matching(&p4, &m).is_ok());
        let empty = Matching::default();
        assert_eq!(
            greedy_independent_from_matching(&p4, &empty),
            Err(Error::MatchingNotMaximal(0, 1))
        );
        let bogus = Matching { edges: vec![(0, 2)] };
        assert!(matches!(
            greedy_independent_from_matching(&p4, &bogus),
            Err(Error::InvalidMatching(_))
        ));
    }
}
