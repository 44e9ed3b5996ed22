//! Immutable simple graphs on dense vertex ids `0..n`.
//!
//! Adjacency is stored as one bitset per vertex so that neighbourhood
//! intersections (common neighbours, clique extension) cost `O(n / 64)`.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    /// The full vertex set `0..n`.
    pub fn range(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn from_bits(bits: &FixedBitSet) -> Self {
        VertexSet(bits.ones().collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn with(&self, v: usize) -> Self {
        let mut out = self.clone();
        if let Err(pos) = out.0.binary_search(&v) {
            out.0.insert(pos, v);
        }
        out
    }

    pub fn without(&self, v: usize) -> Self {
        VertexSet(self.0.iter().copied().filter(|&u| u != v).collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.iter().filter(|&v| other.contains(v)).count()
    }

    /// Fails with the first id `>= order`.
    pub fn check_range(&self, order: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= order => Err(Error::VertexOutOfRange { vertex: v, order }),
            _ => Ok(()),
        }
    }

    pub fn to_bits(&self, order: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(order);
        for v in self.iter() {
            bits.insert(v);
        }
        bits
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Accumulates edges for a graph under construction. Adding an edge twice is
/// a no-op; strict validation lives in [`Graph::from_edges`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    adjacency: Vec<FixedBitSet>,
}

impl GraphBuilder {
    pub fn new(order: usize) -> Self {
        GraphBuilder {
            adjacency: (0..order).map(|_| FixedBitSet::with_capacity(order)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    /// Panics on self-loops and out-of-range ids.
    pub fn connect(&mut self, u: usize, v: usize) -> &mut Self {
        assert!(u != v, "self-loop at {u}");
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        self
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adjacency[v]
    }

    pub fn build(self) -> Graph {
        let size = self.adjacency.iter().map(|a| a.count_ones(..)).sum::<usize>() / 2;
        Graph {
            adjacency: self.adjacency,
            size,
        }
    }
}

/// An immutable simple graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<FixedBitSet>,
    size: usize,
}

impl Graph {
    pub fn empty(order: usize) -> Self {
        GraphBuilder::new(order).build()
    }

    pub fn complete(order: usize) -> Self {
        Graph::from_fn(order, |_, _| true)
    }

    /// Builds a graph from an edge list, rejecting self-loops, repeated
    /// edges (in either orientation) and ids outside `0..order`.
    pub fn from_edges<I>(order: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut builder = GraphBuilder::new(order);
        for (u, v) in edges {
            for w in [u, v] {
                if w >= order {
                    return Err(Error::VertexOutOfRange { vertex: w, order });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if builder.has_edge(u, v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            builder.connect(u, v);
        }
        Ok(builder.build())
    }

    /// Includes `uv` (with `u < v`) whenever `keep(u, v)` holds.
    pub fn from_fn(order: usize, mut keep: impl FnMut(usize, usize) -> bool) -> Self {
        let mut builder = GraphBuilder::new(order);
        for v in 0..order {
            for u in 0..v {
                if keep(u, v) {
                    builder.connect(u, v);
                }
            }
        }
        builder.build()
    }

    /// `|G|`
    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    /// `||G||`
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adjacency[v]
    }

    pub fn neighbor_iter(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].ones()
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet::from_bits(&self.adjacency[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones(..)
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// A vertex of minimum degree, smallest id on ties.
    pub fn min_degree(&self) -> Result<(usize, usize)> {
        (0..self.order())
            .map(|v| (v, self.degree(v)))
            .min_by_key(|&(v, d)| (d, v))
            .ok_or(Error::EmptyGraph)
    }

    /// `G[s]`, relabelled so that `members[i]` becomes vertex `i`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<InducedSubgraph> {
        s.check_range(self.order())?;
        let members = s.as_slice();
        let graph = Graph::from_fn(members.len(), |i, j| self.has_edge(members[i], members[j]));
        Ok(InducedSubgraph {
            graph,
            members: s.clone(),
        })
    }

    /// Vertices outside `s` adjacent to every member of `s`.
    pub fn common_neighbors(&self, s: &VertexSet) -> Result<VertexSet> {
        if s.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        s.check_range(self.order())?;
        Ok(VertexSet::from_bits(&self.common_neighbor_bits(s.as_slice())))
    }

    pub(crate) fn common_neighbor_bits(&self, s: &[usize]) -> FixedBitSet {
        let mut bits = self.adjacency[s[0]].clone();
        for &v in &s[1..] {
            bits.intersect_with(&self.adjacency[v]);
        }
        bits
    }

    /// Number of neighbours of `v` inside `s`.
    pub fn degree_into(&self, v: usize, s: &VertexSet) -> usize {
        s.iter().filter(|&u| self.adjacency[v].contains(u)).count()
    }

    pub fn is_clique(&self, s: &[usize]) -> bool {
        s.iter()
            .enumerate()
            .all(|(i, &u)| u < self.order() && s[i + 1..].iter().all(|&v| u != v && self.adjacency[u].contains(v)))
    }

    pub fn is_independent(&self, s: &[usize]) -> bool {
        s.iter()
            .enumerate()
            .all(|(i, &u)| u < self.order() && s[i + 1..].iter().all(|&v| u != v && !self.adjacency[u].contains(v)))
    }

    /// The first non-adjacent pair of `s`, in input order.
    pub fn missing_edge(&self, s: &[usize]) -> Option<(usize, usize)> {
        for (i, &u) in s.iter().enumerate() {
            for &v in &s[i + 1..] {
                if !self.has_edge(u, v) {
                    return Some((u, v));
                }
            }
        }
        None
    }

    /// Renames vertex `v` to `perm[v]`; `perm` must be a permutation.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.order());
        let mut builder = GraphBuilder::new(self.order());
        for (u, v) in self.edges() {
            builder.connect(perm[u], perm[v]);
        }
        builder.build()
    }

    pub fn complement(&self) -> Graph {
        Graph::from_fn(self.order(), |u, v| !self.has_edge(u, v))
    }

    /// `G - s`, keeping the surviving vertices in id order.
    pub fn remove_vertices(&self, s: &VertexSet) -> Result<InducedSubgraph> {
        let keep = VertexSet::new((0..self.order()).filter(|&v| !s.contains(v)));
        self.induced_subgraph(&keep)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("order", &self.order())
            .field("size", &self.size)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// An induced subgraph together with its vertex correspondence.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `members[new] = old`; sorted, so the map is order preserving.
    pub members: VertexSet,
}

impl InducedSubgraph {
    pub fn to_old(&self, new: usize) -> usize {
        self.members.as_slice()[new]
    }

    pub fn to_new(&self, old: usize) -> Option<usize> {
        self.members.as_slice().binary_search(&old).ok()
    }

    pub fn set_to_old(&self, s: &VertexSet) -> VertexSet {
        s.iter().map(|v| self.to_old(v)).collect()
    }

    /// Members of `s` that survive, in new ids.
    pub fn set_to_new(&self, s: &VertexSet) -> VertexSet {
        s.iter().filter_map(|v| self.to_new(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, petersen, star, turan_graph};

    #[test]
    fn induced_subgraph_of_k4_is_triangle() {
        let g = Graph::complete(4);
        let sub = g.induced_subgraph(&VertexSet::new([0, 1, 2])).unwrap();
        assert_eq!(sub.graph, Graph::complete(3));
    }

    #[test]
    fn induced_non_adjacent_pair_is_edgeless() {
        let sub = cycle(5).induced_subgraph(&VertexSet::new([0, 2])).unwrap();
        assert_eq!(sub.graph, Graph::empty(2));
        assert_eq!(sub.to_old(1), 2);
        assert_eq!(sub.to_new(2), Some(1));
        assert_eq!(sub.to_new(1), None);
    }

    #[test]
    fn petersen_outer_cycle_induces_c5() {
        let sub = petersen().induced_subgraph(&VertexSet::range(5)).unwrap();
        assert_eq!(sub.graph, cycle(5));
        let inner = petersen().induced_subgraph(&VertexSet::new(5..10)).unwrap();
        assert_eq!(inner.graph.size(), 5);
        assert!((0..5).all(|v| inner.graph.degree(v) == 2));
    }

    #[test]
    fn induced_subgraph_rejects_out_of_range() {
        let err = cycle(5).induced_subgraph(&VertexSet::new([1, 7])).unwrap_err();
        assert_eq!(err, Error::VertexOutOfRange { vertex: 7, order: 5 });
    }

    #[test]
    fn min_degree_examples() {
        assert_eq!(Graph::complete(5).min_degree().unwrap(), (0, 4));
        assert_eq!(star(4).min_degree().unwrap(), (1, 1));
        assert_eq!(petersen().min_degree().unwrap(), (0, 3));
        assert_eq!(Graph::empty(0).min_degree(), Err(Error::EmptyGraph));
    }

    #[test]
    fn common_neighbor_examples() {
        let k5 = Graph::complete(5);
        assert_eq!(
            k5.common_neighbors(&VertexSet::new([0, 1])).unwrap(),
            VertexSet::new([2, 3, 4])
        );
        assert!(cycle(5).common_neighbors(&VertexSet::new([0, 1])).unwrap().is_empty());
        // Contiguous relabelling of K_{3,3,3} with parts {0,1,2},{3,4,5},{6,7,8}.
        let k333 = Graph::from_fn(9, |u, v| u / 3 != v / 3);
        assert_eq!(
            k333.common_neighbors(&VertexSet::new([0, 3])).unwrap(),
            VertexSet::new([6, 7, 8])
        );
        assert_eq!(k5.common_neighbors(&VertexSet::default()), Err(Error::EmptyVertexSet));
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert_eq!(Graph::from_edges(3, [(0, 0)]), Err(Error::SelfLoop(0)));
        assert_eq!(Graph::from_edges(3, [(0, 1), (1, 0)]), Err(Error::DuplicateEdge(0, 1)));
        assert_eq!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, order: 3 })
        );
    }

    #[test]
    fn edges_are_listed_in_order() {
        let g = turan_graph(4, 2).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn vertex_set_normalises() {
        let s = VertexSet::new([4, 1, 4, 2]);
        assert_eq!(s.as_slice(), &[1, 2, 4]);
        assert_eq!(s.with(3).as_slice(), &[1, 2, 3, 4]);
        assert_eq!(s.without(2).as_slice(), &[1, 4]);
        assert!(s.is_disjoint(&VertexSet::new([0, 3])));
        assert!(!s.is_disjoint(&VertexSet::new([4])));
    }
}
