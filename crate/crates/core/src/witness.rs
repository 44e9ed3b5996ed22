//! Exhaustive clique and fan search, and checking of embeddings.
//!
//! All searches use non-induced subgraph semantics: extra host edges never
//! invalidate a witness. Centres are tried in ascending id order and blades
//! are built from ascending vertex ids, so the reported witness is a
//! deterministic function of the input.

use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generators::FanShape;
use crate::graph::{Graph, VertexSet};
use crate::invariants::max_matching;

/// Below this order the per-centre search stays on the calling thread.
const PARALLEL_ORDER: usize = 64;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CliqueWitness {
    pub vertices: VertexSet,
}

impl CliqueWitness {
    pub fn new(vertices: VertexSet) -> Self {
        CliqueWitness { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        self.vertices.check_range(g.order()).is_ok() && g.is_clique(self.vertices.as_slice())
    }
}

/// A copy of `F_k(r)`: each blade together with the centre spans `K_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanEmbedding {
    pub center: usize,
    pub blades: Vec<VertexSet>,
}

impl FanEmbedding {
    /// Keeps the first `k` blades.
    pub fn truncate(&self, k: usize) -> FanEmbedding {
        FanEmbedding {
            center: self.center,
            blades: self.blades.iter().take(k).cloned().collect(),
        }
    }

    pub fn vertices(&self) -> VertexSet {
        self.blades.iter().flat_map(|b| b.iter()).chain([self.center]).collect()
    }
}

/// A copy of `F_{k_1, ..., k_m}(2r + 1)`. `blades_by_center[i]` belongs to
/// the `i`-th smallest base vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedFanEmbedding {
    pub base: CliqueWitness,
    pub blades_by_center: Vec<Vec<VertexSet>>,
}

impl GeneralizedFanEmbedding {
    /// Per-centre blade counts in non-increasing order.
    pub fn tuple(&self) -> Vec<usize> {
        let mut ks: Vec<usize> = self.blades_by_center.iter().map(Vec::len).collect();
        ks.sort_unstable_by(|a, b| b.cmp(a));
        ks
    }
}

/// Why an embedding was rejected; always the first violated constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Rejection {
    VertexOutOfRange {
        vertex: usize,
    },
    BladeCount {
        expected: usize,
        found: usize,
    },
    BladeSize {
        blade: usize,
        expected: usize,
        found: usize,
    },
    BaseSize {
        base: usize,
        centers: usize,
    },
    BaseNotClique {
        u: usize,
        v: usize,
    },
    Overlap {
        vertex: usize,
    },
    MissingEdge {
        u: usize,
        v: usize,
    },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            Rejection::BladeCount { expected, found } => write!(f, "expected {expected} blades, found {found}"),
            Rejection::BladeSize { blade, expected, found } => {
                write!(f, "blade {blade} has {found} vertices, expected {expected}")
            }
            Rejection::BaseSize { base, centers } => {
                write!(f, "base has {base} vertices but blades are given for {centers} centres")
            }
            Rejection::BaseNotClique { u, v } => write!(f, "base vertices {u} and {v} are not adjacent"),
            Rejection::Overlap { vertex } => write!(f, "vertex {vertex} is used twice"),
            Rejection::MissingEdge { u, v } => write!(f, "missing edge {u}-{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Rejection),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl From<Result<(), Rejection>> for Verdict {
    fn from(r: Result<(), Rejection>) -> Self {
        match r {
            Ok(()) => Verdict::Accept,
            Err(reason) => Verdict::Reject(reason),
        }
    }
}

/// The lexicographically first `q`-clique, if any.
pub fn find_clique(g: &Graph, q: usize) -> Option<CliqueWitness> {
    let mut all = FixedBitSet::with_capacity(g.order());
    all.insert_range(..);
    let mut found = None;
    for_each_clique(g, &all, q, &mut Vec::with_capacity(q), &mut |c| {
        found = Some(CliqueWitness::new(VertexSet::new(c.iter().copied())));
        true
    });
    found
}

/// Calls `visit` on every `size`-clique inside `candidates`, in
/// lexicographic order, until it returns `true`. Returns whether it stopped.
fn for_each_clique(
    g: &Graph,
    candidates: &FixedBitSet,
    size: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if size == 0 {
        return visit(current);
    }
    if candidates.count_ones(..) < size {
        return false;
    }
    let mut rest = candidates.clone();
    for v in candidates.ones() {
        rest.set(v, false);
        if rest.count_ones(..) + 1 < size {
            return false;
        }
        let mut next = rest.clone();
        next.intersect_with(g.neighbors(v));
        current.push(v);
        let stop = for_each_clique(g, &next, size - 1, current, visit);
        current.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Complete search for a copy of `F_k(r)`.
///
/// Triangular fans reduce to a matching in the centre's neighbourhood; larger
/// cliques backtrack over disjoint `(r - 1)`-cliques in the neighbourhood.
pub fn find_fan(g: &Graph, shape: FanShape) -> Option<FanEmbedding> {
    let search = |x: usize| fan_at(g, x, shape);
    if g.order() >= PARALLEL_ORDER {
        (0..g.order()).into_par_iter().find_map_first(search)
    } else {
        (0..g.order()).find_map(search)
    }
}

fn fan_at(g: &Graph, x: usize, shape: FanShape) -> Option<FanEmbedding> {
    let blade = shape.blade_size();
    if g.degree(x) < shape.k * blade {
        return None;
    }
    if shape.r == 3 {
        let sub = g
            .induced_subgraph(&g.neighbor_set(x))
            .expect("neighbourhood is in range");
        let m = max_matching(&sub.graph);
        if m.len() < shape.k {
            return None;
        }
        let blades = m.edges[..shape.k]
            .iter()
            .map(|&(u, v)| VertexSet::new([sub.to_old(u), sub.to_old(v)]))
            .collect();
        return Some(FanEmbedding { center: x, blades });
    }
    let mut blades = Vec::with_capacity(shape.k);
    pack_blades(g, g.neighbors(x).clone(), shape.k, blade, &mut blades).then_some(FanEmbedding { center: x, blades })
}

/// Finds `need` disjoint `size`-cliques inside `avail`. The smallest
/// available vertex is either the minimum of the next blade or unused.
fn pack_blades(g: &Graph, mut avail: FixedBitSet, need: usize, size: usize, blades: &mut Vec<VertexSet>) -> bool {
    if need == 0 {
        return true;
    }
    if avail.count_ones(..) < need * size {
        return false;
    }
    let Some(v) = avail.minimum() else { return false };
    avail.set(v, false);

    let mut cand = avail.clone();
    cand.intersect_with(g.neighbors(v));
    let mut done = false;
    for_each_clique(g, &cand, size - 1, &mut vec![v], &mut |clique| {
        let mut rest = avail.clone();
        for &u in clique {
            rest.set(u, false);
        }
        blades.push(VertexSet::new(clique.iter().copied()));
        if pack_blades(g, rest, need - 1, size, blades) {
            done = true;
            return true;
        }
        blades.pop();
        false
    });
    done || pack_blades(g, avail, need, size, blades)
}

pub fn verify_fan(g: &Graph, e: &FanEmbedding, shape: FanShape) -> Verdict {
    check_fan(g, e, shape).into()
}

fn check_fan(g: &Graph, e: &FanEmbedding, shape: FanShape) -> Result<(), Rejection> {
    in_range(g, e.center)?;
    if e.blades.len() != shape.k {
        return Err(Rejection::BladeCount {
            expected: shape.k,
            found: e.blades.len(),
        });
    }
    let mut used = FixedBitSet::with_capacity(g.order());
    used.insert(e.center);
    for (i, blade) in e.blades.iter().enumerate() {
        check_blade(g, e.center, blade, i, shape.blade_size(), &mut used)?;
    }
    Ok(())
}

fn in_range(g: &Graph, v: usize) -> Result<(), Rejection> {
    if v < g.order() {
        Ok(())
    } else {
        Err(Rejection::VertexOutOfRange { vertex: v })
    }
}

fn check_blade(
    g: &Graph,
    center: usize,
    blade: &VertexSet,
    index: usize,
    size: usize,
    used: &mut FixedBitSet,
) -> Result<(), Rejection> {
    if blade.len() != size {
        return Err(Rejection::BladeSize {
            blade: index,
            expected: size,
            found: blade.len(),
        });
    }
    for v in blade.iter() {
        in_range(g, v)?;
        if used.put(v) {
            return Err(Rejection::Overlap { vertex: v });
        }
    }
    let members: Vec<usize> = std::iter::once(center).chain(blade.iter()).collect();
    match g.missing_edge(&members) {
        Some((u, v)) => Err(Rejection::MissingEdge { u, v }),
        None => Ok(()),
    }
}

/// Checks a generalized fan with blades of `2r` vertices.
pub fn verify_generalized_fan(g: &Graph, e: &GeneralizedFanEmbedding, r: usize) -> Verdict {
    check_generalized_fan(g, e, r).into()
}

fn check_generalized_fan(g: &Graph, e: &GeneralizedFanEmbedding, r: usize) -> Result<(), Rejection> {
    let base = e.base.vertices.as_slice();
    for &v in base {
        in_range(g, v)?;
    }
    if base.len() != e.blades_by_center.len() {
        return Err(Rejection::BaseSize {
            base: base.len(),
            centers: e.blades_by_center.len(),
        });
    }
    if let Some((u, v)) = g.missing_edge(base) {
        return Err(Rejection::BaseNotClique { u, v });
    }
    let mut used = e.base.vertices.to_bits(g.order());
    let mut index = 0;
    for (&center, blades) in base.iter().zip(&e.blades_by_center) {
        for blade in blades {
            check_blade(g, center, blade, index, 2 * r, &mut used)?;
            index += 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, fan_graph, generalized_fan, petersen, turan_graph, wheel, TupleShape};

    fn shape(k: usize, r: usize) -> FanShape {
        FanShape::new(k, r).unwrap()
    }

    #[test]
    fn find_clique_examples() {
        assert_eq!(
            find_clique(&Graph::complete(5), 5).unwrap().vertices,
            VertexSet::range(5)
        );
        assert_eq!(find_clique(&turan_graph(20, 4).unwrap(), 5), None);
        assert!(find_clique(&turan_graph(20, 4).unwrap(), 4).is_some());
        assert_eq!(find_clique(&petersen(), 3), None);
        assert_eq!(find_clique(&petersen(), 2).unwrap().vertices, VertexSet::new([0, 1]));
        assert_eq!(find_clique(&Graph::empty(0), 1), None);
    }

    #[test]
    fn find_clique_is_lexicographically_first() {
        // Triangles {1,2,3} and {0,4,5}; {0,4,5} is first.
        let g = Graph::from_edges(6, [(1, 2), (2, 3), (1, 3), (0, 4), (4, 5), (0, 5)]).unwrap();
        assert_eq!(find_clique(&g, 3).unwrap().vertices, VertexSet::new([0, 4, 5]));
    }

    #[test]
    fn find_fan_examples() {
        let w = wheel(4);
        let fan = find_fan(&w, shape(2, 3)).unwrap();
        assert_eq!(fan.center, 0);
        assert!(verify_fan(&w, &fan, shape(2, 3)).is_accept());

        let k9 = Graph::complete(9);
        let fan = find_fan(&k9, shape(2, 5)).unwrap();
        assert!(verify_fan(&k9, &fan, shape(2, 5)).is_accept());
        assert_eq!(find_fan(&Graph::complete(8), shape(2, 5)), None);

        assert_eq!(find_fan(&cycle(5), shape(1, 3)), None);
    }

    #[test]
    fn general_search_backtracks_over_blade_choice() {
        // The lexicographically first blade {1,2,3} leaves no second blade;
        // the search must back off to {1,3,4} and pair it with {2,6,7}.
        let mut edges = vec![];
        for v in 1..=7 {
            edges.push((0, v));
        }
        for (a, b, c) in [(1, 2, 3), (1, 4, 5), (2, 6, 7), (3, 4, 6)] {
            edges.extend([(a, b), (a, c), (b, c)]);
        }
        edges.sort_unstable();
        edges.dedup();
        let g = Graph::from_edges(8, edges).unwrap();
        let fan = find_fan(&g, shape(2, 4)).unwrap();
        assert!(verify_fan(&g, &fan, shape(2, 4)).is_accept());
        assert_eq!(fan.blades, vec![VertexSet::new([1, 3, 4]), VertexSet::new([2, 6, 7])]);
    }

    #[test]
    fn verify_fan_rejections() {
        let f = fan_graph(shape(2, 4));
        let good = FanEmbedding {
            center: f.center,
            blades: f.blades.clone(),
        };
        assert!(verify_fan(&f.graph, &good, shape(2, 4)).is_accept());

        let overlap = FanEmbedding {
            center: 0,
            blades: vec![VertexSet::new([1, 2, 3]), VertexSet::new([3, 4, 5])],
        };
        assert_eq!(
            verify_fan(&f.graph, &overlap, shape(2, 4)),
            Verdict::Reject(Rejection::Overlap { vertex: 3 })
        );

        let mut edges: Vec<_> = f.graph.edges().collect();
        edges.retain(|&e| e != (4, 6));
        let damaged = Graph::from_edges(f.graph.order(), edges).unwrap();
        assert_eq!(
            verify_fan(&damaged, &good, shape(2, 4)),
            Verdict::Reject(Rejection::MissingEdge { u: 4, v: 6 })
        );

        let short = FanEmbedding {
            center: 0,
            blades: vec![VertexSet::new([1, 2]), VertexSet::new([4, 5, 6])],
        };
        assert_eq!(
            verify_fan(&f.graph, &short, shape(2, 4)),
            Verdict::Reject(Rejection::BladeSize {
                blade: 0,
                expected: 3,
                found: 2
            })
        );
        assert_eq!(
            verify_fan(&f.graph, &good, shape(3, 4)),
            Verdict::Reject(Rejection::BladeCount { expected: 3, found: 2 })
        );
        let centre_reused = FanEmbedding {
            center: 1,
            blades: vec![VertexSet::new([0, 1, 2])],
        };
        assert_eq!(
            verify_fan(&f.graph, &centre_reused, shape(1, 4)),
            Verdict::Reject(Rejection::Overlap { vertex: 1 })
        );
        assert!(verify_fan(&f.graph, &good.truncate(1), shape(1, 4)).is_accept());
    }

    #[test]
    fn verify_generalized_fan_cases() {
        let t = TupleShape::new(vec![2, 1, 0], 2).unwrap();
        let gf = generalized_fan(&t);
        let e = GeneralizedFanEmbedding {
            base: CliqueWitness::new(gf.base.clone()),
            blades_by_center: gf.blades_by_center.clone(),
        };
        assert!(verify_generalized_fan(&gf.graph, &e, 2).is_accept());
        assert_eq!(e.tuple(), vec![2, 1, 0]);

        let mut edges: Vec<_> = gf.graph.edges().collect();
        edges.retain(|&e| e != (0, 2));
        let broken_base = Graph::from_edges(gf.graph.order(), edges).unwrap();
        assert_eq!(
            verify_generalized_fan(&broken_base, &e, 2),
            Verdict::Reject(Rejection::BaseNotClique { u: 0, v: 2 })
        );

        let mut short = e.clone();
        short.blades_by_center[1][0] = short.blades_by_center[1][0].without(11);
        assert!(matches!(
            verify_generalized_fan(&gf.graph, &short, 2),
            Verdict::Reject(Rejection::BladeSize {
                expected: 4,
                found: 3,
                ..
            })
        ));
    }
}
