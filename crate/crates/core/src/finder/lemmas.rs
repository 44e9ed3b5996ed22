use serde::{Deserialize, Serialize};

use super::{DensityParams, HypothesisViolation, Lemma};
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::invariants::{greedy_independent_from_matching, max_matching, IndependentSet};
use crate::witness::{CliqueWitness, FanEmbedding};

/// Degree and independence thresholds applied by clique extension and
/// rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepThresholds {
    /// Members of the clique need `d(v) >= degree_fraction * |G|`.
    pub degree_fraction: f64,
    /// A failed rotation's independent set must exceed this to certify
    /// `alpha(G) > bound`.
    pub independence_bound: f64,
}

impl StepThresholds {
    /// `degree_fraction = 1 - 1/r + eps/3`, `independence_bound = delta * order`.
    pub fn lemma(r: usize, eps: f64, delta: f64, order: usize) -> Self {
        StepThresholds {
            degree_fraction: 1.0 - 1.0 / r as f64 + eps / 3.0,
            independence_bound: delta * order as f64,
        }
    }

    /// No degree requirement; any failed rotation yields a witness. Used to
    /// exercise the step mechanics on graphs too small for the asymptotic
    /// hypotheses.
    pub fn permissive() -> Self {
        StepThresholds {
            degree_fraction: 0.0,
            independence_bound: 0.0,
        }
    }
}

/// The removal sequence of a peeling run and its result.
#[derive(Clone, Debug, PartialEq)]
pub struct PeelTrace {
    pub removed: Vec<usize>,
    pub outcome: Lemma<VertexSet>,
}

/// Repeatedly deletes the smallest-id vertex whose degree in the surviving
/// graph is at most `2 beta (1 + eps/2)` times the surviving order. Succeeds
/// with the survivors `S` once none is left, provided `|S| > c n`; the
/// survivors then satisfy `delta(G[S]) > 2 beta (1 + eps/2) |S|`.
pub fn peel_dense_subgraph(g: &Graph, p: &DensityParams) -> Lemma<VertexSet> {
    peel_with_trace(g, p).outcome
}

pub fn peel_with_trace(g: &Graph, p: &DensityParams) -> PeelTrace {
    let n = g.order();
    let coefficient = p.degree_coefficient();
    let floor = p.c() * n as f64;
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = VertexSet::range(n).to_bits(n);
    let mut order = n;
    let mut removed = Vec::new();

    loop {
        if order as f64 <= floor {
            let outcome = Err(HypothesisViolation::EdgeDeficiency {
                removed: removed.clone(),
                survivors: VertexSet::from_bits(&alive),
                coefficient,
                retention: p.c(),
                edges: g.size(),
                required_edges: p.edge_requirement(n),
            });
            return PeelTrace { removed, outcome };
        }
        let threshold = coefficient * order as f64;
        let Some(v) = alive.ones().find(|&v| degree[v] as f64 <= threshold) else {
            return PeelTrace {
                removed,
                outcome: Ok(VertexSet::from_bits(&alive)),
            };
        };
        alive.set(v, false);
        order -= 1;
        removed.push(v);
        for u in g.neighbor_iter(v) {
            if alive.contains(u) {
                degree[u] -= 1;
            }
        }
    }
}

fn check_clique(g: &Graph, d: &CliqueWitness, max_len: usize) -> Result<()> {
    d.vertices.check_range(g.order())?;
    if !g.is_clique(d.vertices.as_slice()) {
        return Err(Error::NotAClique(d.vertices.as_slice().to_vec()));
    }
    if d.len() > max_len {
        return Err(invalid(format!(
            "clique of size {} exceeds the limit {max_len}",
            d.len()
        )));
    }
    Ok(())
}

/// First member of `d` whose degree is below the threshold.
fn low_degree(g: &Graph, d: &CliqueWitness, th: &StepThresholds) -> Option<HypothesisViolation> {
    let threshold = th.degree_fraction * g.order() as f64;
    d.vertices
        .iter()
        .find(|&v| (g.degree(v) as f64) < threshold)
        .map(|v| HypothesisViolation::LowDegreeVertex {
            vertex: v,
            degree: g.degree(v),
            threshold,
            within: VertexSet::range(g.order()),
        })
}

fn smallest_common_neighbor(g: &Graph, d: &CliqueWitness) -> Option<usize> {
    if d.is_empty() {
        return (g.order() > 0).then_some(0);
    }
    g.common_neighbor_bits(d.vertices.as_slice()).minimum()
}

/// A vertex extending the clique `d` (`|d| <= r`), provided every member of
/// `d` has degree at least `(1 - 1/r + eps/3) n`.
pub fn extend_clique(g: &Graph, d: &CliqueWitness, r: usize, eps: f64) -> Result<Lemma<usize>> {
    extend_clique_with(g, d, r, &StepThresholds::lemma(r, eps, 0.0, g.order()))
}

pub fn extend_clique_with(g: &Graph, d: &CliqueWitness, r: usize, th: &StepThresholds) -> Result<Lemma<usize>> {
    check_clique(g, d, r)?;
    if let Some(v) = low_degree(g, d, th) {
        return Ok(Err(v));
    }
    Ok(
        smallest_common_neighbor(g, d).ok_or_else(|| HypothesisViolation::CliqueExtensionFailure {
            clique: d.vertices.clone(),
            within: VertexSet::range(g.order()),
        }),
    )
}

/// A clique of size `|d| + 1` sharing at least `|d| - 1` vertices with `d`
/// (`|d| <= 2r`).
///
/// Adds a common neighbour when there is one. Otherwise looks at the
/// vertices missing exactly one member `v_i` of `d`, grouped by `v_i`; an edge
/// `xy` inside a group gives `d - v_i + {x, y}`. If every group is
/// independent, the largest one is returned as a
/// [`HypothesisViolation::LargeIndependentSet`] against `delta n`.
pub fn rotate_clique(g: &Graph, d: &CliqueWitness, r: usize, eps: f64, delta: f64) -> Result<Lemma<CliqueWitness>> {
    rotate_clique_with(g, d, r, &StepThresholds::lemma(r, eps, delta, g.order()))
}

pub fn rotate_clique_with(g: &Graph, d: &CliqueWitness, r: usize, th: &StepThresholds) -> Result<Lemma<CliqueWitness>> {
    check_clique(g, d, 2 * r)?;
    if let Some(v) = low_degree(g, d, th) {
        return Ok(Err(v));
    }
    if let Some(v) = smallest_common_neighbor(g, d) {
        return Ok(Ok(CliqueWitness::new(d.vertices.with(v))));
    }
    if d.is_empty() {
        return Ok(Err(HypothesisViolation::LargeIndependentSet {
            set: VertexSet::default(),
            bound: th.independence_bound,
        }));
    }

    let members = d.vertices.as_slice();
    let s = members.len();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); s];
    for w in (0..g.order()).filter(|&w| !d.vertices.contains(w)) {
        let adjacent = g.degree_into(w, &d.vertices);
        if adjacent + 1 == s {
            let missed = members
                .iter()
                .position(|&v| !g.has_edge(v, w))
                .expect("exactly one member is missed");
            groups[missed].push(w);
        }
    }
    for (i, group) in groups.iter().enumerate() {
        for (a, &x) in group.iter().enumerate() {
            if let Some(&y) = group[a + 1..].iter().find(|&&y| g.has_edge(x, y)) {
                let rotated = d.vertices.without(members[i]).with(x).with(y);
                return Ok(Ok(CliqueWitness::new(rotated)));
            }
        }
    }
    let largest = groups
        .into_iter()
        .enumerate()
        .max_by_key(|(i, group)| (group.len(), std::cmp::Reverse(*i)))
        .map(|(_, group)| group)
        .unwrap_or_default();
    Ok(Err(HypothesisViolation::LargeIndependentSet {
        set: VertexSet::new(largest),
        bound: th.independence_bound,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodBound {
    pub vertex: usize,
    pub degree: usize,
    /// Matching number of `G[N(vertex)]`.
    pub matching: usize,
}

/// Why no vertex carries `k` triangles: every neighbourhood has matching
/// number below `k`, hence `d(x) <= alpha(G[N(x)]) + 2(k - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBoundReport {
    pub k: usize,
    pub per_vertex: Vec<NeighborhoodBound>,
    /// A vertex of maximum degree (smallest id on ties).
    pub densest: Option<usize>,
    /// Vertices of `N(densest)` left uncovered by its maximum matching.
    pub independent: IndependentSet,
}

/// Searches each vertex, in id order, for `k` triangles through it via a
/// maximum matching of its neighbourhood.
pub fn fan_at_vertex_r1(g: &Graph, k: usize) -> std::result::Result<FanEmbedding, DegreeBoundReport> {
    let mut per_vertex = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let sub = g
            .induced_subgraph(&g.neighbor_set(x))
            .expect("neighbourhood is in range");
        let m = max_matching(&sub.graph);
        if m.len() >= k {
            let blades = m.edges[..k]
                .iter()
                .map(|&(u, v)| VertexSet::new([sub.to_old(u), sub.to_old(v)]))
                .collect();
            return Ok(FanEmbedding { center: x, blades });
        }
        per_vertex.push(NeighborhoodBound {
            vertex: x,
            degree: g.degree(x),
            matching: m.len(),
        });
    }

    let densest = per_vertex
        .iter()
        .max_by_key(|b| (b.degree, std::cmp::Reverse(b.vertex)))
        .map(|b| b.vertex);
    let independent = match densest {
        Some(x) => {
            let sub = g
                .induced_subgraph(&g.neighbor_set(x))
                .expect("neighbourhood is in range");
            let free = greedy_independent_from_matching(&sub.graph, &max_matching(&sub.graph))
                .expect("a maximum matching is maximal");
            IndependentSet {
                members: sub.set_to_old(&free.members),
            }
        }
        None => IndependentSet::default(),
    };
    Err(DegreeBoundReport {
        k,
        per_vertex,
        densest,
        independent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_multipartite, cycle, gnp_random, petersen, star, turan_graph, wheel};

    fn clique(vs: &[usize]) -> CliqueWitness {
        CliqueWitness::new(VertexSet::new(vs.iter().copied()))
    }

    #[test]
    fn peel_complete_graph_keeps_everything() {
        let p = DensityParams::new(0.3, 0.5, 0.3).unwrap();
        assert_eq!(peel_dense_subgraph(&Graph::complete(40), &p), Ok(VertexSet::range(40)));
    }

    #[test]
    fn peel_star_reports_edge_deficiency() {
        let g = star(99);
        let p = DensityParams::new(0.3, 0.5, 0.3).unwrap();
        assert!((g.size() as f64) < p.edge_requirement(100));
        let v = peel_dense_subgraph(&g, &p).unwrap_err();
        assert_eq!(v.kind(), "edge-deficiency");
        v.check(&g).unwrap();
    }

    #[test]
    fn peel_dense_random_graph() {
        let g = gnp_random(500, 0.8, 7).unwrap();
        let p = DensityParams::new(0.35, 0.1, 0.15).unwrap();
        let s = peel_dense_subgraph(&g, &p).unwrap();
        assert!(s.len() as f64 > 0.15 * 500.0);
        let sub = g.induced_subgraph(&s).unwrap().graph;
        let (_, min) = sub.min_degree().unwrap();
        assert!(min as f64 > p.degree_coefficient() * s.len() as f64);
    }

    #[test]
    fn peel_strips_sparse_appendix() {
        // K_30 plus a pendant path: the path must go, the clique must stay.
        let mut edges: Vec<(usize, usize)> = Graph::complete(30).edges().collect();
        edges.extend((30..40).map(|v| (v - 1, v)));
        let g = Graph::from_edges(40, edges).unwrap();
        let p = DensityParams::new(0.2, 0.2, 0.15).unwrap();
        assert_eq!(peel_dense_subgraph(&g, &p), Ok(VertexSet::range(30)));
    }

    #[test]
    fn extend_examples() {
        assert_eq!(
            extend_clique(&Graph::complete(6), &clique(&[0, 1, 2]), 3, 0.1).unwrap(),
            Ok(3)
        );
        let k333 = complete_multipartite(&[3, 3, 3]);
        assert_eq!(extend_clique(&k333, &clique(&[0, 3]), 2, 0.3).unwrap(), Ok(6));

        let c4 = cycle(4);
        let v = extend_clique(&c4, &clique(&[0]), 2, 0.3).unwrap().unwrap_err();
        assert!(matches!(
            v,
            HypothesisViolation::LowDegreeVertex {
                vertex: 0,
                degree: 2,
                ..
            }
        ));
        v.check(&c4).unwrap();

        assert!(matches!(
            extend_clique(&c4, &clique(&[0, 2]), 2, 0.3),
            Err(Error::NotAClique(_))
        ));
        assert!(extend_clique(&Graph::complete(6), &clique(&[0, 1, 2]), 2, 0.1).is_err());
    }

    #[test]
    fn extend_failure_is_checkable() {
        let k33 = complete_multipartite(&[3, 3]);
        let v = extend_clique_with(&k33, &clique(&[0, 3]), 2, &StepThresholds::permissive())
            .unwrap()
            .unwrap_err();
        assert_eq!(v.kind(), "clique-extension-failure");
        v.check(&k33).unwrap();
    }

    #[test]
    fn rotate_adds_common_neighbor() {
        let g = turan_graph(6, 3).unwrap();
        // Parts {0,3}, {1,4}, {2,5}.
        let out = rotate_clique_with(&g, &clique(&[0, 1]), 1, &StepThresholds::permissive())
            .unwrap()
            .unwrap();
        assert_eq!(out, clique(&[0, 1, 2]));
    }

    #[test]
    fn rotate_swaps_missed_vertex() {
        // v1 = 0, v2 = 1, x = 2, y = 3; x and y both miss v1.
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)]).unwrap();
        let out = rotate_clique_with(&g, &clique(&[0, 1]), 1, &StepThresholds::permissive())
            .unwrap()
            .unwrap();
        assert_eq!(out, clique(&[1, 2, 3]));
    }

    #[test]
    fn rotate_on_c5_yields_independent_set() {
        let g = cycle(5);
        let v = rotate_clique_with(&g, &clique(&[0, 1]), 1, &StepThresholds::permissive())
            .unwrap()
            .unwrap_err();
        // 2 misses only 0, 4 misses only 1, 3 misses both.
        assert_eq!(
            v,
            HypothesisViolation::LargeIndependentSet {
                set: VertexSet::new([2]),
                bound: 0.0
            }
        );
        v.check(&g).unwrap();
    }

    #[test]
    fn rotate_on_full_turan_clique() {
        let g = turan_graph(20, 4).unwrap();
        let d = clique(&[0, 1, 2, 3]);
        let v = rotate_clique(&g, &d, 2, 0.2, 0.01).unwrap().unwrap_err();
        // Everyone outside misses exactly the member of its own part.
        assert_eq!(
            v,
            HypothesisViolation::LargeIndependentSet {
                set: VertexSet::new([4, 8, 12, 16]),
                bound: 0.2
            }
        );
        v.check(&g).unwrap();
    }

    #[test]
    fn rotate_checks_degrees() {
        let g = cycle(6);
        let v = rotate_clique(&g, &clique(&[0, 1]), 2, 0.3, 0.0).unwrap().unwrap_err();
        assert_eq!(v.kind(), "low-degree-vertex");
        v.check(&g).unwrap();
    }

    #[test]
    fn r1_examples() {
        let w = wheel(4);
        let fan = fan_at_vertex_r1(&w, 2).unwrap();
        assert_eq!(fan.center, 0);
        assert_eq!(fan.blades.len(), 2);

        let report = fan_at_vertex_r1(&star(99), 1).unwrap_err();
        assert_eq!(report.densest, Some(0));
        assert_eq!(report.independent.len(), 99);

        let report = fan_at_vertex_r1(&petersen(), 1).unwrap_err();
        assert!(report.per_vertex.iter().all(|b| b.matching == 0));
        assert_eq!(report.independent.len(), 3);
    }
}
