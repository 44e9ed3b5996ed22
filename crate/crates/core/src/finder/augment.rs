//! The augmentation loop over generalized fans.
//!
//! State is a generalized fan whose base `v_1, ..., v_{r+1}` is ordered so
//! that the blade counts `k_1 >= ... >= k_{r+1}` are non-increasing. Each
//! round deletes every blade vertex, rotates the base `r` times into a
//! `(2r + 1)`-clique that still meets the base, hangs that clique off the
//! first base vertex `v_s` it contains, drops the fans of `v_{s+1}, ...`, and
//! re-extends the base. The tuple strictly increases in lexicographic order,
//! so at most `k^(r + 1)` rounds run before `k_1` reaches `k`.

use super::certificate::{InputSummary, Outcome, SearchCertificate, Step, StepKind};
use super::lemmas::{extend_clique_with, fan_at_vertex_r1, peel_with_trace, rotate_clique_with, StepThresholds};
use super::{theorem_thresholds, tuple_lex_less, FanTuple, HypothesisViolation, TheoremThresholds};
use crate::error::{Error, Result};
use crate::generators::FanShape;
use crate::graph::{Graph, InducedSubgraph, VertexSet};
use crate::witness::{verify_fan, CliqueWitness, FanEmbedding, Verdict};

/// Looks for `F_k(2r + 1)` in `g`.
///
/// The certificate's outcome is either a fan accepted by
/// [`verify_fan`] or a [`HypothesisViolation`] whose witness holds in `g`.
/// Errors are reserved for invalid parameters and broken internal
/// invariants.
pub fn find_odd_fan(g: &Graph, k: usize, r: usize, eps: f64) -> Result<SearchCertificate> {
    let th = theorem_thresholds(g.order(), k, r, eps)?;
    let mut run = Run {
        g,
        th: &th,
        steps: Vec::new(),
        iterations: 0,
    };
    let outcome = if r == 1 { run.triangles() } else { run.augment()? };
    Ok(SearchCertificate {
        input: InputSummary {
            order: g.order(),
            size: g.size(),
            k,
            r,
            eps,
            thresholds: th.clone(),
        },
        steps: run.steps,
        iterations: run.iterations,
        outcome,
    })
}

struct Run<'a> {
    g: &'a Graph,
    th: &'a TheoremThresholds,
    steps: Vec<Step>,
    iterations: u64,
}

fn violation(v: HypothesisViolation) -> Outcome {
    Outcome::Violation { violation: v }
}

impl Run<'_> {
    fn log(&mut self, kind: StepKind, vertices: Vec<usize>) {
        self.steps.push(Step {
            kind,
            vertices,
            tuple_before: None,
            tuple_after: None,
        });
    }

    fn step_thresholds(&self) -> StepThresholds {
        StepThresholds {
            degree_fraction: self.th.degree_fraction,
            independence_bound: self.th.independence_bound(),
        }
    }

    fn triangles(&mut self) -> Outcome {
        match fan_at_vertex_r1(self.g, self.th.k) {
            Ok(fan) => {
                self.log(StepKind::Matching, fan.vertices().into_vec());
                Outcome::Embedding { fan }
            }
            Err(report) => {
                let set = report.independent.members;
                self.log(StepKind::Matching, set.as_slice().to_vec());
                violation(HypothesisViolation::LargeIndependentSet {
                    set,
                    bound: self.th.independence_bound(),
                })
            }
        }
    }

    fn augment(&mut self) -> Result<Outcome> {
        let (k, r) = (self.th.k, self.th.r);
        let step = self.step_thresholds();

        let trace = peel_with_trace(self.g, &self.th.density_params()?);
        self.log(StepKind::Peel, trace.removed);
        let survivors = match trace.outcome {
            Ok(s) => s,
            Err(v) => return Ok(violation(v)),
        };
        let g1 = self.g.induced_subgraph(&survivors)?;
        let to_host = |v: usize| g1.to_old(v);

        // Base vertices and their blades, in ids of the peeled graph.
        let mut base: Vec<usize> = Vec::with_capacity(r + 1);
        let mut blades: Vec<Vec<VertexSet>> = Vec::with_capacity(r + 1);
        let whole = full_view(&g1.graph);
        if let Some(v) = self.fill_base(&whole, &mut base, &mut blades, &to_host)? {
            return Ok(violation(v));
        }

        loop {
            let before = tuple_of(&blades, r);
            if let Some(fan) = self.complete_fan(&base, &blades, &to_host)? {
                return Ok(Outcome::Embedding { fan });
            }
            if self.iterations >= self.th.iteration_cap {
                return Err(Error::Internal(format!(
                    "augmentation exceeded {} rounds at tuple {before}",
                    self.th.iteration_cap
                )));
            }
            self.iterations += 1;

            // H = G - (V(F) - B)
            let h = g1.graph.remove_vertices(&blade_vertices(&blades))?;
            let h_to_host = |v: usize| to_host(h.to_old(v));
            let mut clique = CliqueWitness::new(h.set_to_new(&VertexSet::new(base.iter().copied())));
            for _ in 0..r {
                match rotate_clique_with(&h.graph, &clique, r, &step)? {
                    Ok(next) => clique = next,
                    Err(v) => return Ok(violation(self.certify_rotation_failure(v, &clique, &h, &h_to_host))),
                }
                self.log(StepKind::Rotate, clique.vertices.iter().map(h_to_host).collect());
            }

            let rotated = h.set_to_old(&clique.vertices);
            let s = base
                .iter()
                .position(|&v| rotated.contains(v))
                .ok_or_else(|| Error::Internal("rotated clique lost the whole base".into()))?;
            let blade = rotated.without(base[s]);
            base.truncate(s + 1);
            blades.truncate(s + 1);
            blades[s].push(blade.clone());
            let center = to_host(base[s]);

            // A finished fan needs no new base.
            if blades[s].len() < k {
                // H* = G - (V(F*) - B*)
                let h_star = g1.graph.remove_vertices(&blade_vertices(&blades))?;
                if let Some(v) = self.fill_base(&h_star, &mut base, &mut blades, &to_host)? {
                    return Ok(violation(v));
                }
            }

            let mut order: Vec<usize> = (0..base.len()).collect();
            order.sort_by_key(|&i| std::cmp::Reverse(blades[i].len()));
            base = order.iter().map(|&i| base[i]).collect();
            blades = order.iter().map(|&i| std::mem::take(&mut blades[i])).collect();

            let after = tuple_of(&blades, r);
            if !tuple_lex_less(&before, &after)? {
                return Err(Error::Internal(format!("tuple {after} does not exceed {before}")));
            }
            let mut vertices = vec![center];
            vertices.extend(blade.iter().map(to_host));
            self.steps.push(Step {
                kind: StepKind::Augment,
                vertices,
                tuple_before: Some(before),
                tuple_after: Some(after),
            });
        }
    }

    /// The first base vertex carrying `k` blades, as a fan of the input.
    fn complete_fan(
        &self,
        base: &[usize],
        blades: &[Vec<VertexSet>],
        to_host: &dyn Fn(usize) -> usize,
    ) -> Result<Option<FanEmbedding>> {
        let (k, r) = (self.th.k, self.th.r);
        let Some(i) = blades.iter().position(|bs| bs.len() >= k) else {
            return Ok(None);
        };
        let fan = FanEmbedding {
            center: to_host(base[i]),
            blades: blades[i][..k].iter().map(|b| b.iter().map(to_host).collect()).collect(),
        };
        if let Verdict::Reject(reason) = verify_fan(self.g, &fan, FanShape::odd(k, r)?) {
            return Err(Error::Internal(format!("constructed fan rejected: {reason}")));
        }
        Ok(Some(fan))
    }

    /// Extends `base` inside `view` until it has `r + 1` vertices.
    fn fill_base(
        &mut self,
        view: &InducedSubgraph,
        base: &mut Vec<usize>,
        blades: &mut Vec<Vec<VertexSet>>,
        to_host: &dyn Fn(usize) -> usize,
    ) -> Result<Option<HypothesisViolation>> {
        let r = self.th.r;
        let step = self.step_thresholds();
        let view_to_host = |v: usize| to_host(view.to_old(v));
        while base.len() < r + 1 {
            let d = CliqueWitness::new(view.set_to_new(&VertexSet::new(base.iter().copied())));
            match extend_clique_with(&view.graph, &d, r, &step)? {
                Ok(v) => {
                    base.push(view.to_old(v));
                    blades.push(Vec::new());
                }
                Err(v) => return Ok(Some(v.map_ids(view_to_host))),
            }
            let clique: VertexSet = base.iter().map(|&v| to_host(v)).collect();
            self.log(StepKind::Extend, clique.into_vec());
        }
        Ok(None)
    }

    /// A rotation's independent set only certifies `alpha(G) > delta n` when
    /// it is large enough; otherwise report the clique that could be neither
    /// extended nor rotated.
    fn certify_rotation_failure(
        &self,
        v: HypothesisViolation,
        clique: &CliqueWitness,
        h: &InducedSubgraph,
        h_to_host: &dyn Fn(usize) -> usize,
    ) -> HypothesisViolation {
        let v = match v {
            HypothesisViolation::LargeIndependentSet { set, bound } if set.len() as f64 <= bound => {
                HypothesisViolation::CliqueExtensionFailure {
                    clique: clique.vertices.clone(),
                    within: VertexSet::range(h.graph.order()),
                }
            }
            other => other,
        };
        v.map_ids(h_to_host)
    }
}

fn full_view(g: &Graph) -> InducedSubgraph {
    InducedSubgraph {
        graph: g.clone(),
        members: VertexSet::range(g.order()),
    }
}

/// Blade counts padded with zeros to `r + 1` entries.
fn tuple_of(blades: &[Vec<VertexSet>], r: usize) -> FanTuple {
    let mut counts: Vec<usize> = blades.iter().map(Vec::len).collect();
    counts.resize(r + 1, 0);
    FanTuple(counts)
}

fn blade_vertices(blades: &[Vec<VertexSet>]) -> VertexSet {
    blades.iter().flatten().flat_map(|b| b.iter()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::turan_graph;

    #[test]
    fn turan_25_5_yields_fan() {
        let g = turan_graph(25, 5).unwrap();
        let cert = find_odd_fan(&g, 2, 2, 0.2).unwrap();
        let fan = cert.embedding().expect("T_5(25) contains F_2(5)");
        assert!(verify_fan(&g, fan, FanShape::odd(2, 2).unwrap()).is_accept());
        assert!(cert.iterations <= 8);
        cert.replay(&g).unwrap();
    }

    #[test]
    fn turan_20_4_yields_independent_set() {
        let g = turan_graph(20, 4).unwrap();
        let cert = find_odd_fan(&g, 1, 2, 0.2).unwrap();
        let v = cert.violation().expect("T_4(20) is K_5-free");
        assert_eq!(v.kind(), "large-independent-set");
        v.check(&g).unwrap();
        cert.replay(&g).unwrap();
    }

    #[test]
    fn complete_host() {
        let g = Graph::complete(9);
        let cert = find_odd_fan(&g, 2, 2, 0.2).unwrap();
        assert!(cert.embedding().is_some());
        cert.replay(&g).unwrap();
    }

    #[test]
    fn sparse_host_fails_peeling() {
        let g = crate::generators::cycle(30);
        let cert = find_odd_fan(&g, 1, 2, 0.2).unwrap();
        assert_eq!(cert.violation().unwrap().kind(), "edge-deficiency");
        cert.replay(&g).unwrap();
    }

    #[test]
    fn r1_delegates_to_matching() {
        let g = crate::generators::wheel(6);
        let cert = find_odd_fan(&g, 3, 1, 0.2).unwrap();
        assert_eq!(cert.embedding().unwrap().center, 0);
        assert_eq!(cert.steps[0].kind, StepKind::Matching);
        cert.replay(&g).unwrap();
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let g = turan_graph(25, 5).unwrap();
        let mut cert = find_odd_fan(&g, 2, 2, 0.2).unwrap();
        if let Outcome::Embedding { fan } = &mut cert.outcome {
            fan.center = (fan.center + 1) % 25;
        }
        assert!(cert.replay(&g).is_err());
    }
}
