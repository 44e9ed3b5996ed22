//! The constructive fan finder.
//!
//! Each step of the density argument is an executable operation that checks
//! its own hypotheses. When a hypothesis fails on the given input the step
//! returns a [`HypothesisViolation`], a witness that can be re-checked
//! against the host graph, instead of aborting.

mod augment;
mod certificate;
mod lemmas;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexSet};

pub use augment::find_odd_fan;
pub use certificate::{InputSummary, Outcome, ReplayError, SearchCertificate, Step, StepKind};
pub use lemmas::{
    extend_clique, extend_clique_with, fan_at_vertex_r1, peel_dense_subgraph, peel_with_trace, rotate_clique,
    rotate_clique_with, DegreeBoundReport, NeighborhoodBound, PeelTrace, StepThresholds,
};

/// Outcome of a single lemma step: the promised object or the reason it
/// cannot exist on this input.
pub type Lemma<T> = std::result::Result<T, HypothesisViolation>;

/// Parameters of the dense-subgraph peeling step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityParams {
    #[serde(with = "crate::decimal")]
    beta: f64,
    #[serde(with = "crate::decimal")]
    eps: f64,
    #[serde(with = "crate::decimal")]
    c: f64,
}

impl DensityParams {
    /// Requires `0 < beta < 1/2`, `0 < eps < 1` and `0 < c < sqrt(beta * eps)`.
    pub fn new(beta: f64, eps: f64, c: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 0.5) {
            return Err(invalid(format!("beta = {beta} must lie in (0, 1/2)")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid(format!("eps = {eps} must lie in (0, 1)")));
        }
        if !(c > 0.0 && c < (beta * eps).sqrt()) {
            return Err(invalid(format!(
                "c = {c} must lie in (0, sqrt(beta * eps)) = (0, {})",
                (beta * eps).sqrt()
            )));
        }
        Ok(DensityParams { beta, eps, c })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `2 beta (1 + eps / 2)`: survivors must have degree above this times the
    /// current order.
    pub fn degree_coefficient(&self) -> f64 {
        2.0 * self.beta * (1.0 + self.eps / 2.0)
    }

    /// `beta n^2 (1 + eps)`
    pub fn edge_requirement(&self, n: usize) -> f64 {
        self.beta * (n as f64).powi(2) * (1.0 + self.eps)
    }
}

/// Blade counts of a generalized fan, non-increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FanTuple(pub Vec<usize>);

impl FanTuple {
    pub fn new(ks: Vec<usize>) -> Result<Self> {
        if ks.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid(format!("fan tuple {ks:?} is not non-increasing")));
        }
        Ok(FanTuple(ks))
    }

    pub fn zeros(m: usize) -> Self {
        FanTuple(vec![0; m])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for FanTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Strict lexicographic order on tuples of equal length.
pub fn tuple_lex_less(a: &FanTuple, b: &FanTuple) -> Result<bool> {
    if a.0.len() != b.0.len() {
        return Err(Error::LengthMismatch(a.0.len(), b.0.len()));
    }
    Ok(a.0.cmp(&b.0) == Ordering::Less)
}

/// Every constant the finder uses, derived from `(n, k, r, eps)` in one
/// place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremThresholds {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    #[serde(with = "crate::decimal")]
    pub eps: f64,
    /// Independence ratio `(sqrt 2 / 10) eps^2`; a witness must exceed `delta n`.
    #[serde(with = "crate::decimal")]
    pub delta: f64,
    /// `(1 - 1/r + eps) n^2 / 2`
    #[serde(with = "crate::decimal")]
    pub edge_threshold: f64,
    /// Clique extension and rotation need `d(v) >= degree_fraction * |G|`.
    #[serde(with = "crate::decimal")]
    pub degree_fraction: f64,
    /// The rotation step's own independence ratio `eps / 4`.
    #[serde(with = "crate::decimal")]
    pub rotation_delta: f64,
    /// `2r(k - 1)(r + 1) + (r + 1)`, the most vertices a generalized fan
    /// with all counts below `k` can occupy.
    pub deletion_bound: usize,
    /// `(sqrt(eps) / 5) n`, recorded for reference.
    #[serde(with = "crate::decimal")]
    pub alpha_bound_sqrt_eps: f64,
    /// `(eps / 5) n`, recorded for reference.
    #[serde(with = "crate::decimal")]
    pub alpha_bound_eps: f64,
    /// Peeling parameters: `beta = (1 - 1/r) / 2`, slack and retention.
    #[serde(with = "crate::decimal")]
    pub peel_beta: f64,
    #[serde(with = "crate::decimal")]
    pub peel_eps: f64,
    #[serde(with = "crate::decimal")]
    pub peel_c: f64,
    /// `k^(r + 1)`, the number of tuples with entries below `k`.
    pub iteration_cap: u64,
}

/// Peeling slack relative to `eps / (1 - 1/r)`: it must be at least 2/3 for
/// the peeled minimum degree to reach `degree_fraction`, and at most 1 for
/// the edge hypothesis to imply the peeling hypothesis.
const PEEL_SLACK_SHARE: f64 = 5.0 / 6.0;
const PEEL_SLACK_MAX: f64 = 0.95;
const PEEL_RETENTION_SHARE: f64 = 0.9;

pub fn theorem_thresholds(n: usize, k: usize, r: usize, eps: f64) -> Result<TheoremThresholds> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps = {eps} must lie in (0, 1)")));
    }
    if k == 0 || r == 0 {
        return Err(invalid("k and r must be positive"));
    }
    let nf = n as f64;
    let density = 1.0 - 1.0 / r as f64;
    let peel_beta = density / 2.0;
    let peel_eps = if density > 0.0 {
        (PEEL_SLACK_SHARE * eps / density).min(PEEL_SLACK_MAX)
    } else {
        0.0
    };
    let iteration_cap = (k as u64).checked_pow(r as u32 + 1).unwrap_or(u64::MAX);
    Ok(TheoremThresholds {
        n,
        k,
        r,
        eps,
        delta: std::f64::consts::SQRT_2 / 10.0 * eps * eps,
        edge_threshold: (density + eps) * nf * nf / 2.0,
        degree_fraction: density + eps / 3.0,
        rotation_delta: eps / 4.0,
        deletion_bound: 2 * r * (k - 1) * (r + 1) + (r + 1),
        alpha_bound_sqrt_eps: eps.sqrt() / 5.0 * nf,
        alpha_bound_eps: eps / 5.0 * nf,
        peel_beta,
        peel_eps,
        peel_c: PEEL_RETENTION_SHARE * (peel_beta * peel_eps).sqrt(),
        iteration_cap,
    })
}

impl TheoremThresholds {
    pub fn density_params(&self) -> Result<DensityParams> {
        DensityParams::new(self.peel_beta, self.peel_eps, self.peel_c)
    }

    /// `delta n` for the host order.
    pub fn independence_bound(&self) -> f64 {
        self.delta * self.n as f64
    }
}

/// A checkable certificate that a step's hypothesis fails on the input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HypothesisViolation {
    /// Peeling removed vertices in `removed` order, each with degree at most
    /// `coefficient` times the order at removal, until at most
    /// `retention * n` survived.
    EdgeDeficiency {
        removed: Vec<usize>,
        survivors: VertexSet,
        #[serde(with = "crate::decimal")]
        coefficient: f64,
        #[serde(with = "crate::decimal")]
        retention: f64,
        edges: usize,
        #[serde(with = "crate::decimal")]
        required_edges: f64,
    },
    /// An independent set larger than `bound`.
    LargeIndependentSet {
        set: VertexSet,
        #[serde(with = "crate::decimal")]
        bound: f64,
    },
    /// `vertex` has `degree < threshold` inside `G[within]`.
    LowDegreeVertex {
        vertex: usize,
        degree: usize,
        #[serde(with = "crate::decimal")]
        threshold: f64,
        within: VertexSet,
    },
    /// `clique` has no common neighbour inside `G[within]`.
    CliqueExtensionFailure { clique: VertexSet, within: VertexSet },
}

impl HypothesisViolation {
    /// Re-derives the claim from `g` alone.
    pub fn check(&self, g: &Graph) -> std::result::Result<(), String> {
        match self {
            HypothesisViolation::EdgeDeficiency {
                removed,
                survivors,
                coefficient,
                retention,
                ..
            } => {
                let n = g.order();
                let mut alive = VertexSet::range(n).to_bits(n);
                let mut order = n;
                for &v in removed {
                    if v >= n || !alive.contains(v) {
                        return Err(format!("removed vertex {v} is not alive"));
                    }
                    let degree = g.neighbors(v).intersection_count(&alive);
                    if degree as f64 > coefficient * order as f64 {
                        return Err(format!("vertex {v} had degree {degree} above the peeling threshold"));
                    }
                    alive.set(v, false);
                    order -= 1;
                }
                if VertexSet::from_bits(&alive) != *survivors {
                    return Err("survivor set does not match the removal sequence".into());
                }
                if survivors.len() as f64 > retention * n as f64 {
                    return Err(format!("{} survivors exceed the retention bound", survivors.len()));
                }
                Ok(())
            }
            HypothesisViolation::LargeIndependentSet { set, bound } => {
                set.check_range(g.order()).map_err(|e| e.to_string())?;
                if !g.is_independent(set.as_slice()) {
                    return Err("set is not independent".into());
                }
                if set.len() as f64 <= *bound {
                    return Err(format!("independent set of size {} does not exceed {bound}", set.len()));
                }
                Ok(())
            }
            HypothesisViolation::LowDegreeVertex {
                vertex,
                degree,
                threshold,
                within,
            } => {
                within.check_range(g.order()).map_err(|e| e.to_string())?;
                if !within.contains(*vertex) {
                    return Err(format!("vertex {vertex} is outside the host set"));
                }
                let actual = g.degree_into(*vertex, within);
                if actual != *degree {
                    return Err(format!("vertex {vertex} has degree {actual}, not {degree}"));
                }
                if actual as f64 >= *threshold {
                    return Err(format!("degree {actual} meets the threshold {threshold}"));
                }
                Ok(())
            }
            HypothesisViolation::CliqueExtensionFailure { clique, within } => {
                within.check_range(g.order()).map_err(|e| e.to_string())?;
                if clique.iter().any(|v| !within.contains(v)) {
                    return Err("clique leaves the host set".into());
                }
                if !g.is_clique(clique.as_slice()) {
                    return Err("vertex set is not a clique".into());
                }
                if let Some(v) = within
                    .iter()
                    .find(|&v| !clique.contains(v) && g.degree_into(v, clique) == clique.len())
                {
                    return Err(format!("vertex {v} extends the clique"));
                }
                Ok(())
            }
        }
    }

    /// Rewrites every vertex id through `f`.
    pub fn map_ids(self, f: impl Fn(usize) -> usize) -> Self {
        let map_set = |s: VertexSet| s.iter().map(&f).collect::<VertexSet>();
        match self {
            HypothesisViolation::EdgeDeficiency {
                removed,
                survivors,
                coefficient,
                retention,
                edges,
                required_edges,
            } => HypothesisViolation::EdgeDeficiency {
                removed: removed.into_iter().map(&f).collect(),
                survivors: map_set(survivors),
                coefficient,
                retention,
                edges,
                required_edges,
            },
            HypothesisViolation::LargeIndependentSet { set, bound } => HypothesisViolation::LargeIndependentSet {
                set: map_set(set),
                bound,
            },
            HypothesisViolation::LowDegreeVertex {
                vertex,
                degree,
                threshold,
                within,
            } => HypothesisViolation::LowDegreeVertex {
                vertex: f(vertex),
                degree,
                threshold,
                within: map_set(within),
            },
            HypothesisViolation::CliqueExtensionFailure { clique, within } => {
                HypothesisViolation::CliqueExtensionFailure {
                    clique: map_set(clique),
                    within: map_set(within),
                }
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            HypothesisViolation::EdgeDeficiency { .. } => "edge-deficiency",
            HypothesisViolation::LargeIndependentSet { .. } => "large-independent-set",
            HypothesisViolation::LowDegreeVertex { .. } => "low-degree-vertex",
            HypothesisViolation::CliqueExtensionFailure { .. } => "clique-extension-failure",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(ks: &[usize]) -> FanTuple {
        FanTuple(ks.to_vec())
    }

    #[test]
    fn lex_order_examples() {
        assert!(tuple_lex_less(&t(&[0, 0, 0]), &t(&[1, 0, 0])).unwrap());
        assert!(!tuple_lex_less(&t(&[2, 1, 0]), &t(&[2, 1, 0])).unwrap());
        assert!(!tuple_lex_less(&t(&[2, 0, 0]), &t(&[1, 1, 1])).unwrap());
        assert!(tuple_lex_less(&t(&[1, 1, 1]), &t(&[2, 0, 0])).unwrap());
        assert_eq!(tuple_lex_less(&t(&[1]), &t(&[1, 0])), Err(Error::LengthMismatch(1, 2)));
    }

    #[test]
    fn fan_tuple_must_be_non_increasing() {
        assert!(FanTuple::new(vec![2, 2, 0]).is_ok());
        assert!(FanTuple::new(vec![0, 1]).is_err());
        assert_eq!(FanTuple::zeros(3).to_string(), "(0,0,0)");
    }

    #[test]
    fn threshold_examples() {
        let th = theorem_thresholds(100, 2, 2, 0.2).unwrap();
        assert!((th.delta - std::f64::consts::SQRT_2 / 10.0 * 0.04).abs() < 1e-15);
        assert!((th.delta - 0.005657).abs() < 1e-6);
        assert_eq!(th.deletion_bound, 15);
        assert_eq!(th.iteration_cap, 8);
        assert!((th.edge_threshold - 0.7 * 5000.0).abs() < 1e-9);
        assert!((th.degree_fraction - (0.5 + 0.2 / 3.0)).abs() < 1e-15);
        assert!((th.rotation_delta - 0.05).abs() < 1e-15);
        assert!(theorem_thresholds(10, 1, 2, 0.0).is_err());
        assert!(theorem_thresholds(10, 1, 2, 1.0).is_err());
        assert!(theorem_thresholds(10, 0, 2, 0.5).is_err());
    }

    #[test]
    fn peel_parameters_imply_rotation_degree_hypothesis() {
        for r in 2..6 {
            for eps in [0.05, 0.1, 0.2, 0.3] {
                let th = theorem_thresholds(50, 2, r, eps).unwrap();
                let p = th.density_params().unwrap();
                assert!(p.degree_coefficient() >= th.degree_fraction, "r={r} eps={eps}");
                // Edge hypothesis implies the peeling hypothesis.
                assert!(p.edge_requirement(50) <= th.edge_threshold + 1e-9);
            }
        }
    }

    #[test]
    fn density_params_ranges() {
        assert!(DensityParams::new(0.3, 0.5, 0.3).is_ok());
        assert!(DensityParams::new(0.5, 0.5, 0.1).is_err());
        assert!(DensityParams::new(0.3, 1.0, 0.1).is_err());
        assert!(DensityParams::new(0.3, 0.5, 0.39).is_err());
        assert!(DensityParams::new(0.3, 0.5, 0.0).is_err());
    }
}
