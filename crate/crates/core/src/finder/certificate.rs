use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{find_odd_fan, theorem_thresholds, tuple_lex_less, FanTuple, HypothesisViolation, TheoremThresholds};
use crate::error::Error;
use crate::generators::FanShape;
use crate::graph::Graph;
use crate::witness::{verify_fan, FanEmbedding, Rejection, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Peel,
    Extend,
    Rotate,
    Augment,
    /// Neighbourhood matching search used when `r = 1`.
    Matching,
}

/// One logged step. Vertex ids refer to the input graph.
///
/// `peel` lists the removed vertices, `extend` and `rotate` the resulting
/// clique, `augment` the centre followed by its new blade, and `matching`
/// the fan or the reported independent set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub vertices: Vec<usize>,
    pub tuple_before: Option<FanTuple>,
    pub tuple_after: Option<FanTuple>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub order: usize,
    pub size: usize,
    pub k: usize,
    pub r: usize,
    #[serde(with = "crate::decimal")]
    pub eps: f64,
    pub thresholds: TheoremThresholds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Outcome {
    Embedding { fan: FanEmbedding },
    Violation { violation: HypothesisViolation },
}

/// Machine-checkable trace of a [`find_odd_fan`] run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub input: InputSummary,
    pub steps: Vec<Step>,
    /// Completed augmentation rounds.
    pub iterations: u64,
    pub outcome: Outcome,
}

#[derive(Debug, Error, PartialEq)]
pub enum ReplayError {
    #[error("certificate describes a different input: {0}")]
    InputMismatch(String),
    #[error("augmentation step {step} does not strictly increase the fan tuple")]
    TupleNotIncreasing { step: usize },
    #[error("certified fan rejected: {0}")]
    EmbeddingRejected(Rejection),
    #[error("violation witness does not hold: {0}")]
    WitnessInvalid(String),
    #[error("replay diverges from the certificate at step {step}")]
    Diverged { step: usize },
    #[error("replay reaches a different outcome")]
    OutcomeMismatch,
    #[error("replay failed: {0}")]
    Rerun(#[from] Error),
}

impl SearchCertificate {
    pub fn embedding(&self) -> Option<&FanEmbedding> {
        match &self.outcome {
            Outcome::Embedding { fan } => Some(fan),
            Outcome::Violation { .. } => None,
        }
    }

    pub fn violation(&self) -> Option<&HypothesisViolation> {
        match &self.outcome {
            Outcome::Embedding { .. } => None,
            Outcome::Violation { violation } => Some(violation),
        }
    }

    /// The `(before, after)` tuples of every augmentation step.
    pub fn tuple_sequence(&self) -> impl Iterator<Item = (&FanTuple, &FanTuple)> {
        self.steps
            .iter()
            .filter(|s| s.kind == StepKind::Augment)
            .filter_map(|s| Some((s.tuple_before.as_ref()?, s.tuple_after.as_ref()?)))
    }

    /// Checks the certificate against `g`: the recorded outcome must hold on
    /// its own, the tuples must increase, and re-running the search must
    /// reproduce every step.
    pub fn replay(&self, g: &Graph) -> Result<(), ReplayError> {
        let input = &self.input;
        if input.order != g.order() || input.size != g.size() {
            return Err(ReplayError::InputMismatch(format!(
                "certificate is for order {} size {}, graph has order {} size {}",
                input.order,
                input.size,
                g.order(),
                g.size()
            )));
        }
        if theorem_thresholds(input.order, input.k, input.r, input.eps)? != input.thresholds {
            return Err(ReplayError::InputMismatch(
                "thresholds do not match the parameters".into(),
            ));
        }
        for (i, step) in self
            .steps
            .iter()
            .enumerate()
            .filter(|(_, s)| s.kind == StepKind::Augment)
        {
            let (Some(before), Some(after)) = (&step.tuple_before, &step.tuple_after) else {
                return Err(ReplayError::TupleNotIncreasing { step: i });
            };
            if !tuple_lex_less(before, after).unwrap_or(false) {
                return Err(ReplayError::TupleNotIncreasing { step: i });
            }
        }
        match &self.outcome {
            Outcome::Embedding { fan } => {
                if let Verdict::Reject(reason) = verify_fan(g, fan, FanShape::odd(input.k, input.r)?) {
                    return Err(ReplayError::EmbeddingRejected(reason));
                }
            }
            Outcome::Violation { violation } => violation.check(g).map_err(ReplayError::WitnessInvalid)?,
        }

        let rerun = find_odd_fan(g, input.k, input.r, input.eps)?;
        if let Some(step) = rerun.steps.iter().zip(&self.steps).position(|(a, b)| a != b) {
            return Err(ReplayError::Diverged { step });
        }
        if rerun.steps.len() != self.steps.len() {
            return Err(ReplayError::Diverged {
                step: rerun.steps.len().min(self.steps.len()),
            });
        }
        if rerun.outcome != self.outcome || rerun.iterations != self.iterations {
            return Err(ReplayError::OutcomeMismatch);
        }
        Ok(())
    }
}
