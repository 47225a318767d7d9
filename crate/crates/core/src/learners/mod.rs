//! Best-arm learners.
//!
//! Every learner reads rewards through a [`RewardSource`] and draws its own
//! randomness from the `rng` it is handed, so a run is a pure function of the
//! source and the seed of that stream. The harness gives the source and the
//! learner independent streams.

mod e2d;
mod non_adaptive;
mod regression;
mod sampling;
mod tree_descent;

pub use e2d::{run_e2d, E2dOutcome, E2dTrace, ExplorationStep, DEC_TOO_LARGE, DEFAULT_DEC_RESOLUTION};
pub use non_adaptive::run_non_adaptive_uniform;
pub use regression::{
    est_bound, mixture_values, online_regression_predict, ExpWeightsRegressor, LEARNING_RATE,
};
pub use sampling::{
    algorithm1_schedule, algorithm2_schedule, run_algorithm1, run_algorithm2, SamplingSchedule,
};
pub use tree_descent::{run_tree_descent, tree_descent_schedule, TreeSchedule};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::class::FunctionClass;
use crate::environments::TreeMeta;
use crate::error::{check_unit_open, param, Error, Result};
use crate::games::{gamma, DEFAULT_TOLERANCE};
use crate::noise::RewardSource;
use crate::transcript::Transcript;

/// Which learner to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerName {
    /// Sample from the volume-optimal distribution, then empirical means.
    Algorithm1,
    /// As `Algorithm1` with median-of-means estimates for unbounded noise.
    Algorithm2,
    TreeDescent,
    NonAdaptiveUniform,
    /// Exploration-by-decision-estimation learner.
    E2d,
    /// Outputs `arm` without querying.
    FixedArm,
    /// Outputs a draw from the volume-optimal distribution without querying.
    WitnessSample,
}

impl LearnerName {
    pub fn as_str(&self) -> &'static str {
        match self {
            LearnerName::Algorithm1 => "algorithm1",
            LearnerName::Algorithm2 => "algorithm2",
            LearnerName::TreeDescent => "tree_descent",
            LearnerName::NonAdaptiveUniform => "non_adaptive_uniform",
            LearnerName::E2d => "e2d",
            LearnerName::FixedArm => "fixed_arm",
            LearnerName::WitnessSample => "witness_sample",
        }
    }
}

/// Accuracy, confidence, and the learner-specific knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerParams {
    pub alpha: f64,
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_m: Option<f64>,
    /// Exploration horizon `T` of the E2D learner.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    /// Number of pre-committed query positions of the non-adaptive learner.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps_per_arm: Option<usize>,
    /// Grid resolution of the E2D candidate search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    /// Tree descent: pulls per internal node (overrides the default schedule).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub internal_reps: Option<usize>,
    /// Tree descent: pulls per bucket arm (overrides the default schedule).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bucket_reps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm: Option<usize>,
}

impl LearnerParams {
    pub fn new(alpha: f64, delta: f64) -> Self {
        Self {
            alpha,
            delta,
            sigma: None,
            c_m: None,
            horizon: None,
            budget: None,
            reps_per_arm: None,
            resolution: None,
            internal_reps: None,
            bucket_reps: None,
            arm: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_open("alpha", self.alpha)?;
        check_unit_open("delta", self.delta)?;
        if let Some(s) = self.sigma {
            if !(s.is_finite() && s > 0.0) {
                return Err(param("sigma", format!("{s} must be positive")));
            }
        }
        if let Some(c) = self.c_m {
            if !(c.is_finite() && c > 0.0) {
                return Err(param("c_m", format!("{c} must be positive")));
            }
        }
        if let Some(r) = self.resolution {
            check_unit_open("resolution", r)?;
        }
        Ok(())
    }
}

/// A learner together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub name: LearnerName,
    #[serde(flatten)]
    pub params: LearnerParams,
}

impl LearnerSpec {
    pub fn new(name: LearnerName, params: LearnerParams) -> Self {
        Self { name, params }
    }

    /// Runs the learner against `source`.
    ///
    /// `tree` is required by tree descent; when absent it is inferred from the
    /// class shape.
    pub fn run<S, R>(
        &self,
        class: &FunctionClass,
        tree: Option<&TreeMeta>,
        source: &mut S,
        rng: &mut R,
    ) -> Result<Transcript>
    where
        S: RewardSource + ?Sized,
        R: Rng + ?Sized,
    {
        let p = &self.params;
        match self.name {
            LearnerName::Algorithm1 => run_algorithm1(class, p, source, rng),
            LearnerName::Algorithm2 => run_algorithm2(class, p, source, rng),
            LearnerName::TreeDescent => {
                let meta = resolve_tree(class, tree)?;
                run_tree_descent(&meta, class, p, source)
            }
            LearnerName::NonAdaptiveUniform => {
                let budget = p.budget.ok_or_else(|| param("budget", "required"))?;
                run_non_adaptive_uniform(class, budget, p.reps_per_arm.unwrap_or(1), source, rng)
            }
            LearnerName::E2d => run_e2d(class, p, source, rng).map(|o| o.transcript),
            LearnerName::FixedArm => {
                let arm = p.arm.ok_or_else(|| param("arm", "required"))?;
                if arm >= class.num_arms() {
                    return Err(Error::Index {
                        what: "arms",
                        index: arm,
                        len: class.num_arms(),
                    });
                }
                Ok(empty_transcript(self.name, arm))
            }
            LearnerName::WitnessSample => {
                let cert = gamma(class, p.alpha, DEFAULT_TOLERANCE)?;
                let arm = cert.p_star()?.sample(rng);
                Ok(empty_transcript(self.name, arm))
            }
        }
    }

    /// Total pulls the learner will make, when fixed in advance.
    pub fn query_budget(&self, class: &FunctionClass, tree: Option<&TreeMeta>) -> Result<Option<usize>> {
        let p = &self.params;
        Ok(match self.name {
            LearnerName::Algorithm1 => Some(algorithm1_schedule(class, p)?.total()),
            LearnerName::Algorithm2 => Some(algorithm2_schedule(class, p)?.total()),
            LearnerName::TreeDescent => {
                let meta = resolve_tree(class, tree)?;
                Some(tree_descent_schedule(&meta, p)?.total(&meta))
            }
            LearnerName::NonAdaptiveUniform => {
                Some(p.budget.unwrap_or(0) * p.reps_per_arm.unwrap_or(1))
            }
            LearnerName::FixedArm | LearnerName::WitnessSample => Some(0),
            LearnerName::E2d => None,
        })
    }
}

fn resolve_tree(class: &FunctionClass, tree: Option<&TreeMeta>) -> Result<TreeMeta> {
    match tree {
        Some(meta) => Ok(*meta),
        None => TreeMeta::infer(class)
            .ok_or_else(|| Error::Contract("class is not a tree class".into())),
    }
}

fn empty_transcript(name: LearnerName, arm: usize) -> Transcript {
    Transcript {
        records: Vec::new(),
        output_arm: arm,
        total_queries: 0,
        seed: 0,
        learner_name: name.as_str().to_string(),
        failure: None,
        diagnostics: Default::default(),
    }
}

pub(crate) fn check_source<S: RewardSource + ?Sized>(class: &FunctionClass, source: &S) -> Result<()> {
    if source.num_arms() != class.num_arms() {
        return Err(Error::Contract(format!(
            "reward source has {} arms but the class has {}",
            source.num_arms(),
            class.num_arms()
        )));
    }
    Ok(())
}

/// Least-index arm with the largest estimate among `(arm, estimate)` pairs.
pub(crate) fn best_estimate(candidates: impl IntoIterator<Item = (usize, f64)>) -> Option<usize> {
    candidates
        .into_iter()
        .fold(None, |best: Option<(usize, f64)>, (arm, est)| match best {
            Some((b, v)) if v > est || (v == est && b <= arm) => Some((b, v)),
            _ => Some((arm, est)),
        })
        .map(|(arm, _)| arm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn best_estimate_breaks_ties_by_index() {
        assert_eq!(best_estimate([(3, 0.5), (1, 0.5), (2, 0.4)]), Some(1));
        assert_eq!(best_estimate([(3, 0.6), (1, 0.5)]), Some(3));
        assert_eq!(best_estimate(Vec::new()), None);
    }

    #[test]
    fn spec_json_shape() {
        let spec: LearnerSpec =
            serde_json::from_str(r#"{"name":"algorithm2","alpha":0.3,"delta":0.1,"sigma":1.0}"#)
                .unwrap();
        assert_eq!(spec.name, LearnerName::Algorithm2);
        assert_eq!(spec.params.sigma, Some(1.0));
    }
}
