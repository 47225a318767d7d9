//! Exploration by decision estimation, followed by confidence boosting and a
//! final sampling round.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{best_estimate, check_source, mixture_values, ExpWeightsRegressor, LearnerName, LearnerParams};
use crate::class::{gap_matrix, FunctionClass};
use crate::dec::{confidence_rounds, eps_bar, DecSearch};
use crate::dist::ArmDistribution;
use crate::error::{param, Result};
use crate::estimators::chernoff_sample_count;
use crate::games::DEFAULT_TOLERANCE;
use crate::noise::RewardSource;
use crate::transcript::{QueryLog, Transcript};

/// Grid resolution of the `(p, q)` search when none is given.
pub const DEFAULT_DEC_RESOLUTION: f64 = 0.25;

/// Failure tag written to the transcript when the boosted volume is not positive.
pub const DEC_TOO_LARGE: &str = "dec-too-large";

/// State of one exploration round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorationStep {
    /// Oracle mixture weights before the round's pull.
    pub estimate: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// Searched inner value at this round.
    pub value: f64,
    pub arm: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct E2dTrace {
    pub steps: Vec<ExplorationStep>,
    /// Exploration rounds drawn for confidence boosting (0-based).
    pub indices: Vec<usize>,
    /// `E_{q}[(f̂ - f̃)²]` for each drawn index.
    pub distances: Vec<f64>,
    /// Position in `indices` of the selected round.
    pub selected: usize,
    pub eps_bar: f64,
    pub gamma: f64,
}

impl E2dTrace {
    /// Cumulative `E_{π∼qᵗ}[(f(π) - f̂ᵗ(π))²]` of the exploration oracle
    /// against function `f`.
    pub fn estimation_error(&self, class: &FunctionClass, f: usize) -> Result<f64> {
        let truth = class.row(f)?;
        Ok(self
            .steps
            .iter()
            .map(|s| {
                let pred = mixture_values(class, &s.estimate);
                s.q.iter()
                    .zip(truth.iter().zip(&pred))
                    .map(|(w, (t, p))| w * (t - p) * (t - p))
                    .sum::<f64>()
            })
            .sum())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct E2dOutcome {
    pub transcript: Transcript,
    pub trace: E2dTrace,
}

fn expected_sq_distance(q: &[f64], a: &[f64], b: &[f64]) -> f64 {
    q.iter()
        .zip(a.iter().zip(b))
        .map(|(w, (x, y))| w * (x - y) * (x - y))
        .sum()
}

/// Runs the learner with horizon `params.horizon`. Requires `T ≥ L + 1` with
/// `L = ⌈log₂(4/δ)⌉`. Each confidence-boosting replay uses a fresh oracle.
pub fn run_e2d<S, R>(
    class: &FunctionClass,
    params: &LearnerParams,
    source: &mut S,
    rng: &mut R,
) -> Result<E2dOutcome>
where
    S: RewardSource + ?Sized,
    R: Rng + ?Sized,
{
    params.validate()?;
    check_source(class, source)?;
    let horizon = params.horizon.ok_or_else(|| param("horizon", "required"))?;
    let l = confidence_rounds(params.delta)?;
    if horizon < l + 1 {
        return Err(param(
            "horizon",
            format!("{horizon} is below the minimum {} for delta = {}", l + 1, params.delta),
        ));
    }
    let j = horizon / (l + 1);
    let radius = eps_bar(horizon, params.delta, class.num_functions())?;
    let half = params.alpha / 2.0;
    let mut search = DecSearch::new(
        class,
        half,
        params.resolution.unwrap_or(DEFAULT_DEC_RESOLUTION),
    )?;
    let mut log = QueryLog::new(source);

    // exploration
    let mut oracle = ExpWeightsRegressor::new(class);
    let mut steps = Vec::with_capacity(j);
    for _ in 0..j {
        let estimate = oracle.weights();
        let out = search.solve(&mixture_values(class, &estimate), radius)?;
        let arm = ArmDistribution::new(out.q.clone())?.sample(rng);
        let reward = log.query(arm)?;
        oracle.update(arm, reward)?;
        steps.push(ExplorationStep {
            estimate,
            p: out.p,
            q: out.q,
            value: out.value,
            arm,
        });
    }

    // confidence boosting
    let indices: Vec<usize> = (0..l).map(|_| rng.random_range(0..j)).collect();
    let mut distances = Vec::with_capacity(l);
    for &t in &indices {
        let q = ArmDistribution::new(steps[t].q.clone())?;
        let mut fresh = ExpWeightsRegressor::new(class);
        let mut avg = vec![0.0; class.num_functions()];
        for _ in 0..j {
            for (a, w) in avg.iter_mut().zip(fresh.weights()) {
                *a += w / j as f64;
            }
            let arm = q.sample(rng);
            let reward = log.query(arm)?;
            fresh.update(arm, reward)?;
        }
        distances.push(expected_sq_distance(
            q.probs(),
            &mixture_values(class, &steps[t].estimate),
            &mixture_values(class, &avg),
        ));
    }
    let selected = (0..l)
        .fold(0, |b, i| if distances[i] < distances[b] { i } else { b });
    let chosen = &steps[indices[selected]];

    // boosted volume of the chosen p against its version set
    let gaps = gap_matrix(class, half)?;
    let members = crate::dec::version_set(
        class,
        &chosen.estimate,
        &ArmDistribution::new(chosen.q.clone())?,
        radius,
    )?
    .members;
    let worst_miss = members
        .iter()
        .map(|&f| 1.0 - gaps.coverage(f, &chosen.p))
        .fold(0.0, f64::max);
    let gamma = 1.0 - worst_miss;
    let p_hat = ArmDistribution::from_weights(&chosen.p)?;

    let mut failure = None;
    let output = if gamma <= DEFAULT_TOLERANCE {
        failure = Some(DEC_TOO_LARGE.to_string());
        crate::class::argmax_least_index(p_hat.probs())
    } else {
        let m = ((2.0 / params.delta).ln() / gamma).ceil().max(1.0) as usize;
        let per = chernoff_sample_count(params.alpha, params.delta, m)?;
        let picks: Vec<usize> = (0..m).map(|_| p_hat.sample(rng)).collect();
        let mut estimates = Vec::with_capacity(m);
        for arm in picks {
            let r = log.query_many(arm, per)?;
            estimates.push((arm, r.iter().sum::<f64>() / per as f64));
        }
        best_estimate(estimates).expect("at least one candidate")
    };

    let mut transcript = log.finish(LearnerName::E2d.as_str(), output);
    transcript.failure = failure;
    let d = &mut transcript.diagnostics;
    d.insert("eps_bar".into(), radius);
    d.insert("gamma".into(), gamma);
    d.insert("exploration_rounds".into(), j as f64);
    d.insert("confidence_rounds".into(), l as f64);
    d.insert("version_set_size".into(), members.len() as f64);
    let trace = E2dTrace {
        steps,
        indices,
        distances,
        selected,
        eps_bar: radius,
        gamma,
    };
    Ok(E2dOutcome { transcript, trace })
}
