//! Learners that draw candidate arms from the volume-optimal distribution and
//! keep the one with the best estimated mean.

use rand::Rng;

use super::{best_estimate, check_source, LearnerName, LearnerParams};
use crate::class::FunctionClass;
use crate::dist::ArmDistribution;
use crate::error::{param, Error, Result};
use crate::estimators::{chernoff_sample_count, empirical_mean, median_of_means, MoMConfig, DEFAULT_C_M};
use crate::games::{gamma, DEFAULT_TOLERANCE};
use crate::noise::RewardSource;
use crate::transcript::{QueryLog, Transcript};

/// How many candidates to draw and how often to pull each.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSchedule {
    /// Volume at half the target accuracy.
    pub gamma: f64,
    pub p_star: ArmDistribution,
    /// Number of candidate draws, `⌈ln(2/δ)/γ⌉`.
    pub candidates: usize,
    pub pulls_per_candidate: usize,
}

impl SamplingSchedule {
    pub fn total(&self) -> usize {
        self.candidates * self.pulls_per_candidate
    }
}

fn candidate_phase(class: &FunctionClass, params: &LearnerParams) -> Result<(f64, ArmDistribution, usize)> {
    params.validate()?;
    let cert = gamma(class, params.alpha / 2.0, DEFAULT_TOLERANCE)?;
    if cert.value <= DEFAULT_TOLERANCE {
        return Err(Error::Unlearnable {
            alpha: params.alpha / 2.0,
            gamma: cert.value,
        });
    }
    let m = ((2.0 / params.delta).ln() / cert.value).ceil().max(1.0) as usize;
    Ok((cert.value, cert.p_star()?, m))
}

/// Schedule for bounded rewards: Chernoff-sized empirical means.
pub fn algorithm1_schedule(class: &FunctionClass, params: &LearnerParams) -> Result<SamplingSchedule> {
    let (gamma, p_star, candidates) = candidate_phase(class, params)?;
    Ok(SamplingSchedule {
        gamma,
        p_star,
        candidates,
        pulls_per_candidate: chernoff_sample_count(params.alpha, params.delta, candidates)?,
    })
}

/// Schedule for finite-variance rewards: `⌈16 c_M σ² ln(2m/δ) / α²⌉` pulls
/// per candidate, at least one per median-of-means group.
pub fn algorithm2_schedule(class: &FunctionClass, params: &LearnerParams) -> Result<SamplingSchedule> {
    let sigma = params
        .sigma
        .ok_or_else(|| param("sigma", "required for median-of-means estimation"))?;
    let (gamma, p_star, candidates) = candidate_phase(class, params)?;
    let c_m = params.c_m.unwrap_or(DEFAULT_C_M);
    let groups = MoMConfig::for_confidence(params.delta, c_m)?.groups;
    let a2 = params.alpha * params.alpha;
    let n = (16.0 * c_m * sigma * sigma * (2.0 * candidates as f64 / params.delta).ln() / a2).ceil() as usize;
    Ok(SamplingSchedule {
        gamma,
        p_star,
        candidates,
        pulls_per_candidate: n.max(groups),
    })
}

/// Bounded-reward learner. Rewards are assumed to lie in `[0, 1]`.
pub fn run_algorithm1<S, R>(
    class: &FunctionClass,
    params: &LearnerParams,
    source: &mut S,
    rng: &mut R,
) -> Result<Transcript>
where
    S: RewardSource + ?Sized,
    R: Rng + ?Sized,
{
    check_source(class, source)?;
    let schedule = algorithm1_schedule(class, params)?;
    run_schedule(LearnerName::Algorithm1, &schedule, source, rng, empirical_mean)
}

/// Finite-variance learner; `params.sigma` bounds the reward standard deviation.
pub fn run_algorithm2<S, R>(
    class: &FunctionClass,
    params: &LearnerParams,
    source: &mut S,
    rng: &mut R,
) -> Result<Transcript>
where
    S: RewardSource + ?Sized,
    R: Rng + ?Sized,
{
    check_source(class, source)?;
    let schedule = algorithm2_schedule(class, params)?;
    let config = MoMConfig::for_confidence(params.delta, params.c_m.unwrap_or(DEFAULT_C_M))?;
    run_schedule(LearnerName::Algorithm2, &schedule, source, rng, |s| {
        median_of_means(s, &config)
    })
}

fn run_schedule<S, R, E>(
    name: LearnerName,
    schedule: &SamplingSchedule,
    source: &mut S,
    rng: &mut R,
    estimate: E,
) -> Result<Transcript>
where
    S: RewardSource + ?Sized,
    R: Rng + ?Sized,
    E: Fn(&[f64]) -> Result<f64>,
{
    // All candidates are drawn before any reward is seen.
    let candidates: Vec<usize> = (0..schedule.candidates)
        .map(|_| schedule.p_star.sample(rng))
        .collect();
    let mut log = QueryLog::new(source);
    let mut estimates = Vec::with_capacity(candidates.len());
    for &arm in &candidates {
        let rewards = log.query_many(arm, schedule.pulls_per_candidate)?;
        estimates.push((arm, estimate(&rewards)?));
    }
    let output = best_estimate(estimates).expect("at least one candidate");
    let mut t = log.finish(name.as_str(), output);
    t.diagnostics.insert("gamma".into(), schedule.gamma);
    t.diagnostics.insert("candidates".into(), schedule.candidates as f64);
    t.diagnostics
        .insert("pulls_per_candidate".into(), schedule.pulls_per_candidate as f64);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::make_singletons;
    use crate::noise::{Model, NoiseSpec, Simulator};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn singleton_counts() {
        let class = make_singletons(4).unwrap();
        let params = LearnerParams::new(0.5, 0.1);
        let s = algorithm1_schedule(&class, &params).unwrap();
        assert!((s.gamma - 0.25).abs() < 1e-9);
        let m = (4.0 * 20f64.ln()).ceil() as usize;
        assert_eq!(s.candidates, m);
        assert_eq!(
            s.pulls_per_candidate,
            (32.0 * (4.0 * m as f64 / 0.1).ln()).ceil() as usize
        );

        let model = Model::new(&class, 2, NoiseSpec::BernoulliAtMean).unwrap();
        let mut sim = Simulator::new(model, ChaCha8Rng::seed_from_u64(1));
        let t = run_algorithm1(&class, &params, &mut sim, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(t.total_queries, s.total());
        assert!(t.is_consistent(4));
    }

    #[test]
    fn sigma_is_required() {
        let class = make_singletons(3).unwrap();
        let params = LearnerParams::new(0.5, 0.1);
        assert!(matches!(
            algorithm2_schedule(&class, &params),
            Err(Error::Parameter { name: "sigma", .. })
        ));
    }

    #[test]
    fn single_arm_class() {
        let class = FunctionClass::new(vec![vec![0.5]]).unwrap();
        let model = Model::new(&class, 0, NoiseSpec::Deterministic).unwrap();
        let mut sim = Simulator::new(model, ChaCha8Rng::seed_from_u64(1));
        let params = LearnerParams::new(0.5, 0.1);
        let t = run_algorithm1(&class, &params, &mut sim, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(t.output_arm, 0);
        assert!((t.diagnostics["gamma"] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mismatched_source_is_rejected() {
        let class = make_singletons(3).unwrap();
        let other = make_singletons(4).unwrap();
        let model = Model::new(&other, 0, NoiseSpec::Deterministic).unwrap();
        let mut sim = Simulator::new(model, ChaCha8Rng::seed_from_u64(1));
        let params = LearnerParams::new(0.5, 0.1);
        assert!(matches!(
            run_algorithm1(&class, &params, &mut sim, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::Contract(_))
        ));
    }
}
