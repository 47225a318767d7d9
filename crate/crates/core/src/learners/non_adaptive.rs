use rand::Rng;

use super::{best_estimate, check_source, LearnerName};
use crate::class::FunctionClass;
use crate::error::Result;
use crate::noise::RewardSource;
use crate::transcript::{QueryLog, Transcript};

/// Commits to `budget` uniformly random arm positions before seeing any
/// reward, pulls each position `reps_per_arm` times, and returns the queried
/// arm with the highest pooled empirical mean (arm 0 if nothing was queried).
pub fn run_non_adaptive_uniform<S, R>(
    class: &FunctionClass,
    budget: usize,
    reps_per_arm: usize,
    source: &mut S,
    rng: &mut R,
) -> Result<Transcript>
where
    S: RewardSource + ?Sized,
    R: Rng + ?Sized,
{
    check_source(class, source)?;
    let arms = class.num_arms();
    let positions: Vec<usize> = (0..budget).map(|_| rng.random_range(0..arms)).collect();

    let mut log = QueryLog::new(source);
    let mut sums = vec![0.0; arms];
    let mut counts = vec![0usize; arms];
    for &arm in &positions {
        for reward in log.query_many(arm, reps_per_arm)? {
            sums[arm] += reward;
            counts[arm] += 1;
        }
    }
    let output = best_estimate(
        (0..arms)
            .filter(|&a| counts[a] > 0)
            .map(|a| (a, sums[a] / counts[a] as f64)),
    )
    .unwrap_or(0);
    let mut t = log.finish(LearnerName::NonAdaptiveUniform.as_str(), output);
    t.diagnostics
        .insert("distinct_arms".into(), counts.iter().filter(|&&c| c > 0).count() as f64);
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
    fn budget_and_fallback() {
        let class = make_singletons(5).unwrap();
        let model = Model::new(&class, 3, NoiseSpec::Deterministic).unwrap();
        let mut sim = Simulator::new(model, ChaCha8Rng::seed_from_u64(0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = run_non_adaptive_uniform(&class, 0, 3, &mut sim, &mut rng).unwrap();
        assert_eq!((t.total_queries, t.output_arm), (0, 0));

        let t = run_non_adaptive_uniform(&class, 200, 2, &mut sim, &mut rng).unwrap();
        assert_eq!(t.total_queries, 400);
        assert_eq!(t.output_arm, 3);
    }
}
