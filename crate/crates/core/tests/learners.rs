use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use maximin_bandits::environments::{make_k_armed_surrogate, make_tree_class};
use maximin_bandits::learners::{
    algorithm1_schedule, algorithm2_schedule, run_algorithm1, run_e2d, tree_descent_schedule,
};
use maximin_bandits::noise::CoinFlipSource;
use maximin_bandits::{
    FunctionClass, LearnerName, LearnerParams, LearnerSpec, Model, NoiseSpec, Result,
    RewardSource, Simulator,
};

struct Constant {
    arms: usize,
    value: f64,
}

impl RewardSource for Constant {
    fn num_arms(&self) -> usize {
        self.arms
    }

    fn pull(&mut self, _arm: usize) -> Result<f64> {
        Ok(self.value)
    }
}

fn pulled_arms(class: &FunctionClass, reward: f64, seed: u64) -> Vec<usize> {
    let params = LearnerParams::new(0.3, 0.2);
    let mut source = Constant {
        arms: class.num_arms(),
        value: reward,
    };
    run_algorithm1(class, &params, &mut source, &mut ChaCha8Rng::seed_from_u64(seed))
        .unwrap()
        .records
        .iter()
        .map(|r| r.arm)
        .collect()
}

#[test]
fn sampling_plan_ignores_rewards() {
    let class = make_k_armed_surrogate(5).unwrap();
    for seed in 0..5 {
        assert_eq!(pulled_arms(&class, 0.0, seed), pulled_arms(&class, 1.0, seed));
    }
}

#[test]
fn budgets_shrink_as_confidence_loosens() {
    let class = make_k_armed_surrogate(4).unwrap();
    let (_, meta) = make_tree_class(3, 2).unwrap();
    let mut loose = LearnerParams::new(0.3, 0.5);
    let mut tight = LearnerParams::new(0.3, 0.05);
    loose.sigma = Some(1.0);
    tight.sigma = Some(1.0);
    assert!(algorithm1_schedule(&class, &loose).unwrap().total() < algorithm1_schedule(&class, &tight).unwrap().total());
    assert!(algorithm2_schedule(&class, &loose).unwrap().total() < algorithm2_schedule(&class, &tight).unwrap().total());
    assert!(
        tree_descent_schedule(&meta, &loose).unwrap().total(&meta)
            < tree_descent_schedule(&meta, &tight).unwrap().total(&meta)
    );
}

#[test]
fn transcripts_account_for_every_pull() {
    let (class, meta) = make_tree_class(3, 2).unwrap();
    for name in [
        LearnerName::Algorithm1,
        LearnerName::TreeDescent,
        LearnerName::NonAdaptiveUniform,
    ] {
        let mut params = LearnerParams::new(0.3, 0.2);
        params.budget = Some(7);
        let spec = LearnerSpec::new(name, params);
        let model = Model::new(&class, 3, NoiseSpec::BernoulliAtMean).unwrap();
        let mut sim = Simulator::new(model, ChaCha8Rng::seed_from_u64(1));
        let t = spec
            .run(&class, Some(&meta), &mut sim, &mut ChaCha8Rng::seed_from_u64(2))
            .unwrap();
        assert_eq!(t.total_queries, t.records.len());
        assert!(t.records.iter().enumerate().all(|(i, r)| r.round == i + 1));
        assert_eq!(
            Some(t.total_queries),
            spec.query_budget(&class, Some(&meta)).unwrap(),
            "{}",
            name.as_str()
        );
        assert!(t.output_arm < class.num_arms());
    }
}

#[test]
fn tree_descent_finds_the_leaf_without_noise() {
    let (class, meta) = make_tree_class(4, 3).unwrap();
    let spec = LearnerSpec::new(LearnerName::TreeDescent, LearnerParams::new(0.3, 0.2));
    for f in 0..class.num_functions() {
        let model = Model::new(&class, f, NoiseSpec::Deterministic).unwrap();
        let mut sim = Simulator::new(model, ChaCha8Rng::seed_from_u64(0));
        let t = spec
            .run(&class, Some(&meta), &mut sim, &mut ChaCha8Rng::seed_from_u64(0))
            .unwrap();
        assert_eq!(t.output_arm, meta.optimal_arm_of_function(f));
    }
}

#[test]
fn coin_flips_give_a_valid_transcript() {
    let class = make_k_armed_surrogate(3).unwrap();
    let mut source = CoinFlipSource::new(3, ChaCha8Rng::seed_from_u64(4));
    let t = run_algorithm1(&class, &LearnerParams::new(0.4, 0.3), &mut source, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
    assert!(t.records.iter().all(|r| r.reward == 0.0 || r.reward == 1.0));
}

#[test]
fn e2d_splits_the_horizon_into_blocks() {
    let (class, _) = make_tree_class(2, 1).unwrap();
    let mut params = LearnerParams::new(0.2, 0.2);
    params.horizon = Some(200);
    let model = Model::new(&class, 1, NoiseSpec::BernoulliAtMean).unwrap();
    let mut sim = Simulator::new(model, ChaCha8Rng::seed_from_u64(8));
    let out = run_e2d(&class, &params, &mut sim, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    // ⌈log₂(4/0.2)⌉ = 5 boosting blocks plus one exploration block, 200/6 rounds each
    assert_eq!(out.trace.steps.len(), 33);
    assert_eq!(out.trace.indices.len(), 5);
    assert!(out.transcript.total_queries >= 6 * 33);
    assert!(out.trace.steps.iter().all(|s| (s.p.iter().sum::<f64>() - 1.0).abs() < 1e-9));
}

#[test]
fn wrong_arity_source_is_rejected() {
    let class = make_k_armed_surrogate(3).unwrap();
    let mut source = Constant { arms: 2, value: 0.5 };
    assert!(run_algorithm1(&class, &LearnerParams::new(0.3, 0.2), &mut source, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
}
