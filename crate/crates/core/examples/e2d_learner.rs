//! The coefficient-driven adaptive learner on one instance: exploration
//! trace, confidence boosting, then a Monte Carlo success rate.
//!
//!     cargo run --release --example e2d_learner

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use maximin_bandits::environments::make_tree_class;
use maximin_bandits::harness::{run_monte_carlo, ExperimentConfig};
use maximin_bandits::learners::{est_bound, run_e2d};
use maximin_bandits::{LearnerParams, Model, NoiseSpec, Result, Simulator};

fn main() -> Result<()> {
    let (class, meta) = make_tree_class(2, 1)?;
    let mut params = LearnerParams::new(0.2, 0.2);
    params.horizon = Some(400);
    let truth = 2;
    let model = Model::new(&class, truth, NoiseSpec::BernoulliAtMean)?;
    let mut sim = Simulator::new(model, ChaCha8Rng::seed_from_u64(1));
    let out = run_e2d(&class, &params, &mut sim, &mut ChaCha8Rng::seed_from_u64(2))?;
    let t = &out.trace;
    println!("exploration rounds {}, radius {:.3}", t.steps.len(), t.eps_bar);
    println!(
        "estimation error {:.3} (bound {:.3})",
        t.estimation_error(&class, truth)?,
        est_bound(class.num_functions(), params.delta)?
    );
    println!("boosting distances {:?}, selected {}", t.distances, t.indices[t.selected]);
    println!(
        "volume {:.3}; output arm {} (optimal {}) after {} queries",
        t.gamma,
        out.transcript.output_arm,
        meta.optimal_arm_of_function(truth),
        out.transcript.total_queries
    );

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/e2d_tree.json");
    let mc = run_monte_carlo(&ExperimentConfig::load(path)?)?;
    println!(
        "{} trials: success {:.3}, {} flagged",
        mc.summary.trials, mc.summary.success_rate, mc.summary.flagged
    );
    Ok(())
}
