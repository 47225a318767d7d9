//! Bounded-reward learner on a small tree class: Monte Carlo success rate
//! and the fixed query budget.
//!
//!     cargo run --release --example algorithm1_tree

use maximin_bandits::harness::{run_monte_carlo, ExperimentConfig};
use maximin_bandits::learners::algorithm1_schedule;
use maximin_bandits::Result;

fn main() -> Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/algorithm1_tree.json");
    let config = ExperimentConfig::load(path)?;
    let (class, _) = config.require_class()?.build()?;
    let learner = config.require_learner()?;

    let schedule = algorithm1_schedule(&class, &learner.params)?;
    println!(
        "gamma at alpha/2 = {:.4}; {} candidates x {} pulls = {} queries",
        schedule.gamma,
        schedule.candidates,
        schedule.pulls_per_candidate,
        schedule.total()
    );

    let out = run_monte_carlo(&config)?;
    let s = &out.summary;
    println!(
        "{} trials: success {:.3} ± {:.3} (target {:.2})",
        s.trials,
        s.success_rate,
        s.half_width,
        1.0 - s.delta
    );
    Ok(())
}
