//! Feeds fair coin flips to a two-pull learner and checks that its output
//! still covers every function's near-optimal arms with the mass the budget
//! lower bound demands.
//!
//!     cargo run --release --example lower_bound_certificate

use maximin_bandits::environments::make_tree_class;
use maximin_bandits::harness::certify_lower_bound;
use maximin_bandits::{LearnerName, LearnerParams, LearnerSpec, Result};

fn main() -> Result<()> {
    let (class, meta) = make_tree_class(1, 1)?;
    let mut params = LearnerParams::new(0.2, 0.1);
    params.internal_reps = Some(1);
    params.bucket_reps = Some(1);
    let learner = LearnerSpec::new(LearnerName::TreeDescent, params);
    let r = certify_lower_bound(&class, Some(&meta), &learner, 100_000, 7, None)?;
    println!("budget T = {}, output law {:?}", r.budget, r.p_hat.probs());
    println!(
        "min coverage {:.4} (function {}) vs bound {:.4} - {:.4}: holds = {}",
        r.min_coverage, r.worst_function, r.bound, r.slack, r.holds
    );
    Ok(())
}
