//! Tree descent against a uniform non-adaptive learner with a budget of
//! about `1/(10γ)` pulls.
//!
//!     cargo run --release --example adaptivity_gap

use maximin_bandits::harness::{adaptivity_experiment, DEFAULT_ALPHA, DEFAULT_DELTA, DEFAULT_DEPTHS};
use maximin_bandits::Result;

fn main() -> Result<()> {
    let report = adaptivity_experiment(&DEFAULT_DEPTHS, 2000, 6, DEFAULT_ALPHA, DEFAULT_DELTA, None)?;
    println!("depth  gamma      descent success  descent queries  uniform budget  uniform failure");
    for r in &report.rows {
        println!(
            "{:>5}  {:<9.6}  {:>15.3}  {:>15.0}  {:>14}  {:>15.3}",
            r.depth,
            r.gamma,
            r.adaptive_success_rate,
            r.adaptive_mean_queries,
            r.non_adaptive_budget,
            r.non_adaptive_failure_rate
        );
    }
    if let Some(g) = &report.growth {
        println!(
            "descent queries grow by {:.1} per level; quadratic share {:.3} (linear: {})",
            g.slope,
            g.quadratic_share,
            g.is_linear()
        );
    }
    Ok(())
}
