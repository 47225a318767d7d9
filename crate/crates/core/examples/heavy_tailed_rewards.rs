//! Median-of-means against the empirical mean under heavy-tailed noise, and
//! the finite-variance learner built on it.
//!
//!     cargo run --release --example heavy_tailed_rewards

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use maximin_bandits::estimators::{empirical_mean, median_of_means, MoMConfig, DEFAULT_C_M};
use maximin_bandits::harness::{run_monte_carlo, ExperimentConfig};
use maximin_bandits::{NoiseSpec, Result};

fn main() -> Result<()> {
    let noise = NoiseSpec::HeavyTailThreePoint { sigma: 2.0 };
    let (mean, n, trials, delta) = (0.4, 60, 20_000, 0.05);
    let cfg = MoMConfig::for_confidence(delta, DEFAULT_C_M)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut mom, mut plain) = (Vec::new(), Vec::new());
    for _ in 0..trials {
        let s: Vec<f64> = (0..n).map(|_| noise.draw(mean, &mut rng)).collect();
        mom.push((median_of_means(&s, &cfg)? - mean).abs());
        plain.push((empirical_mean(&s)? - mean).abs());
    }
    let quantile = |v: &mut Vec<f64>, q: f64| {
        v.sort_by(f64::total_cmp);
        v[((v.len() - 1) as f64 * q) as usize]
    };
    println!("{n} samples, {} groups; absolute error quantiles", cfg.groups);
    println!("                   0.90     0.99     0.999");
    for (label, v) in [("median of means", &mut mom), ("empirical mean", &mut plain)] {
        println!(
            "  {label:<15}  {:.4}   {:.4}   {:.4}",
            quantile(v, 0.9),
            quantile(v, 0.99),
            quantile(v, 0.999)
        );
    }

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/algorithm2_heavy_tail.json");
    let out = run_monte_carlo(&ExperimentConfig::load(path)?)?;
    println!(
        "finite-variance learner: success {:.3} over {} trials, {:.0} queries each",
        out.summary.success_rate, out.summary.trials, out.summary.mean_queries
    );
    Ok(())
}
