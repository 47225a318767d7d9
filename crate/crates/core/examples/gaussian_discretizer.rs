//! Piecewise-uniform surrogates of Gaussian reward laws and their total
//! variation distance to the original.
//!
//!     cargo run --example gaussian_discretizer

use maximin_bandits::harness::discretize;
use maximin_bandits::Result;

fn main() -> Result<()> {
    println!("   mu  sigma    eps  buckets  lower     upper     tv");
    for (mu, sigma) in [(0.0, 1.0), (0.5, 0.5)] {
        for eps in [0.2, 0.1, 0.02] {
            let r = discretize(mu, sigma, eps)?;
            println!(
                "{mu:>5}  {sigma:>5}  {eps:>5}  {:>7}  {:<8.4}  {:<8.4}  {:.5}",
                r.histogram.bucket_count(),
                r.histogram.lower(),
                r.histogram.upper(),
                r.tv
            );
        }
    }
    Ok(())
}
