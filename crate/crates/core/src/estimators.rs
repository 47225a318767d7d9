//! Mean estimators and the sample counts that make them accurate.
//!
//! All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{check_unit_open, param, Result};

/// Absolute constant of the median-of-means deviation bound.
pub const DEFAULT_C_M: f64 = 4.0;

/// Pulls per arm so that an empirical mean of `[0, 1]` rewards is within
/// `alpha/4` of the truth with probability `1 - delta/(2m)`:
/// `⌈(8/α²) ln(4m/δ)⌉`.
pub fn chernoff_sample_count(alpha: f64, delta: f64, m: usize) -> Result<usize> {
    check_alpha_like(alpha)?;
    check_unit_open("delta", delta)?;
    if m == 0 {
        return Err(param("m", "must be at least 1"));
    }
    Ok(((8.0 / (alpha * alpha)) * (4.0 * m as f64 / delta).ln()).ceil() as usize)
}

/// `alpha` in `(0, 1]`; the boundary value 1 is a valid accuracy.
fn check_alpha_like(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(param("alpha", format!("{alpha} must lie in (0, 1]")))
    }
}

pub fn empirical_mean(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(param("samples", "cannot average an empty sequence"));
    }
    Ok(samples.iter().sum::<f64>() / samples.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoMConfig {
    pub groups: usize,
    pub c_m: f64,
}

impl MoMConfig {
    pub fn new(groups: usize, c_m: f64) -> Result<Self> {
        if groups == 0 {
            return Err(param("groups", "must be at least 1"));
        }
        if !(c_m.is_finite() && c_m > 0.0) {
            return Err(param("c_m", format!("{c_m} must be positive")));
        }
        Ok(Self { groups, c_m })
    }

    /// `⌈ln(2/δ)⌉` groups.
    pub fn for_confidence(delta: f64, c_m: f64) -> Result<Self> {
        check_unit_open("delta", delta)?;
        Self::new(((2.0 / delta).ln().ceil() as usize).max(1), c_m)
    }

    /// Deviation radius `c_M σ √(ln(1/δ)/n)` that the estimate exceeds with
    /// probability at most `δ`.
    pub fn deviation_bound(&self, sigma: f64, delta: f64, n: usize) -> f64 {
        self.c_m * sigma * ((1.0 / delta).ln() / n as f64).sqrt()
    }
}

/// Median of the means of `K` consecutive groups of `⌊n/K⌋` samples.
///
/// Tail samples beyond `K⌊n/K⌋` are dropped so that every group mean has the
/// same law; for even `K` the lower median is returned.
pub fn median_of_means(samples: &[f64], config: &MoMConfig) -> Result<f64> {
    let k = config.groups;
    if k == 0 {
        return Err(param("groups", "must be at least 1"));
    }
    if samples.len() < k {
        return Err(param(
            "samples",
            format!("{} samples cannot fill {k} groups", samples.len()),
        ));
    }
    let size = samples.len() / k;
    let mut means: Vec<f64> = samples
        .chunks_exact(size)
        .take(k)
        .map(|g| g.iter().sum::<f64>() / size as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    Ok(means[(k - 1) / 2])
}
