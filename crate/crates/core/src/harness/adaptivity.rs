//! Adaptive versus non-adaptive query complexity on the tree class.

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::monte_carlo::{binomial_sd, trial_seed, TrialPlan, TrialRecord};
use crate::environments::make_tree_class;
use crate::error::{param, Result};
use crate::games::{gamma, DEFAULT_TOLERANCE};
use crate::learners::{LearnerName, LearnerParams, LearnerSpec};
use crate::noise::NoiseSpec;

pub const DEFAULT_DEPTHS: [usize; 6] = [3, 4, 5, 6, 7, 8];
pub const DEFAULT_ALPHA: f64 = 0.2;
pub const DEFAULT_DELTA: f64 = 0.1;

/// Largest relative size of the fitted quadratic term over the depth range
/// for the query growth to count as linear.
pub const MAX_QUADRATIC_SHARE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptivityRow {
    pub depth: usize,
    pub gamma: f64,
    pub adaptive_success_rate: f64,
    pub adaptive_mean_queries: f64,
    /// `max(1, ⌊1/(10γ)⌋)`.
    pub non_adaptive_budget: usize,
    pub non_adaptive_failure_rate: f64,
    /// Three binomial standard deviations at probability 1/2.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryGrowth {
    /// Least-squares slope of mean queries against depth.
    pub slope: f64,
    /// Leading coefficient of the least-squares quadratic.
    pub quadratic: f64,
    /// `|quadratic| · (range of d)² / (q(d_max) - q(d_min))`.
    pub quadratic_share: f64,
}

impl QueryGrowth {
    pub fn is_linear(&self) -> bool {
        self.slope > 0.0 && self.quadratic_share <= MAX_QUADRATIC_SHARE
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptivityReport {
    pub alpha: f64,
    pub delta: f64,
    pub trials: usize,
    pub rows: Vec<AdaptivityRow>,
    /// Absent when fewer than three depths were run.
    pub growth: Option<QueryGrowth>,
    pub records: Vec<TrialRecord>,
}

/// Runs tree descent and the uniform non-adaptive baseline at each depth
/// (`N = 1`, deterministic rewards, true function uniform per trial).
pub fn adaptivity_experiment(
    depths: &[usize],
    trials: usize,
    seed: u64,
    alpha: f64,
    delta: f64,
    threads: Option<usize>,
) -> Result<AdaptivityReport> {
    if depths.is_empty() || depths.iter().any(|&d| d < 3) {
        return Err(param("depths", "need at least one depth, each at least 3"));
    }
    if trials == 0 {
        return Err(param("trials", "must be at least 1"));
    }
    let mut rows = Vec::with_capacity(depths.len());
    let mut records = Vec::new();
    for (k, &depth) in depths.iter().enumerate() {
        let (class, meta) = make_tree_class(depth, 1)?;
        let g = gamma(&class, alpha, DEFAULT_TOLERANCE)?.value;
        let budget = ((1.0 / (10.0 * g)) + 1e-9).floor().max(1.0) as usize;

        let mut plan = TrialPlan {
            experiment_id: format!("adaptivity-d{depth}-tree_descent"),
            class: &class,
            tree: Some(meta),
            noise: NoiseSpec::Deterministic,
            learner: LearnerSpec::new(LearnerName::TreeDescent, LearnerParams::new(alpha, delta)),
            true_function: None,
            master_seed: trial_seed(seed, 2 * k),
            trials,
            timing: false,
            threads,
        };
        let adaptive = plan.run()?;

        let mut params = LearnerParams::new(alpha, delta);
        params.budget = Some(budget);
        params.reps_per_arm = Some(1);
        plan.experiment_id = format!("adaptivity-d{depth}-non_adaptive_uniform");
        plan.learner = LearnerSpec::new(LearnerName::NonAdaptiveUniform, params);
        plan.master_seed = trial_seed(seed, 2 * k + 1);
        let baseline = plan.run()?;

        rows.push(AdaptivityRow {
            depth,
            gamma: g,
            adaptive_success_rate: adaptive.summary.success_rate,
            adaptive_mean_queries: adaptive.summary.mean_queries,
            non_adaptive_budget: budget,
            non_adaptive_failure_rate: 1.0 - baseline.summary.success_rate,
            slack: 3.0 * binomial_sd(0.5, trials),
        });
        records.extend(adaptive.records);
        records.extend(baseline.records);
    }
    let growth = query_growth(
        &rows
            .iter()
            .map(|r| (r.depth as f64, r.adaptive_mean_queries))
            .collect::<Vec<_>>(),
    );
    Ok(AdaptivityReport {
        alpha,
        delta,
        trials,
        rows,
        growth,
        records,
    })
}

/// Runs an `adaptivity` experiment described by `config`.
pub fn run_adaptivity(config: &ExperimentConfig) -> Result<AdaptivityReport> {
    let depths = config.depths.clone().unwrap_or_else(|| DEFAULT_DEPTHS.to_vec());
    adaptivity_experiment(
        &depths,
        config.trials,
        config.seed,
        config.alpha.unwrap_or(DEFAULT_ALPHA),
        config.delta.unwrap_or(DEFAULT_DELTA),
        config.threads,
    )
}

/// Least-squares polynomial coefficients (constant term first).
fn polyfit(points: &[(f64, f64)], degree: usize) -> Option<Vec<f64>> {
    let n = degree + 1;
    // normal equations, with x centred for conditioning
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let mut a = vec![vec![0.0; n + 1]; n];
    for &(x, y) in points {
        let x = x - mean_x;
        for (i, row) in a.iter_mut().enumerate() {
            for j in 0..n {
                row[j] += x.powi((i + j) as i32);
            }
            row[n] += y * x.powi(i as i32);
        }
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let k = a[r][col] / a[col][col];
                for c in col..=n {
                    a[r][c] -= k * a[col][c];
                }
            }
        }
    }
    let centred: Vec<f64> = (0..n).map(|i| a[i][n] / a[i][i]).collect();
    // expand back to powers of the raw x
    let mut out = vec![0.0; n];
    for (k, c) in centred.iter().enumerate() {
        for (j, o) in out.iter_mut().enumerate().take(k + 1) {
            *o += c * binomial(k, j) as f64 * (-mean_x).powi((k - j) as i32);
        }
    }
    Some(out)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn query_growth(points: &[(f64, f64)]) -> Option<QueryGrowth> {
    if points.len() < 3 {
        return None;
    }
    let slope = polyfit(points, 1)?[1];
    let quadratic = polyfit(points, 2)?[2];
    let (first, last) = (points.first()?, points.last()?);
    let span = last.0 - first.0;
    let rise = (last.1 - first.1).abs().max(f64::MIN_POSITIVE);
    Some(QueryGrowth {
        slope,
        quadratic,
        quadratic_share: quadratic.abs() * span * span / rise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polyfit_recovers_exact_polynomials() {
        let pts: Vec<(f64, f64)> = (3..9)
            .map(|d| {
                let x = d as f64;
                (x, 2.0 - 3.0 * x + 0.5 * x * x)
            })
            .collect();
        let c = polyfit(&pts, 2).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-9 && (c[1] + 3.0).abs() < 1e-9 && (c[2] - 0.5).abs() < 1e-9);
        let line: Vec<(f64, f64)> = (0..5).map(|x| (x as f64, 7.0 + 4.0 * x as f64)).collect();
        let g = query_growth(&line).unwrap();
        assert!((g.slope - 4.0).abs() < 1e-9);
        assert!(g.quadratic_share < 1e-9);
        assert!(g.is_linear());
    }

    #[test]
    fn small_run() {
        let r = adaptivity_experiment(&[3, 4], 50, 11, 0.2, 0.1, Some(1)).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[0].adaptive_success_rate, 1.0);
        assert_eq!(r.rows[0].non_adaptive_budget, 1);
        assert_eq!(r.rows[1].non_adaptive_budget, 1);
        assert!(r.growth.is_none());
        assert_eq!(r.records.len(), 200);
        assert!(adaptivity_experiment(&[2], 10, 0, 0.2, 0.1, None).is_err());
    }
}
