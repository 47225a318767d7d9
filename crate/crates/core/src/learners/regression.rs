//! Online regression over a finite class by exponential weights on squared
//! loss. Predictions are mixtures of class functions.

use crate::class::FunctionClass;
use crate::error::{check_unit_open, Error, Result};

/// Learning rate for squared loss on `[0, 1]` rewards.
pub const LEARNING_RATE: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct ExpWeightsRegressor<'c> {
    class: &'c FunctionClass,
    log_weights: Vec<f64>,
    rounds: usize,
}

impl<'c> ExpWeightsRegressor<'c> {
    pub fn new(class: &'c FunctionClass) -> Self {
        Self {
            class,
            log_weights: vec![0.0; class.num_functions()],
            rounds: 0,
        }
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn update(&mut self, arm: usize, reward: f64) -> Result<()> {
        if arm >= self.class.num_arms() {
            return Err(Error::Index {
                what: "arms",
                index: arm,
                len: self.class.num_arms(),
            });
        }
        for (lw, row) in self.log_weights.iter_mut().zip(self.class.means()) {
            let e = row[arm] - reward;
            *lw -= LEARNING_RATE * e * e;
        }
        self.rounds += 1;
        Ok(())
    }

    /// Normalized posterior weights, computed with log-sum-exp.
    pub fn weights(&self) -> Vec<f64> {
        let top = self
            .log_weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = self.log_weights.iter().map(|lw| (lw - top).exp()).collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / z).collect()
    }

    /// Mean of the current mixture at every arm.
    pub fn predict(&self) -> Vec<f64> {
        mixture_values(self.class, &self.weights())
    }
}

/// Arm means of the mixture `Σ_f w_f f`.
pub fn mixture_values(class: &FunctionClass, weights: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; class.num_arms()];
    for (w, row) in weights.iter().zip(class.means()) {
        if *w != 0.0 {
            for (o, v) in out.iter_mut().zip(row) {
                *o += w * v;
            }
        }
    }
    out
}

/// Mixture weights after replaying `history` from the uniform prior.
pub fn online_regression_predict(class: &FunctionClass, history: &[(usize, f64)]) -> Result<Vec<f64>> {
    let mut reg = ExpWeightsRegressor::new(class);
    for &(arm, reward) in history {
        reg.update(arm, reward)?;
    }
    Ok(reg.weights())
}

/// High-probability bound on the cumulative squared estimation error:
/// `4 ln|F| + 16 ln(2/δ)`.
pub fn est_bound(num_functions: usize, delta: f64) -> Result<f64> {
    check_unit_open("delta", delta)?;
    Ok(4.0 * (num_functions.max(1) as f64).ln() + 16.0 * (2.0 / delta).ln())
}
