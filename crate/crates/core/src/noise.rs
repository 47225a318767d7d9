//! Reward models: a true function from a class plus a noise distribution.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::class::{FunctionClass, GAP_SLACK};
use crate::error::{param, Error, Result};

/// Total probability of the two outer atoms of [`NoiseSpec::HeavyTailThreePoint`].
///
/// The atoms sit at `mean ± sigma / sqrt(HEAVY_TAIL_MASS)`, so the variance is
/// exactly `sigma²` while rare draws land far from the mean.
pub const HEAVY_TAIL_MASS: f64 = 0.02;

/// Zero-mean noise applied around the true mean of the pulled arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    Deterministic,
    BernoulliAtMean,
    GaussianAdditive { sigma: f64 },
    /// Two support points `mean ± c`, pulled in to `[0, 1]` when needed.
    TwoPointBounded { c: f64 },
    HeavyTailThreePoint { sigma: f64 },
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseSpec::GaussianAdditive { sigma } | NoiseSpec::HeavyTailThreePoint { sigma } => {
                if !(sigma.is_finite() && sigma > 0.0) {
                    return Err(param("sigma", format!("{sigma} must be positive")));
                }
            }
            NoiseSpec::TwoPointBounded { c } => {
                if !(0.0..=0.5).contains(&c) {
                    return Err(param("c", format!("{c} must lie in [0, 1/2]")));
                }
            }
            NoiseSpec::Deterministic | NoiseSpec::BernoulliAtMean => {}
        }
        Ok(())
    }

    /// Whether every reward lies in `[0, 1]`.
    pub fn is_bounded(&self) -> bool {
        matches!(
            self,
            NoiseSpec::Deterministic | NoiseSpec::BernoulliAtMean | NoiseSpec::TwoPointBounded { .. }
        )
    }

    /// Exact reward variance when the mean is `mean`.
    pub fn variance(&self, mean: f64) -> f64 {
        match *self {
            NoiseSpec::Deterministic => 0.0,
            NoiseSpec::BernoulliAtMean => mean * (1.0 - mean),
            NoiseSpec::GaussianAdditive { sigma } | NoiseSpec::HeavyTailThreePoint { sigma } => {
                sigma * sigma
            }
            NoiseSpec::TwoPointBounded { c } => {
                let (lo, hi) = two_point_support(mean, c);
                (hi - mean) * (mean - lo)
            }
        }
    }

    /// Draws a reward with conditional mean `mean`.
    pub fn draw<R: Rng + ?Sized>(&self, mean: f64, rng: &mut R) -> f64 {
        match *self {
            NoiseSpec::Deterministic => mean,
            NoiseSpec::BernoulliAtMean => {
                if rng.random::<f64>() < mean {
                    1.0
                } else {
                    0.0
                }
            }
            NoiseSpec::GaussianAdditive { sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                mean + sigma * z
            }
            NoiseSpec::TwoPointBounded { c } => {
                let (lo, hi) = two_point_support(mean, c);
                if hi - lo <= 0.0 {
                    return mean;
                }
                let p_hi = (mean - lo) / (hi - lo);
                if rng.random::<f64>() < p_hi {
                    hi
                } else {
                    lo
                }
            }
            NoiseSpec::HeavyTailThreePoint { sigma } => {
                let spread = sigma / HEAVY_TAIL_MASS.sqrt();
                let u: f64 = rng.random();
                if u < HEAVY_TAIL_MASS / 2.0 {
                    mean - spread
                } else if u < HEAVY_TAIL_MASS {
                    mean + spread
                } else {
                    mean
                }
            }
        }
    }
}

/// Support `(lo, hi)` of the bounded two-point law around `mean`.
///
/// With `c <= 1/2` at most one of `mean ± c` can leave `[0, 1]`; that side is
/// replaced by the nearer boundary and the draw probabilities are re-solved
/// from the mean.
fn two_point_support(mean: f64, c: f64) -> (f64, f64) {
    ((mean - c).max(0.0), (mean + c).min(1.0))
}

/// A true function from a class together with its noise law.
#[derive(Debug, Clone, Copy)]
pub struct Model<'a> {
    class: &'a FunctionClass,
    true_function: usize,
    noise: NoiseSpec,
}

impl<'a> Model<'a> {
    pub fn new(class: &'a FunctionClass, true_function: usize, noise: NoiseSpec) -> Result<Self> {
        if true_function >= class.num_functions() {
            return Err(Error::Index {
                what: "functions",
                index: true_function,
                len: class.num_functions(),
            });
        }
        noise.validate()?;
        Ok(Self {
            class,
            true_function,
            noise,
        })
    }

    pub fn class(&self) -> &'a FunctionClass {
        self.class
    }

    pub fn true_function(&self) -> usize {
        self.true_function
    }

    pub fn noise(&self) -> NoiseSpec {
        self.noise
    }

    pub fn mean_of(&self, arm: usize) -> Result<f64> {
        let row = &self.class.means()[self.true_function];
        row.get(arm).copied().ok_or(Error::Index {
            what: "arms",
            index: arm,
            len: row.len(),
        })
    }

    /// Arms whose gap under the true function is at most `alpha`.
    pub fn optimal_arms(&self, alpha: f64) -> Vec<usize> {
        let row = &self.class.means()[self.true_function];
        let best = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..row.len())
            .filter(|&a| best - row[a] <= alpha + GAP_SLACK)
            .collect()
    }

    /// Least-index optimal arm.
    pub fn best_arm(&self) -> usize {
        crate::class::argmax_least_index(&self.class.means()[self.true_function])
    }

    pub fn sample_reward<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> Result<f64> {
        let mean = self.mean_of(arm)?;
        Ok(self.noise.draw(mean, rng))
    }
}

/// Anything that answers arm pulls with rewards.
pub trait RewardSource {
    fn num_arms(&self) -> usize;
    fn pull(&mut self, arm: usize) -> Result<f64>;
}

/// A model paired with its own reward stream.
pub struct Simulator<'a, R> {
    model: Model<'a>,
    rng: R,
}

impl<'a, R: Rng> Simulator<'a, R> {
    pub fn new(model: Model<'a>, rng: R) -> Self {
        Self { model, rng }
    }

    pub fn model(&self) -> &Model<'a> {
        &self.model
    }
}

impl<R: Rng> RewardSource for Simulator<'_, R> {
    fn num_arms(&self) -> usize {
        self.model.class().num_arms()
    }

    fn pull(&mut self, arm: usize) -> Result<f64> {
        self.model.sample_reward(arm, &mut self.rng)
    }
}

/// Answers every pull with an independent fair coin, ignoring the arm.
pub struct CoinFlipSource<R> {
    arms: usize,
    rng: R,
}

impl<R: Rng> CoinFlipSource<R> {
    pub fn new(arms: usize, rng: R) -> Self {
        Self { arms, rng }
    }
}

impl<R: Rng> RewardSource for CoinFlipSource<R> {
    fn num_arms(&self) -> usize {
        self.arms
    }

    fn pull(&mut self, arm: usize) -> Result<f64> {
        if arm >= self.arms {
            return Err(Error::Index {
                what: "arms",
                index: arm,
                len: self.arms,
            });
        }
        Ok(if self.rng.random::<bool>() { 1.0 } else { 0.0 })
    }
}
