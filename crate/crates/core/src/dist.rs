use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Tolerance on the total mass of a probability vector.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// A probability vector over arms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ArmDistribution {
    probs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for ArmDistribution {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        ArmDistribution::new(probs)
    }
}

impl From<ArmDistribution> for Vec<f64> {
    fn from(d: ArmDistribution) -> Self {
        d.probs
    }
}

impl ArmDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if !is_probability_vector(&probs) {
            return Err(param(
                "probs",
                "entries must be non-negative and sum to 1 within 1e-9",
            ));
        }
        Ok(Self { probs })
    }

    /// Normalizes non-negative weights; negative round-off is clamped to zero.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let clamped: Vec<f64> = weights.iter().map(|w| w.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        if clamped.is_empty() || !(total.is_finite() && total > 0.0) {
            return Err(param("weights", "need a positive finite total"));
        }
        Self::new(clamped.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(arms: usize) -> Result<Self> {
        if arms == 0 {
            return Err(param("arms", "must be at least 1"));
        }
        Ok(Self {
            probs: vec![1.0 / arms as f64; arms],
        })
    }

    pub fn point_mass(arms: usize, arm: usize) -> Result<Self> {
        if arm >= arms {
            return Err(Error::Index {
                what: "arms",
                index: arm,
                len: arms,
            });
        }
        let mut probs = vec![0.0; arms];
        probs[arm] = 1.0;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Inverse-CDF draw; the last positive-mass arm absorbs round-off.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, p) in self.probs.iter().enumerate() {
            if *p > 0.0 {
                acc += p;
                last = i;
                if u < acc {
                    return i;
                }
            }
        }
        last
    }

    /// `E_{a ~ self}[values[a]]`.
    pub fn expect(&self, values: &[f64]) -> f64 {
        self.probs.iter().zip(values).map(|(p, v)| p * v).sum()
    }
}

pub(crate) fn is_probability_vector(probs: &[f64]) -> bool {
    !probs.is_empty()
        && probs.iter().all(|p| p.is_finite() && *p >= 0.0)
        && (probs.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(ArmDistribution::new(vec![0.5, 0.5]).is_ok());
        assert!(ArmDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(ArmDistribution::new(vec![-0.1, 1.1]).is_err());
        assert!(ArmDistribution::new(vec![]).is_err());
        assert!(ArmDistribution::point_mass(3, 3).is_err());
        assert!(serde_json::from_str::<ArmDistribution>("[0.2,0.2]").is_err());
    }

    #[test]
    fn sampling_respects_support() {
        let d = ArmDistribution::new(vec![0.0, 0.25, 0.0, 0.75]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = [0usize; 4];
        for _ in 0..40_000 {
            counts[d.sample(&mut rng)] += 1;
        }
        assert_eq!(counts[0], 0);
        assert_eq!(counts[2], 0);
        let frac = counts[1] as f64 / 40_000.0;
        assert!((frac - 0.25).abs() < 0.01, "{frac}");
    }
}
