//! Finite function classes and the elementary computations on them.
//!
//! A [`FunctionClass`] is a dense `functions × arms` matrix of mean rewards in
//! `[0, 1]`. Row `f` is the mean function of every model whose truth is `f`.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Absolute slack used when comparing a gap against `alpha`.
///
/// Gaps are differences of decimal means (`0.9 - 0.6` is not exactly `0.3` in
/// binary floating point); the comparison is non-strict, so a gap that equals
/// `alpha` up to rounding counts as within it.
pub const GAP_SLACK: f64 = 1e-12;

/// Optional human-readable names attached to a class.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Labels {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arms: Option<Vec<String>>,
}

#[derive(Deserialize, Serialize)]
struct RawClass {
    arms: usize,
    functions: usize,
    means: Vec<Vec<f64>>,
    #[serde(default)]
    labels: Labels,
}

/// A finite class of mean-reward functions over a finite arm set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawClass", into = "RawClass")]
pub struct FunctionClass {
    arms: usize,
    means: Vec<Vec<f64>>,
    labels: Labels,
}

impl TryFrom<RawClass> for FunctionClass {
    type Error = Error;

    fn try_from(raw: RawClass) -> Result<Self> {
        if raw.means.len() != raw.functions {
            return Err(param(
                "means",
                format!(
                    "declared {} functions but matrix has {} rows",
                    raw.functions,
                    raw.means.len()
                ),
            ));
        }
        let class = FunctionClass::new(raw.means)?;
        if class.arms != raw.arms {
            return Err(param(
                "means",
                format!("declared {} arms but rows have {}", raw.arms, class.arms),
            ));
        }
        class.with_labels(raw.labels)
    }
}

impl From<FunctionClass> for RawClass {
    fn from(class: FunctionClass) -> Self {
        RawClass {
            arms: class.arms,
            functions: class.means.len(),
            means: class.means,
            labels: class.labels,
        }
    }
}

impl FunctionClass {
    /// Builds a class from its row-major mean matrix.
    pub fn new(means: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = means.first() else {
            return Err(param("means", "a class needs at least one function"));
        };
        let arms = first.len();
        if arms == 0 {
            return Err(param("means", "a class needs at least one arm"));
        }
        for (f, row) in means.iter().enumerate() {
            if row.len() != arms {
                return Err(param(
                    "means",
                    format!("row {f} has {} entries, expected {arms}", row.len()),
                ));
            }
            if let Some((a, v)) = row
                .iter()
                .enumerate()
                .find(|(_, v)| !(0.0..=1.0).contains(*v))
            {
                return Err(param(
                    "means",
                    format!("entry [{f}][{a}] = {v} is outside [0, 1]"),
                ));
            }
        }
        Ok(Self {
            arms,
            means,
            labels: Labels::default(),
        })
    }

    pub fn with_labels(mut self, labels: Labels) -> Result<Self> {
        if let Some(names) = &labels.functions {
            if names.len() != self.num_functions() {
                return Err(param("labels.functions", "length must equal function count"));
            }
        }
        if let Some(names) = &labels.arms {
            if names.len() != self.arms {
                return Err(param("labels.arms", "length must equal arm count"));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.labels.class = Some(name.into());
        self
    }

    pub fn num_arms(&self) -> usize {
        self.arms
    }

    pub fn num_functions(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[Vec<f64>] {
        &self.means
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    /// Class name from the labels, or a shape-derived fallback.
    pub fn name(&self) -> String {
        self.labels
            .class
            .clone()
            .unwrap_or_else(|| format!("class-{}x{}", self.num_functions(), self.arms))
    }

    /// Mean-reward row of function `f`.
    pub fn row(&self, f: usize) -> Result<&[f64]> {
        self.means
            .get(f)
            .map(Vec::as_slice)
            .ok_or(Error::Index {
                what: "functions",
                index: f,
                len: self.num_functions(),
            })
    }

    pub fn max_mean(&self, f: usize) -> Result<f64> {
        Ok(self.row(f)?.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    /// Suboptimality gap of `arm` under function `f`.
    pub fn gap(&self, f: usize, arm: usize) -> Result<f64> {
        let row = self.row(f)?;
        let value = *row.get(arm).ok_or(Error::Index {
            what: "arms",
            index: arm,
            len: self.arms,
        })?;
        Ok(self.max_mean(f)? - value)
    }

    /// Whether `arm` is `alpha`-optimal under `f` (non-strict comparison).
    pub fn is_alpha_optimal(&self, f: usize, arm: usize, alpha: f64) -> Result<bool> {
        Ok(self.gap(f, arm)? <= alpha + GAP_SLACK)
    }

    /// Returns a class with `row` appended.
    pub fn with_function(&self, row: Vec<f64>) -> Result<Self> {
        let mut means = self.means.clone();
        means.push(row);
        FunctionClass::new(means)
    }
}

/// Binary `functions × arms` indicator of `alpha`-optimality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapMatrix {
    rows: Vec<Vec<bool>>,
}

impl GapMatrix {
    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn num_functions(&self) -> usize {
        self.rows.len()
    }

    pub fn num_arms(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, f: usize, arm: usize) -> bool {
        self.rows[f][arm]
    }

    /// Numeric copy, restricted to the listed rows.
    pub fn to_f64_rows(&self, keep: impl IntoIterator<Item = usize>) -> Vec<Vec<f64>> {
        keep.into_iter()
            .map(|f| {
                self.rows[f]
                    .iter()
                    .map(|&b| if b { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.to_f64_rows(0..self.rows.len())
    }

    /// Probability that an arm drawn from `p` is `alpha`-optimal under `f`.
    pub fn coverage(&self, f: usize, p: &[f64]) -> f64 {
        self.rows[f]
            .iter()
            .zip(p)
            .filter(|(b, _)| **b)
            .map(|(_, w)| w)
            .sum()
    }
}

/// Indicator matrix of `max_a' means[f][a'] - means[f][a] <= alpha`.
pub fn gap_matrix(class: &FunctionClass, alpha: f64) -> Result<GapMatrix> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(param("alpha", format!("{alpha} must be positive")));
    }
    let rows = class
        .means
        .iter()
        .map(|row| {
            let best = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            row.iter().map(|v| best - v <= alpha + GAP_SLACK).collect()
        })
        .collect();
    Ok(GapMatrix { rows })
}

/// Least-index arm maximizing the mean of function `f`.
pub fn argmax_arm(class: &FunctionClass, f: usize) -> Result<usize> {
    let row = class.row(f)?;
    Ok(argmax_least_index(row))
}

/// Index of the first maximal entry.
pub(crate) fn argmax_least_index(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}
