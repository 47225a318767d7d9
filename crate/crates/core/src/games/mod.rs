//! The maximin coverage game and the generalized maximin volume.
//!
//! For a gap matrix `B` (functions × arms) the volume is
//! `max_p min_f Σ_a p(a) B[f][a]`, the value of a finite zero-sum game in
//! which the learner mixes over arms and nature picks the true function. It is
//! solved exactly as a linear program, and both players' optimal mixtures are
//! returned so that the value can be checked without re-solving.

mod simplex;

use serde::{Deserialize, Serialize};

use crate::class::{gap_matrix, FunctionClass};
use crate::dist::{is_probability_vector, ArmDistribution};
use crate::error::{param, Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Optimal strategies of the maximin game on a payoff matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximinSolution {
    pub value: f64,
    /// Maximizer's mixture over columns (arms).
    pub p_star: ArmDistribution,
    /// Minimizer's mixture over rows (functions).
    pub dual: Vec<f64>,
}

/// Solves `max_p min_f Σ_a p(a) B[f][a]` for a real matrix `B`.
///
/// Entries are shifted so the payoff is at least one everywhere, which makes
/// the game value positive and lets the LP start from the slack basis.
pub fn solve_maximin(b: &[Vec<f64>], tolerance: f64) -> Result<MaximinSolution> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(param("tolerance", format!("{tolerance} must be positive")));
    }
    let rows = b.len();
    let cols = b.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(param("B", "payoff matrix must be nonempty"));
    }
    if b.iter().any(|r| r.len() != cols) {
        return Err(param("B", "payoff matrix rows must have equal length"));
    }
    if b.iter().flatten().any(|v| !v.is_finite()) {
        return Err(param("B", "payoff entries must be finite"));
    }

    let min = b.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let shift = 1.0 - min;
    // packing LP: rows are arms, columns are functions
    let packing: Vec<Vec<f64>> = (0..cols)
        .map(|a| (0..rows).map(|f| b[f][a] + shift).collect())
        .collect();
    let lp = simplex::solve_packing(&packing)?;
    if !(lp.objective.is_finite() && lp.objective > 0.0) {
        return Err(Error::Solver(format!("degenerate objective {}", lp.objective)));
    }

    let p_star = ArmDistribution::from_weights(&lp.x)?;
    let dual = ArmDistribution::from_weights(&lp.y)?.probs().to_vec();
    let value = 1.0 / lp.objective - shift;

    let primal = min_row_payoff(b, p_star.probs());
    let dual_bound = max_col_payoff(b, &dual);
    if primal < value - tolerance || dual_bound > value + tolerance {
        return Err(Error::Solver(format!(
            "certificate check failed: primal {primal}, dual {dual_bound}, value {value}"
        )));
    }
    Ok(MaximinSolution {
        value,
        p_star,
        dual,
    })
}

/// `min_f Σ_a p(a) B[f][a]`.
pub fn min_row_payoff(b: &[Vec<f64>], p: &[f64]) -> f64 {
    b.iter()
        .map(|row| row.iter().zip(p).map(|(v, w)| v * w).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// `max_a Σ_f λ(f) B[f][a]`.
pub fn max_col_payoff(b: &[Vec<f64>], lambda: &[f64]) -> f64 {
    let cols = b.first().map_or(0, Vec::len);
    (0..cols)
        .map(|a| b.iter().zip(lambda).map(|(row, l)| row[a] * l).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Generalized maximin volume with primal and dual witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaCertificate {
    pub value: f64,
    /// Kept as a raw vector: a certificate read back from disk is untrusted
    /// until [`verify_certificate`] accepts it.
    pub p_star: Vec<f64>,
    pub worst_function: usize,
    pub dual_weights: Vec<f64>,
    pub alpha: f64,
    pub tolerance: f64,
}

impl GammaCertificate {
    pub fn p_star(&self) -> Result<ArmDistribution> {
        ArmDistribution::new(self.p_star.clone())
    }
}

/// Computes the volume of `class` at accuracy `alpha` in `(0, 1]`.
pub fn gamma(class: &FunctionClass, alpha: f64, tolerance: f64) -> Result<GammaCertificate> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(param("alpha", format!("{alpha} must lie in (0, 1]")));
    }
    let b = gap_matrix(class, alpha)?.to_f64();
    let sol = solve_maximin(&b, tolerance)?;
    let p = sol.p_star.probs();
    let worst_function = (0..b.len())
        .map(|f| (f, b[f].iter().zip(p).map(|(v, w)| v * w).sum::<f64>()))
        .fold((0, f64::INFINITY), |best, (f, c)| if c < best.1 { (f, c) } else { best })
        .0;
    Ok(GammaCertificate {
        value: sol.value.clamp(0.0, 1.0),
        p_star: p.to_vec(),
        worst_function,
        dual_weights: sol.dual,
        alpha,
        tolerance,
    })
}

/// Re-checks both certificate inequalities against `class` without solving.
pub fn verify_certificate(class: &FunctionClass, alpha: f64, cert: &GammaCertificate) -> bool {
    let Ok(b) = gap_matrix(class, alpha).map(|g| g.to_f64()) else {
        return false;
    };
    if cert.p_star.len() != class.num_arms()
        || cert.dual_weights.len() != class.num_functions()
        || cert.worst_function >= class.num_functions()
        || !is_probability_vector(&cert.p_star)
        || !is_probability_vector(&cert.dual_weights)
        || !(0.0..=1.0).contains(&cert.value)
    {
        return false;
    }
    min_row_payoff(&b, &cert.p_star) >= cert.value - cert.tolerance
        && max_col_payoff(&b, &cert.dual_weights) <= cert.value + cert.tolerance
}
