//! Experiment orchestration: seeded Monte Carlo runs, the lower-bound and
//! adaptivity experiments, parameter sweeps, and persistence.
//!
//! Every experiment is described by an [`ExperimentConfig`] and is a pure
//! function of it: trials get seeds derived from the master seed and results
//! are stored in trial order, so serial and parallel runs write the same bytes.

mod adaptivity;
mod certify;
mod config;
mod monte_carlo;
mod output;
mod sweep;

pub use adaptivity::{
    adaptivity_experiment, run_adaptivity, AdaptivityReport, AdaptivityRow, QueryGrowth,
    DEFAULT_ALPHA, DEFAULT_DELTA, DEFAULT_DEPTHS, MAX_QUADRATIC_SHARE,
};
pub use certify::{certify_lower_bound, run_certify, CertifyReport, CERTIFY_SIGMAS, MAX_CERTIFY_BUDGET};
pub use config::{AnchorSpec, ClassConstructor, ClassSpec, ExperimentConfig, ExperimentKind, OutputFormat};
pub use monte_carlo::{
    binomial_half_width, binomial_sd, environment_rng, learner_rng, par_map, recompute_success,
    run_monte_carlo, trial_seed, true_function_for, MonteCarloOutput, MonteCarloSummary,
    TrialError, TrialPlan, TrialRecord, THREADS_ENV, Z_99,
};
pub use output::{read_csv_rows, read_rows, rows_to_string, write_rows};
pub use sweep::{expand_cells, run_sweep, set_path, SweepOutput, SweepRow};

use serde::{Deserialize, Serialize};

use crate::dec::{dec_at, dec_sup, default_anchors, vertex_anchors, DecResult};
use crate::environments::{make_gaussian_histogram, tv_distance, Gaussian, PiecewiseUniform};
use crate::error::{Error, Result};
use crate::games::{gamma, verify_certificate, GammaCertificate, DEFAULT_TOLERANCE};

/// Search resolution of coefficient runs when the config gives none.
pub const DEFAULT_DEC_SEARCH_RESOLUTION: f64 = 0.1;

/// Quadrature step of the discretization check, relative to `sigma`.
pub const TV_STEP_PER_SIGMA: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaReport {
    pub class: String,
    pub certificate: GammaCertificate,
    pub verified: bool,
}

pub fn run_gamma(config: &ExperimentConfig) -> Result<GammaReport> {
    let (class, _) = config.require_class()?.build()?;
    let alpha = match (config.alpha, &config.learner) {
        (Some(a), _) => a,
        (None, Some(l)) => l.params.alpha,
        (None, None) => return Err(Error::Config("missing field `alpha`".into())),
    };
    let certificate = gamma(&class, alpha, config.tolerance.unwrap_or(DEFAULT_TOLERANCE))?;
    Ok(GammaReport {
        class: class.name(),
        verified: verify_certificate(&class, alpha, &certificate),
        certificate,
    })
}

/// Coefficient at a single explicit anchor, or the maximum over a family.
pub fn run_dec(config: &ExperimentConfig) -> Result<DecResult> {
    let (class, _) = config.require_class()?.build()?;
    let eps = config.eps.ok_or_else(|| Error::Config("missing field `eps`".into()))?;
    let alpha = config
        .alpha
        .ok_or_else(|| Error::Config("missing field `alpha`".into()))?;
    let resolution = config.resolution.unwrap_or(DEFAULT_DEC_SEARCH_RESOLUTION);
    let f = class.num_functions();
    let anchors = match &config.anchors {
        None => default_anchors(f),
        Some(AnchorSpec::Named(name)) => match name.as_str() {
            "vertices" => vertex_anchors(f),
            "vertices+midpoints" => default_anchors(f),
            other => return Err(Error::Config(format!("unknown anchor family `{other}`"))),
        },
        Some(AnchorSpec::Explicit(list)) if list.len() == 1 => {
            return dec_at(&class, &list[0], eps, alpha, resolution);
        }
        Some(AnchorSpec::Explicit(list)) => list.clone(),
    };
    dec_sup(&class, eps, alpha, &anchors, resolution)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizeReport {
    pub mu: f64,
    pub sigma: f64,
    pub eps: f64,
    pub histogram: PiecewiseUniform,
    pub middle_buckets: usize,
    pub tv: f64,
    pub within_bound: bool,
}

pub fn discretize(mu: f64, sigma: f64, eps: f64) -> Result<DiscretizeReport> {
    let histogram = make_gaussian_histogram(mu, sigma, eps)?;
    let tv = tv_distance(&Gaussian::new(mu, sigma)?, &histogram, sigma * TV_STEP_PER_SIGMA)?;
    Ok(DiscretizeReport {
        mu,
        sigma,
        eps,
        middle_buckets: histogram.middle_buckets(),
        histogram,
        tv,
        within_bound: tv <= eps,
    })
}

pub fn run_discretize(config: &ExperimentConfig) -> Result<DiscretizeReport> {
    let get = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| Error::Config(format!("missing field `{name}`")))
    };
    discretize(
        get("mu", config.mu)?,
        get("sigma", config.sigma)?,
        get("eps", config.eps)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_from_config() {
        let c = ExperimentConfig::from_json(
            r#"{"kind":"gamma","alpha":0.1,"class":{"constructor":"tree","depth":2,"bucket_size":2}}"#,
        )
        .unwrap();
        let r = run_gamma(&c).unwrap();
        assert!((r.certificate.value - 0.125).abs() < 1e-9);
        assert!(r.verified);
    }

    #[test]
    fn dec_from_config() {
        let c = ExperimentConfig::from_json(
            r#"{"kind":"dec","eps":1.0,"alpha":0.5,"class":{"constructor":"k_armed","k":2},
                "anchors":[[0.5,0.5]]}"#,
        )
        .unwrap();
        assert!((run_dec(&c).unwrap().value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn discretization_within_bound() {
        let r = discretize(0.0, 1.0, 0.1).unwrap();
        assert_eq!(r.middle_buckets, 59);
        assert!(r.within_bound, "{}", r.tv);
    }
}
