//! Histogram approximation of Gaussian reward laws and total-variation
//! quadrature.
//!
//! A Gaussian with mean in `[0, 1]` is replaced by a piecewise-uniform law on
//! `m = w + 2` buckets. The two outer buckets, below `c1` and above `c2`, carry
//! no mass; `c1` cuts `eps/4` of the lower tail of `N(0, σ²)` and `c2` cuts
//! `eps/4` of the upper tail of `N(1, σ²)`. The middle `[c1, c2]` is split
//! into `w = ⌈L (c2 - c1)² / eps⌉` equal buckets, where
//! `L = 1 / (σ² √(2πe))` bounds the slope of any `N(·, σ²)` density.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{check_unit_open, param, Error, Result};

/// Largest middle-bucket count the discretizer will produce.
pub const MAX_HISTOGRAM_BUCKETS: usize = 10_000_000;

/// Mass left outside the quadrature range of each density.
const QUADRATURE_MASS_TOLERANCE: f64 = 1e-6;

const MAX_QUADRATURE_CELLS: f64 = 5e8;

/// A univariate density that can be integrated numerically.
pub trait Density {
    fn pdf(&self, x: f64) -> f64;

    /// Interval holding all but `mass_tolerance` of the mass.
    fn effective_support(&self, mass_tolerance: f64) -> (f64, f64);

    /// Points where the density may jump.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub mean: f64,
    pub sd: f64,
}

impl Gaussian {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        if !(mean.is_finite() && sd.is_finite() && sd > 0.0) {
            return Err(param("sd", format!("need finite mean and positive sd, got ({mean}, {sd})")));
        }
        Ok(Self { mean, sd })
    }

    fn normal(&self) -> Normal {
        Normal::new(self.mean, self.sd).expect("validated parameters")
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.normal().cdf(x)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        self.normal().inverse_cdf(p)
    }

    /// Largest slope of the density, attained one sd from the mean.
    pub fn lipschitz(&self) -> f64 {
        1.0 / (self.sd * self.sd * (2.0 * std::f64::consts::PI * std::f64::consts::E).sqrt())
    }
}

impl Density for Gaussian {
    fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.sd;
        (-0.5 * z * z).exp() / (self.sd * (2.0 * std::f64::consts::PI).sqrt())
    }

    fn effective_support(&self, mass_tolerance: f64) -> (f64, f64) {
        let half = self.sd * Normal::standard().inverse_cdf(1.0 - mass_tolerance / 2.0);
        (self.mean - half, self.mean + half)
    }
}

/// Piecewise-uniform law with unbounded, massless outer buckets.
///
/// `edges` are the `w + 1` finite breakpoints `c1 = e_0 < ... < e_w = c2`;
/// `masses` has `w + 2` entries, one per bucket from `(-∞, c1)` to
/// `[c2, ∞)`, and sums to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseUniform {
    pub edges: Vec<f64>,
    pub masses: Vec<f64>,
}

impl PiecewiseUniform {
    pub fn new(edges: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 || masses.len() != edges.len() + 1 {
            return Err(param("masses", "need w + 1 edges and w + 2 masses with w >= 1"));
        }
        if edges.windows(2).any(|e| !(e[0] < e[1])) {
            return Err(param("edges", "breakpoints must be strictly increasing"));
        }
        if masses.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(param("masses", "masses must be finite and non-negative"));
        }
        if masses[0] != 0.0 || masses[masses.len() - 1] != 0.0 {
            return Err(param("masses", "outer buckets must be empty"));
        }
        if (masses.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(param("masses", "masses must sum to 1"));
        }
        Ok(Self { edges, masses })
    }

    /// Number of buckets `m = w + 2`.
    pub fn bucket_count(&self) -> usize {
        self.masses.len()
    }

    /// Number of middle buckets `w`.
    pub fn middle_buckets(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn lower(&self) -> f64 {
        self.edges[0]
    }

    pub fn upper(&self) -> f64 {
        self.edges[self.edges.len() - 1]
    }

    /// Bucket index of `x`, from 0 (below `c1`) to `w + 1` (at or above `c2`).
    pub fn bucket_of(&self, x: f64) -> usize {
        self.edges.partition_point(|e| *e <= x)
    }

    /// Density of the uniform law on bucket `b`, which is the conditional law
    /// of any mixture of bucket-uniform components given that bucket.
    pub fn conditional_pdf(&self, bucket: usize, x: f64) -> f64 {
        if bucket == 0 || bucket > self.middle_buckets() || self.bucket_of(x) != bucket {
            return 0.0;
        }
        1.0 / (self.edges[bucket] - self.edges[bucket - 1])
    }
}

impl Density for PiecewiseUniform {
    fn pdf(&self, x: f64) -> f64 {
        let b = self.bucket_of(x);
        if b == 0 || b > self.middle_buckets() {
            return 0.0;
        }
        self.masses[b] / (self.edges[b] - self.edges[b - 1])
    }

    fn effective_support(&self, _mass_tolerance: f64) -> (f64, f64) {
        (self.lower(), self.upper())
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.edges.clone()
    }
}

/// Histogram surrogate for `N(mu, sigma²)` with TV distance at most `eps`.
pub fn make_gaussian_histogram(mu: f64, sigma: f64, eps: f64) -> Result<PiecewiseUniform> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(param("mu", format!("{mu} must lie in [0, 1]")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(param("sigma", format!("{sigma} must be positive")));
    }
    check_unit_open("eps", eps)?;

    let left = Gaussian::new(0.0, sigma)?;
    let right = Gaussian::new(1.0, sigma)?;
    let target = Gaussian::new(mu, sigma)?;
    let c1 = left.quantile(eps / 4.0);
    let c2 = right.quantile(1.0 - eps / 4.0);
    if !(c1.is_finite() && c2.is_finite() && c1 < c2) {
        return Err(Error::Precision(format!("tail cut points ({c1}, {c2}) are not usable")));
    }
    let width = c2 - c1;
    let buckets = (target.lipschitz() * width * width / eps).ceil().max(1.0);
    if buckets > MAX_HISTOGRAM_BUCKETS as f64 {
        return Err(Error::Precision(format!(
            "eps = {eps} needs {buckets} buckets (limit {MAX_HISTOGRAM_BUCKETS})"
        )));
    }
    let w = buckets as usize;
    let edges: Vec<f64> = (0..=w)
        .map(|i| if i == w { c2 } else { c1 + width * i as f64 / w as f64 })
        .collect();
    if edges.windows(2).any(|e| !(e[0] < e[1])) {
        return Err(Error::Precision("bucket width underflows".into()));
    }

    // Each middle bucket gets its Gaussian mass plus eps/(2w), which puts back
    // the tail mass cut off outside [c1, c2]; the final division makes the
    // total exactly one.
    let bump = eps / (2.0 * w as f64);
    let mut masses = Vec::with_capacity(w + 2);
    masses.push(0.0);
    masses.extend(
        edges
            .windows(2)
            .map(|e| (target.cdf(e[1]) - target.cdf(e[0])).max(0.0) + bump),
    );
    masses.push(0.0);
    let total: f64 = masses.iter().sum();
    for m in &mut masses {
        *m /= total;
    }
    PiecewiseUniform::new(edges, masses)
}

/// `½ ∫ |p_a - p_b|` by midpoint quadrature with cells no wider than `step`.
///
/// The range covers all but `1e-6` of each density's mass, and cells never
/// straddle a breakpoint of either density.
pub fn tv_distance(a: &dyn Density, b: &dyn Density, step: f64) -> Result<f64> {
    if !(step.is_finite() && step > 0.0) {
        return Err(param("step", format!("{step} must be positive")));
    }
    let (a_lo, a_hi) = a.effective_support(QUADRATURE_MASS_TOLERANCE);
    let (b_lo, b_hi) = b.effective_support(QUADRATURE_MASS_TOLERANCE);
    let (lo, hi) = (a_lo.min(b_lo), a_hi.max(b_hi));
    if (hi - lo) / step > MAX_QUADRATURE_CELLS {
        return Err(param("step", format!("{step} is too fine for range [{lo}, {hi}]")));
    }

    let mut cuts: Vec<f64> = a
        .breakpoints()
        .into_iter()
        .chain(b.breakpoints())
        .filter(|x| *x > lo && *x < hi)
        .collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut total = 0.0;
    for seg in cuts.windows(2) {
        let len = seg[1] - seg[0];
        let cells = (len / step).ceil().max(1.0) as usize;
        let h = len / cells as f64;
        for i in 0..cells {
            let x = seg[0] + (i as f64 + 0.5) * h;
            total += (a.pdf(x) - b.pdf(x)).abs() * h;
        }
    }
    Ok(0.5 * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cut_point_is_normal_quantile() {
        let h = make_gaussian_histogram(0.0, 1.0, 0.1).unwrap();
        assert!((h.lower() + 1.959_963_984_540_054).abs() < 1e-9);
        assert!((h.upper() - 2.959_963_984_540_054).abs() < 1e-9);
        // L (c2 - c1)^2 / eps with L = 1/sqrt(2 pi e)
        assert_eq!(h.middle_buckets(), 59);
        assert_eq!(h.bucket_count(), 61);
    }

    #[test]
    fn histogram_invariants() {
        let h = make_gaussian_histogram(0.5, 0.5, 0.02).unwrap();
        assert_eq!(h.masses[0], 0.0);
        assert_eq!(*h.masses.last().unwrap(), 0.0);
        assert!((h.masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // constant density inside each bucket
        for b in 1..=h.middle_buckets() {
            let (l, r) = (h.edges[b - 1], h.edges[b]);
            let q1 = h.pdf(l + 0.1 * (r - l));
            let q2 = h.pdf(l + 0.9 * (r - l));
            assert_eq!(q1, q2);
            assert_eq!(h.conditional_pdf(b, 0.5 * (l + r)), 1.0 / (r - l));
        }
        assert_eq!(h.pdf(h.lower() - 1.0), 0.0);
        assert_eq!(h.pdf(h.upper() + 1.0), 0.0);
    }

    #[test]
    fn tv_identity_and_symmetry() {
        let g = Gaussian::new(0.3, 0.7).unwrap();
        assert!(tv_distance(&g, &g, 1e-3).unwrap() < 1e-12);
        let h = make_gaussian_histogram(0.3, 0.7, 0.1).unwrap();
        let ab = tv_distance(&g, &h, 1e-3).unwrap();
        let ba = tv_distance(&h, &g, 1e-3).unwrap();
        assert!((ab - ba).abs() < 1e-12);
    }

    #[test]
    fn coarse_eps_still_bounded() {
        for &eps in &[0.5, 0.9, 0.99] {
            let h = make_gaussian_histogram(0.5, 1.0, eps).unwrap();
            let tv = tv_distance(&Gaussian::new(0.5, 1.0).unwrap(), &h, 1e-3).unwrap();
            assert!(tv <= eps, "eps {eps}: tv {tv}");
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(make_gaussian_histogram(1.5, 1.0, 0.1).is_err());
        assert!(make_gaussian_histogram(0.5, 0.0, 0.1).is_err());
        assert!(make_gaussian_histogram(0.5, 1.0, 1.0).is_err());
        assert!(matches!(
            make_gaussian_histogram(0.5, 0.001, 1e-9),
            Err(Error::Precision(_))
        ));
        let g = Gaussian::new(0.0, 1.0).unwrap();
        assert!(tv_distance(&g, &g, 0.0).is_err());
    }
}
