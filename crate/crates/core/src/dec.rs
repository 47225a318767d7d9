//! Decision-estimation coefficient over finite classes.
//!
//! For an anchor `f̄` in the convex hull of the class, the coefficient is
//! `inf_{p,q} sup_{f ∈ H_{q,ε}(f̄)} P_{π∼p}(gap_f(π) > α)` where the version
//! set `H_{q,ε}(f̄)` keeps the functions within mean squared distance `ε²` of
//! `f̄` under `q`. An empty version set has value 0.
//!
//! The infimum over `q` is taken over a finite candidate family (point masses,
//! the uniform distribution, and a simplex grid); the infimum over `p` is
//! solved exactly by the maximin LP. Reported values are therefore upper
//! bounds on the infimum.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::class::{gap_matrix, FunctionClass, GapMatrix};
use crate::dist::{is_probability_vector, ArmDistribution};
use crate::error::{check_unit_open, param, Error, Result};
use crate::games::{solve_maximin, DEFAULT_TOLERANCE};
use crate::learners::{est_bound, mixture_values};

/// Largest candidate family a search will enumerate.
pub const MAX_DEC_CANDIDATES: usize = 1_000_000;

/// Slack on the version-set inequality to absorb rounding in the distance sum.
const MEMBERSHIP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VersionSet {
    pub members: Vec<usize>,
    pub anchor: Vec<f64>,
    pub q: ArmDistribution,
    pub eps: f64,
}

/// Which side of the true quantity a reported value lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundDirection {
    /// At least the true infimum over `(p, q)`.
    UpperBound,
    /// At most the true supremum over anchors.
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecResult {
    pub value: f64,
    pub p_witness: ArmDistribution,
    pub q_witness: ArmDistribution,
    pub anchor: Vec<f64>,
    pub eps: f64,
    pub alpha: f64,
    pub search_resolution: f64,
    pub bound_direction: BoundDirection,
    /// Version set at `q_witness`.
    pub members: Vec<usize>,
    pub candidates_evaluated: usize,
}

fn check_anchor(class: &FunctionClass, anchor: &[f64]) -> Result<()> {
    if anchor.len() != class.num_functions() || !is_probability_vector(anchor) {
        return Err(param(
            "anchor",
            format!(
                "must be a probability vector over {} functions",
                class.num_functions()
            ),
        ));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps >= 0.0 {
        Ok(())
    } else {
        Err(param("eps", format!("{eps} must be non-negative")))
    }
}

/// Squared deviation of every function from the anchor values, arm by arm.
fn deviations(class: &FunctionClass, anchor_values: &[f64]) -> Vec<Vec<f64>> {
    class
        .means()
        .iter()
        .map(|row| {
            row.iter()
                .zip(anchor_values)
                .map(|(v, a)| (v - a) * (v - a))
                .collect()
        })
        .collect()
}

fn members_under(dev: &[Vec<f64>], q: &[f64], eps: f64) -> Vec<usize> {
    let limit = eps * eps + MEMBERSHIP_SLACK;
    dev.iter()
        .enumerate()
        .filter(|(_, row)| row.iter().zip(q).map(|(d, w)| d * w).sum::<f64>() <= limit)
        .map(|(f, _)| f)
        .collect()
}

/// Functions within squared distance `eps²` of the anchor mixture under `q`.
pub fn version_set(
    class: &FunctionClass,
    anchor: &[f64],
    q: &ArmDistribution,
    eps: f64,
) -> Result<VersionSet> {
    check_anchor(class, anchor)?;
    check_eps(eps)?;
    if q.len() != class.num_arms() {
        return Err(param("q", "length must equal the number of arms"));
    }
    let dev = deviations(class, &mixture_values(class, anchor));
    Ok(VersionSet {
        members: members_under(&dev, q.probs(), eps),
        anchor: anchor.to_vec(),
        q: q.clone(),
        eps,
    })
}

/// Number of compositions of `k` into `parts` non-negative parts, if at most `cap`.
fn grid_size(parts: usize, k: usize, cap: usize) -> Option<usize> {
    // C(k + parts - 1, parts - 1), built incrementally so overflow is caught early.
    let r = parts - 1;
    let mut c: u128 = 1;
    for i in 1..=r {
        c = c * (k + i) as u128 / i as u128;
        if c > cap as u128 {
            return None;
        }
    }
    Some(c as usize)
}

/// Candidate sampling distributions: point masses, uniform, then the grid
/// with spacing `1/k`, `k = ⌈1/resolution⌉`.
fn candidates(arms: usize, resolution: f64) -> Result<Vec<Vec<f64>>> {
    check_unit_open("resolution", resolution)?;
    let k = (1.0 / resolution - 1e-9).ceil().max(1.0) as usize;
    let grid = grid_size(arms, k, MAX_DEC_CANDIDATES).ok_or_else(|| {
        Error::Capacity(format!(
            "a simplex grid at resolution {resolution} over {arms} arms exceeds {MAX_DEC_CANDIDATES} points"
        ))
    })?;
    let mut out = Vec::with_capacity(arms + 1 + grid);
    for a in 0..arms {
        let mut q = vec![0.0; arms];
        q[a] = 1.0;
        out.push(q);
    }
    out.push(vec![1.0 / arms as f64; arms]);
    let mut counts = vec![0usize; arms];
    compositions(&mut counts, 0, k, &mut |c| {
        out.push(c.iter().map(|&n| n as f64 / k as f64).collect())
    });
    Ok(out)
}

fn compositions(counts: &mut [usize], pos: usize, left: usize, emit: &mut impl FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = left;
        emit(counts);
        return;
    }
    for n in (0..=left).rev() {
        counts[pos] = n;
        compositions(counts, pos + 1, left - n, emit);
    }
}

/// Best `(p, q)` found for one anchor.
#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    pub value: f64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub members: Vec<usize>,
    pub evaluated: usize,
}

/// Reusable candidate search. Inner LP values depend only on the member set,
/// so they are cached across anchors.
pub(crate) struct DecSearch<'c> {
    class: &'c FunctionClass,
    gaps: GapMatrix,
    candidates: Vec<Vec<f64>>,
    cache: HashMap<Vec<u64>, (f64, Vec<f64>)>,
}

impl<'c> DecSearch<'c> {
    pub fn new(class: &'c FunctionClass, alpha: f64, resolution: f64) -> Result<Self> {
        Ok(Self {
            class,
            gaps: gap_matrix(class, alpha)?,
            candidates: candidates(class.num_arms(), resolution)?,
            cache: HashMap::new(),
        })
    }

    /// `inf_p sup_{f ∈ members} P_p(gap_f > α)` with its minimizing `p`.
    fn inner(&mut self, members: &[usize]) -> Result<(f64, Vec<f64>)> {
        let arms = self.class.num_arms();
        if members.is_empty() {
            return Ok((0.0, vec![1.0 / arms as f64; arms]));
        }
        let mut key = vec![0u64; self.class.num_functions().div_ceil(64)];
        for &f in members {
            key[f / 64] |= 1 << (f % 64);
        }
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let rows = self.gaps.to_f64_rows(members.iter().copied());
        let sol = solve_maximin(&rows, DEFAULT_TOLERANCE)?;
        let out = ((1.0 - sol.value).clamp(0.0, 1.0), sol.p_star.probs().to_vec());
        self.cache.insert(key, out.clone());
        Ok(out)
    }

    /// Minimizes over candidates; the first candidate attaining the minimum wins.
    pub fn solve(&mut self, anchor_values: &[f64], eps: f64) -> Result<SearchOutcome> {
        let dev = deviations(self.class, anchor_values);
        let mut best: Option<SearchOutcome> = None;
        let mut evaluated = 0;
        for i in 0..self.candidates.len() {
            evaluated += 1;
            let members = members_under(&dev, &self.candidates[i], eps);
            let (value, p) = self.inner(&members)?;
            if best.as_ref().is_none_or(|b| value < b.value) {
                best = Some(SearchOutcome {
                    value,
                    p,
                    q: self.candidates[i].clone(),
                    members,
                    evaluated: 0,
                });
                if value <= 0.0 {
                    break;
                }
            }
        }
        let mut best = best.expect("candidate family is never empty");
        best.evaluated = evaluated;
        Ok(best)
    }
}

/// Coefficient at one anchor mixture, by candidate search.
pub fn dec_at(
    class: &FunctionClass,
    anchor: &[f64],
    eps: f64,
    alpha: f64,
    resolution: f64,
) -> Result<DecResult> {
    check_anchor(class, anchor)?;
    check_eps(eps)?;
    let mut search = DecSearch::new(class, alpha, resolution)?;
    let out = search.solve(&mixture_values(class, anchor), eps)?;
    Ok(DecResult {
        value: out.value,
        p_witness: ArmDistribution::from_weights(&out.p)?,
        q_witness: ArmDistribution::new(out.q)?,
        anchor: anchor.to_vec(),
        eps,
        alpha,
        search_resolution: resolution,
        bound_direction: BoundDirection::UpperBound,
        members: out.members,
        candidates_evaluated: out.evaluated,
    })
}

/// Largest coefficient over `anchors`; ties keep the earliest anchor.
pub fn dec_sup(
    class: &FunctionClass,
    eps: f64,
    alpha: f64,
    anchors: &[Vec<f64>],
    resolution: f64,
) -> Result<DecResult> {
    if anchors.is_empty() {
        return Err(param("anchors", "need at least one anchor"));
    }
    check_eps(eps)?;
    let mut search = DecSearch::new(class, alpha, resolution)?;
    let mut best: Option<(DecResult, f64)> = None;
    let mut evaluated = 0;
    for anchor in anchors {
        check_anchor(class, anchor)?;
        let out = search.solve(&mixture_values(class, anchor), eps)?;
        evaluated += out.evaluated;
        if best.as_ref().is_none_or(|(_, v)| out.value > *v) {
            let result = DecResult {
                value: out.value,
                p_witness: ArmDistribution::from_weights(&out.p)?,
                q_witness: ArmDistribution::new(out.q)?,
                anchor: anchor.clone(),
                eps,
                alpha,
                search_resolution: resolution,
                bound_direction: BoundDirection::LowerBound,
                members: out.members,
                candidates_evaluated: 0,
            };
            best = Some((result, out.value));
        }
    }
    let (mut result, _) = best.expect("anchors is non-empty");
    result.candidates_evaluated = evaluated;
    Ok(result)
}

/// Vertices of the hull (one point mass per function).
pub fn vertex_anchors(num_functions: usize) -> Vec<Vec<f64>> {
    (0..num_functions)
        .map(|f| {
            let mut w = vec![0.0; num_functions];
            w[f] = 1.0;
            w
        })
        .collect()
}

/// Vertices, all pairwise midpoints, and the centroid.
pub fn default_anchors(num_functions: usize) -> Vec<Vec<f64>> {
    let mut out = vertex_anchors(num_functions);
    for i in 0..num_functions {
        for j in i + 1..num_functions {
            let mut w = vec![0.0; num_functions];
            w[i] = 0.5;
            w[j] = 0.5;
            out.push(w);
        }
    }
    if num_functions > 2 {
        out.push(vec![1.0 / num_functions as f64; num_functions]);
    }
    out
}

/// Number of confidence rounds `L = ⌈log₂(4/δ)⌉`.
pub fn confidence_rounds(delta: f64) -> Result<usize> {
    check_unit_open("delta", delta)?;
    Ok((4.0 / delta).log2().ceil() as usize)
}

/// Version-set radius `8 √((L/T) · EST(2T/L, δ/(4L)))` for horizon `T`.
pub fn eps_bar(horizon: usize, delta: f64, num_functions: usize) -> Result<f64> {
    if horizon == 0 {
        return Err(param("horizon", "must be positive"));
    }
    let l = confidence_rounds(delta)?;
    let est = est_bound(num_functions, delta / (4.0 * l as f64))?;
    Ok(8.0 * (l as f64 / horizon as f64 * est).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::{make_k_armed_surrogate, make_tree_class};

    #[test]
    fn version_set_cases() {
        let (class, _) = make_tree_class(2, 1).unwrap();
        let anchor = vertex_anchors(4).remove(0);
        let root = ArmDistribution::point_mass(7, 0).unwrap();
        let h = version_set(&class, &anchor, &root, 0.1).unwrap();
        assert_eq!(h.members, vec![0, 1]);
        let h = version_set(&class, &anchor, &root, 1.0).unwrap();
        assert_eq!(h.members, vec![0, 1, 2, 3]);
        let full = ArmDistribution::uniform(7).unwrap();
        assert_eq!(version_set(&class, &anchor, &full, 0.0).unwrap().members, vec![0]);
        assert!(version_set(&class, &[0.5, 0.5], &full, 0.1).is_err());
    }

    #[test]
    fn two_arm_surrogate_vacuous() {
        let class = make_k_armed_surrogate(2).unwrap();
        let r = dec_at(&class, &[0.5, 0.5], 1.0, 0.5, 0.1).unwrap();
        assert!((r.value - 0.5).abs() < 1e-9);
        assert!((r.p_witness.probs()[0] - 0.5).abs() < 1e-9);
        let s = dec_sup(&class, 1.0, 0.5, &default_anchors(2), 0.1).unwrap();
        assert!((s.value - 0.5).abs() < 1e-9);
        assert_eq!(s.bound_direction, BoundDirection::LowerBound);
    }

    #[test]
    fn in_class_anchor_gives_zero() {
        let (class, _) = make_tree_class(2, 1).unwrap();
        for anchor in vertex_anchors(4) {
            let r = dec_at(&class, &anchor, 0.05, 0.2, 0.25).unwrap();
            assert_eq!(r.value, 0.0);
        }
        let s = dec_sup(&class, 0.1, 0.2, &default_anchors(4), 0.25).unwrap();
        assert_eq!(s.value, 0.0);
        let single = FunctionClass::new(vec![vec![0.2, 0.9]]).unwrap();
        assert_eq!(dec_sup(&single, 0.5, 0.1, &default_anchors(1), 0.5).unwrap().value, 0.0);
    }

    #[test]
    fn grid_counts_and_capacity() {
        assert_eq!(candidates(3, 0.5).unwrap().len(), 3 + 1 + 6);
        assert_eq!(grid_size(3, 20, usize::MAX), Some(231));
        assert!(matches!(candidates(50, 0.01), Err(Error::Capacity(_))));
        for q in candidates(4, 0.25).unwrap() {
            assert!(is_probability_vector(&q));
        }
    }

    #[test]
    fn radius_formula() {
        let l = confidence_rounds(0.2).unwrap();
        assert_eq!(l, 5);
        let est = 4.0 * 4f64.ln() + 16.0 * (2.0 / (0.2 / 20.0f64)).ln();
        let e = eps_bar(400, 0.2, 4).unwrap();
        assert!((e - 8.0 * (5.0 / 400.0 * est).sqrt()).abs() < 1e-12);
    }
}
