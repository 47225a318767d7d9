//! Adaptive descent through the tree class: one coin-bias test per level,
//! then a Chernoff scan of the reached bucket.

use super::{best_estimate, check_source, LearnerName, LearnerParams};
use crate::class::FunctionClass;
use crate::environments::TreeMeta;
use crate::error::{param, Error, Result};
use crate::estimators::chernoff_sample_count;
use crate::noise::RewardSource;
use crate::transcript::{QueryLog, Transcript};

/// Pull counts of the descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSchedule {
    /// Pulls per internal node on the branch.
    pub internal_reps: usize,
    /// Pulls per arm of the final bucket.
    pub bucket_reps: usize,
}

impl TreeSchedule {
    pub fn total(&self, meta: &TreeMeta) -> usize {
        meta.depth * self.internal_reps + meta.bucket_size * self.bucket_reps
    }
}

/// Default counts with `S = d + N` tests, each failing with probability at
/// most `δ/(2S)`: `⌈18 ln(4S/δ)⌉` pulls per node separate the edge means
/// `1/3` and `2/3`; `⌈(8/α²) ln(4S/δ)⌉` pulls per bucket arm.
pub fn tree_descent_schedule(meta: &TreeMeta, params: &LearnerParams) -> Result<TreeSchedule> {
    params.validate()?;
    let s = meta.depth + meta.bucket_size;
    let internal_reps = match params.internal_reps {
        Some(0) => return Err(param("internal_reps", "must be at least 1")),
        Some(k) => k,
        None => (18.0 * (4.0 * s as f64 / params.delta).ln()).ceil() as usize,
    };
    let bucket_reps = match params.bucket_reps {
        Some(k) => k,
        None => chernoff_sample_count(params.alpha, params.delta, s)?,
    };
    Ok(TreeSchedule {
        internal_reps,
        bucket_reps,
    })
}

/// Runs the descent. Goes right at a node iff its empirical mean is at least
/// `1/2`. With zero bucket pulls the first arm of the bucket is returned.
pub fn run_tree_descent<S>(
    meta: &TreeMeta,
    class: &FunctionClass,
    params: &LearnerParams,
    source: &mut S,
) -> Result<Transcript>
where
    S: RewardSource + ?Sized,
{
    if !meta.matches(class) {
        return Err(Error::Contract(format!(
            "class does not have the layout of a depth-{} tree with buckets of {}",
            meta.depth, meta.bucket_size
        )));
    }
    check_source(class, source)?;
    let schedule = tree_descent_schedule(meta, params)?;
    let mut log = QueryLog::new(source);

    let mut node = 0;
    for _ in 0..meta.depth {
        let rewards = log.query_many(meta.internal_arm(node), schedule.internal_reps)?;
        let mean = rewards.iter().sum::<f64>() / rewards.len() as f64;
        node = 2 * node + 1 + usize::from(mean >= 0.5);
    }
    let leaf = node - meta.internal_count();
    let internal_queries = log.len();

    let bucket = meta.bucket_arms(leaf);
    let output = if schedule.bucket_reps == 0 {
        bucket.start
    } else {
        let mut estimates = Vec::with_capacity(meta.bucket_size);
        for arm in bucket {
            let rewards = log.query_many(arm, schedule.bucket_reps)?;
            estimates.push((arm, rewards.iter().sum::<f64>() / rewards.len() as f64));
        }
        best_estimate(estimates).expect("bucket is non-empty")
    };

    let mut t = log.finish(LearnerName::TreeDescent.as_str(), output);
    t.diagnostics.insert("leaf".into(), leaf as f64);
    t.diagnostics
        .insert("internal_queries".into(), internal_queries as f64);
    t.diagnostics.insert(
        "bucket_queries".into(),
        (t.total_queries - internal_queries) as f64,
    );
    Ok(t)
}
