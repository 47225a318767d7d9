use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::class::FunctionClass;
use crate::environments::TreeMeta;
use crate::error::{Error, Result};
use crate::games::{gamma, DEFAULT_TOLERANCE};
use crate::learners::LearnerSpec;
use crate::noise::{Model, NoiseSpec, Simulator};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.576;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "MB_THREADS";

const ENV_STREAM: u64 = 0;
const LEARNER_STREAM: u64 = 1;
const TRUTH_STREAM: u64 = 2;

/// One row of the persisted trial table. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub experiment_id: String,
    pub seed: u64,
    pub trial: usize,
    pub learner: String,
    pub class: String,
    pub alpha: f64,
    pub delta: f64,
    pub queries: usize,
    pub success: bool,
    /// Empty when the trial errored before choosing an arm.
    pub output_arm: Option<usize>,
    pub gamma: f64,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialError {
    pub trial: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub experiment_id: String,
    pub learner: String,
    pub class: String,
    pub alpha: f64,
    pub delta: f64,
    pub gamma: f64,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Normal-approximation 99% half-width of the success rate.
    pub half_width: f64,
    pub mean_queries: f64,
    /// Trials whose learner finished but flagged its output (e.g. `dec-too-large`).
    pub flagged: usize,
    pub errors: Vec<TrialError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloOutput {
    pub records: Vec<TrialRecord>,
    pub summary: MonteCarloSummary,
}

/// Seed of trial `index` under `master`: a SplitMix64 finalizer applied to
/// the pair, so neighbouring trials get unrelated streams.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    let mut z = master ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Rng a learner receives for a trial seed.
pub fn learner_rng(seed: u64) -> ChaCha8Rng {
    stream(seed, LEARNER_STREAM)
}

/// Rng the reward simulator receives for a trial seed.
pub fn environment_rng(seed: u64) -> ChaCha8Rng {
    stream(seed, ENV_STREAM)
}

/// True function of a trial: `fixed` if given, else uniform from the seed.
pub fn true_function_for(class: &FunctionClass, fixed: Option<usize>, seed: u64) -> usize {
    fixed.unwrap_or_else(|| stream(seed, TRUTH_STREAM).random_range(0..class.num_functions()))
}

pub fn binomial_sd(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

pub fn binomial_half_width(p: f64, n: usize) -> f64 {
    Z_99 * binomial_sd(p, n)
}

/// Maps `f` over `0..n` on a pool of `threads` workers (or `MB_THREADS`, or
/// the rayon default), returning results in index order.
pub fn par_map<T, F>(n: usize, threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let workers = threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
    });
    match workers {
        Some(1) => Ok((0..n).map(f).collect()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {k} workers: {e}")))?;
            Ok(pool.install(|| (0..n).into_par_iter().map(&f).collect()))
        }
        None => Ok((0..n).into_par_iter().map(f).collect()),
    }
}

/// Everything a trial needs, shared read-only across workers.
pub struct TrialPlan<'a> {
    pub experiment_id: String,
    pub class: &'a FunctionClass,
    pub tree: Option<TreeMeta>,
    pub noise: NoiseSpec,
    pub learner: LearnerSpec,
    pub true_function: Option<usize>,
    pub master_seed: u64,
    pub trials: usize,
    pub timing: bool,
    pub threads: Option<usize>,
}

impl<'a> TrialPlan<'a> {
    pub fn from_config(config: &ExperimentConfig, class: &'a FunctionClass, tree: Option<TreeMeta>) -> Result<Self> {
        let noise = config
            .noise
            .ok_or_else(|| Error::Config("missing field `noise`".into()))?;
        noise.validate()?;
        let learner = *config.require_learner()?;
        learner.params.validate()?;
        if let Some(f) = config.true_function {
            class.row(f)?;
        }
        Ok(Self {
            experiment_id: config.experiment_id(),
            class,
            tree,
            noise,
            learner,
            true_function: config.true_function,
            master_seed: config.seed,
            trials: config.trials,
            timing: config.timing,
            threads: config.threads,
        })
    }

    /// Runs every trial and aggregates. Errors inside a trial are recorded
    /// against that trial; only setup errors abort the experiment.
    pub fn run(&self) -> Result<MonteCarloOutput> {
        let alpha = self.learner.params.alpha;
        let gamma_value = gamma(self.class, alpha, DEFAULT_TOLERANCE)?.value;
        let class_name = self.class.name();
        let learner_name = self.learner.name.as_str().to_string();

        let results = par_map(self.trials, self.threads, |i| {
            let seed = trial_seed(self.master_seed, i);
            let start = self.timing.then(Instant::now);
            let outcome = self.run_one(seed);
            let runtime_ms = start.map_or(0, |s| s.elapsed().as_millis() as u64);
            let mut record = TrialRecord {
                experiment_id: self.experiment_id.clone(),
                seed,
                trial: i,
                learner: learner_name.clone(),
                class: class_name.clone(),
                alpha,
                delta: self.learner.params.delta,
                queries: 0,
                success: false,
                output_arm: None,
                gamma: gamma_value,
                runtime_ms,
            };
            match outcome {
                Ok((queries, arm, success, flagged)) => {
                    record.queries = queries;
                    record.output_arm = Some(arm);
                    record.success = success;
                    (record, None, flagged)
                }
                Err(e) => (
                    record,
                    Some(TrialError {
                        trial: i,
                        message: e.to_string(),
                    }),
                    false,
                ),
            }
        })?;

        let mut records = Vec::with_capacity(self.trials);
        let mut errors = Vec::new();
        let mut flagged = 0;
        for (record, error, flag) in results {
            records.push(record);
            errors.extend(error);
            flagged += usize::from(flag);
        }
        let successes = records.iter().filter(|r| r.success).count();
        let n = records.len();
        let rate = successes as f64 / n as f64;
        let summary = MonteCarloSummary {
            experiment_id: self.experiment_id.clone(),
            learner: learner_name,
            class: class_name,
            alpha,
            delta: self.learner.params.delta,
            gamma: gamma_value,
            trials: n,
            successes,
            success_rate: rate,
            half_width: binomial_half_width(rate, n),
            mean_queries: records.iter().map(|r| r.queries as f64).sum::<f64>() / n as f64,
            flagged,
            errors,
        };
        Ok(MonteCarloOutput { records, summary })
    }

    fn run_one(&self, seed: u64) -> Result<(usize, usize, bool, bool)> {
        let f = true_function_for(self.class, self.true_function, seed);
        let model = Model::new(self.class, f, self.noise)?;
        let mut sim = Simulator::new(model, environment_rng(seed));
        let t = self
            .learner
            .run(self.class, self.tree.as_ref(), &mut sim, &mut learner_rng(seed))?;
        let success = self
            .class
            .is_alpha_optimal(f, t.output_arm, self.learner.params.alpha)?;
        Ok((t.total_queries, t.output_arm, success, t.failure.is_some()))
    }
}

/// Runs a `run` experiment described by `config`.
pub fn run_monte_carlo(config: &ExperimentConfig) -> Result<MonteCarloOutput> {
    let (class, tree) = config.require_class()?.build()?;
    TrialPlan::from_config(config, &class, tree)?.run()
}

/// Recomputes a record's success flag from the class and the trial seed.
pub fn recompute_success(
    record: &TrialRecord,
    class: &FunctionClass,
    fixed_true_function: Option<usize>,
) -> Result<bool> {
    match record.output_arm {
        None => Ok(false),
        Some(arm) => {
            let f = true_function_for(class, fixed_true_function, record.seed);
            class.is_alpha_optimal(f, arm, record.alpha)
        }
    }
}
