use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::noise::RewardSource;

/// One pull: the 1-based round, the arm, and the observed reward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub round: usize,
    pub arm: usize,
    pub reward: f64,
}

/// Full log of a learner run and its chosen arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub records: Vec<QueryRecord>,
    pub output_arm: usize,
    pub total_queries: usize,
    pub seed: u64,
    pub learner_name: String,
    /// Set when the learner finished but could not certify its output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    /// Learner-specific scalars (computed volume, sample counts, ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
}

impl Transcript {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Checks the structural invariants against an arm count.
    pub fn is_consistent(&self, arms: usize) -> bool {
        self.total_queries == self.records.len()
            && self.output_arm < arms
            && self
                .records
                .iter()
                .enumerate()
                .all(|(i, r)| r.round == i + 1 && r.arm < arms)
    }
}

/// Forwards pulls to a source and records them.
pub(crate) struct QueryLog<'s, S: ?Sized> {
    source: &'s mut S,
    records: Vec<QueryRecord>,
}

impl<'s, S: RewardSource + ?Sized> QueryLog<'s, S> {
    pub(crate) fn new(source: &'s mut S) -> Self {
        Self {
            source,
            records: Vec::new(),
        }
    }

    pub(crate) fn query(&mut self, arm: usize) -> Result<f64> {
        let reward = self.source.pull(arm)?;
        self.records.push(QueryRecord {
            round: self.records.len() + 1,
            arm,
            reward,
        });
        Ok(reward)
    }

    /// Pulls `arm` `times` times and returns the rewards.
    pub(crate) fn query_many(&mut self, arm: usize, times: usize) -> Result<Vec<f64>> {
        (0..times).map(|_| self.query(arm)).collect()
    }

    pub(crate) fn len(&self) -> usize {
        self.records.len()
    }

    pub(crate) fn finish(self, learner_name: &str, output_arm: usize) -> Transcript {
        let total_queries = self.records.len();
        Transcript {
            records: self.records,
            output_arm,
            total_queries,
            seed: 0,
            learner_name: learner_name.to_string(),
            failure: None,
            diagnostics: BTreeMap::new(),
        }
    }
}
