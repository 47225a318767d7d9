use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::class::FunctionClass;
use crate::environments::{
    make_k_armed_surrogate, make_linear_net_class, make_singletons, make_tree_class, TreeMeta,
};
use crate::error::{Error, Result};
use crate::learners::LearnerSpec;
use crate::noise::NoiseSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Gamma,
    Dec,
    Run,
    Sweep,
    Certify,
    Adaptivity,
    Discretize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A named constructor and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constructor", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassConstructor {
    KArmed { k: usize },
    Singletons { n: usize },
    Tree { depth: usize, bucket_size: usize },
    LinearNet { dimension: usize, alpha: f64 },
}

/// Either a constructor call or an explicit class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassSpec {
    Constructor(ClassConstructor),
    Inline(FunctionClass),
}

impl ClassSpec {
    /// Builds the class, with its tree layout when it is a tree class.
    pub fn build(&self) -> Result<(FunctionClass, Option<TreeMeta>)> {
        Ok(match self {
            ClassSpec::Constructor(c) => match *c {
                ClassConstructor::KArmed { k } => (make_k_armed_surrogate(k)?, None),
                ClassConstructor::Singletons { n } => (make_singletons(n)?, None),
                ClassConstructor::Tree { depth, bucket_size } => {
                    let (class, meta) = make_tree_class(depth, bucket_size)?;
                    (class, Some(meta))
                }
                ClassConstructor::LinearNet { dimension, alpha } => {
                    (make_linear_net_class(dimension, alpha)?, None)
                }
            },
            ClassSpec::Inline(class) => {
                let meta = TreeMeta::infer(class);
                (class.clone(), meta)
            }
        })
    }
}

/// Anchor family for coefficient searches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnchorSpec {
    /// `"vertices"` or `"vertices+midpoints"`.
    Named(String),
    Explicit(Vec<Vec<f64>>),
}

/// One experiment, as read from a JSON document.
///
/// Fields beyond `kind` are only required by the kinds that use them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub class: Option<ClassSpec>,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    #[serde(default)]
    pub learner: Option<LearnerSpec>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Fixed true function; drawn uniformly per trial when absent.
    #[serde(default)]
    pub true_function: Option<usize>,
    /// Record wall-clock time per trial. Off by default so that outputs are
    /// reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
    /// Worker count; falls back to `MB_THREADS`, then to the rayon default.
    #[serde(default)]
    pub threads: Option<usize>,

    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub resolution: Option<f64>,
    #[serde(default)]
    pub anchors: Option<AnchorSpec>,
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub depths: Option<Vec<usize>>,
    /// Sweep axes: dotted JSON paths into this config mapped to value lists.
    #[serde(default)]
    pub grid: Option<BTreeMap<String, Vec<Value>>>,
    /// Additional sweep cells given as explicit path/value maps.
    #[serde(default)]
    pub cells: Option<Vec<BTreeMap<String, Value>>>,
}

fn default_trials() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            id: None,
            class: None,
            noise: None,
            learner: None,
            trials: 1,
            seed: 0,
            out: None,
            format: OutputFormat::Csv,
            true_function: None,
            timing: false,
            threads: None,
            alpha: None,
            delta: None,
            tolerance: None,
            eps: None,
            resolution: None,
            anchors: None,
            mu: None,
            sigma: None,
            depths: None,
            grid: None,
            cells: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn experiment_id(&self) -> String {
        self.id.clone().unwrap_or_else(|| {
            format!("{:?}", self.kind).to_lowercase()
        })
    }

    pub fn require_class(&self) -> Result<&ClassSpec> {
        self.class.as_ref().ok_or_else(|| missing("class"))
    }

    pub fn require_learner(&self) -> Result<&LearnerSpec> {
        self.learner.as_ref().ok_or_else(|| missing("learner"))
    }

    /// Checks that the fields the kind needs are present.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        match self.kind {
            ExperimentKind::Gamma => {
                self.require_class()?;
                if self.alpha.is_none() && self.learner.is_none() {
                    return Err(missing("alpha"));
                }
            }
            ExperimentKind::Dec => {
                self.require_class()?;
                for (name, v) in [("eps", self.eps), ("alpha", self.alpha)] {
                    if v.is_none() {
                        return Err(missing(name));
                    }
                }
            }
            ExperimentKind::Run => {
                self.require_class()?;
                self.require_learner()?;
                if self.noise.is_none() {
                    return Err(missing("noise"));
                }
            }
            ExperimentKind::Certify => {
                self.require_class()?;
                self.require_learner()?;
            }
            ExperimentKind::Sweep => {
                self.require_class()?;
                self.require_learner()?;
                let empty_grid = self.grid.as_ref().is_none_or(|g| g.is_empty());
                let empty_cells = self.cells.as_ref().is_none_or(|c| c.is_empty());
                if empty_grid && empty_cells {
                    return Err(Error::Config("sweep needs a non-empty grid or cells".into()));
                }
                if let Some(g) = &self.grid {
                    if g.values().any(|v| v.is_empty()) {
                        return Err(Error::Config("grid axes must be non-empty".into()));
                    }
                }
            }
            ExperimentKind::Adaptivity => {
                if let Some(d) = &self.depths {
                    if d.is_empty() || d.iter().any(|&d| d < 3) {
                        return Err(Error::Config("adaptivity depths must be at least 3".into()));
                    }
                }
            }
            ExperimentKind::Discretize => {
                for (name, v) in [("mu", self.mu), ("sigma", self.sigma), ("eps", self.eps)] {
                    if v.is_none() {
                        return Err(missing(name));
                    }
                }
            }
        }
        Ok(())
    }
}

fn missing(field: &str) -> Error {
    Error::Config(format!("missing field `{field}`"))
}
