//! Parameter sweeps: one Monte Carlo experiment per grid cell.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{ExperimentConfig, ExperimentKind};
use super::monte_carlo::{run_monte_carlo, TrialRecord};
use crate::error::{Error, Result};

/// Aggregate of one cell. Failed cells carry the error and zeroed statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub cell: usize,
    /// `path=value` pairs joined by `;`.
    pub parameters: String,
    pub experiment_id: String,
    pub learner: String,
    pub class: String,
    pub alpha: f64,
    pub delta: f64,
    pub trials: usize,
    pub success_rate: f64,
    pub half_width: f64,
    pub mean_queries: f64,
    pub gamma: f64,
    pub trial_errors: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub records: Vec<TrialRecord>,
}

/// Grid cells in cartesian order (last axis fastest), then explicit cells.
pub fn expand_cells(
    grid: Option<&BTreeMap<String, Vec<Value>>>,
    extra: Option<&[BTreeMap<String, Value>]>,
) -> Vec<BTreeMap<String, Value>> {
    let mut cells = Vec::new();
    if let Some(grid) = grid.filter(|g| !g.is_empty()) {
        cells.push(BTreeMap::new());
        for (path, values) in grid {
            cells = cells
                .into_iter()
                .flat_map(|cell| {
                    values.iter().map(move |v| {
                        let mut c = cell.clone();
                        c.insert(path.clone(), v.clone());
                        c
                    })
                })
                .collect();
        }
    }
    if let Some(extra) = extra {
        cells.extend(extra.iter().cloned());
    }
    cells
}

/// Sets the value at a dotted path, creating intermediate objects.
pub fn set_path(doc: &mut Value, path: &str, value: Value) -> Result<()> {
    let mut node = doc;
    let mut parts = path.split('.').peekable();
    while let Some(key) = parts.next() {
        if key.is_empty() {
            return Err(Error::Config(format!("empty segment in path `{path}`")));
        }
        if node.is_null() {
            *node = Value::Object(Default::default());
        }
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("`{path}` does not lead through an object")))?;
        if parts.peek().is_none() {
            obj.insert(key.to_string(), value);
            return Ok(());
        }
        node = obj.entry(key.to_string()).or_insert(Value::Null);
    }
    Ok(())
}

fn describe(cell: &BTreeMap<String, Value>) -> String {
    cell.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn cell_config(base: &Value, cell: &BTreeMap<String, Value>, id: String) -> Result<ExperimentConfig> {
    let mut doc = base.clone();
    for (path, v) in cell {
        set_path(&mut doc, path, v.clone())?;
    }
    set_path(&mut doc, "id", Value::String(id))?;
    let config: ExperimentConfig = serde_json::from_value(doc)?;
    config.validate()?;
    Ok(config)
}

/// Runs every cell. A cell that fails to build or run is recorded and the
/// sweep continues.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutput> {
    config.validate()?;
    let cells = expand_cells(config.grid.as_ref(), config.cells.as_deref());
    let mut base = config.clone();
    base.kind = ExperimentKind::Run;
    base.grid = None;
    base.cells = None;
    let base_id = config.experiment_id();
    let base = serde_json::to_value(&base)?;

    let mut rows = Vec::with_capacity(cells.len());
    let mut records = Vec::new();
    for (i, cell) in cells.iter().enumerate() {
        let id = format!("{base_id}/cell{i}");
        let mut row = SweepRow {
            cell: i,
            parameters: describe(cell),
            experiment_id: id.clone(),
            learner: String::new(),
            class: String::new(),
            alpha: 0.0,
            delta: 0.0,
            trials: 0,
            success_rate: 0.0,
            half_width: 0.0,
            mean_queries: 0.0,
            gamma: 0.0,
            trial_errors: 0,
            error: None,
        };
        match cell_config(&base, cell, id).and_then(|c| run_monte_carlo(&c)) {
            Ok(out) => {
                let s = &out.summary;
                row.learner = s.learner.clone();
                row.class = s.class.clone();
                row.alpha = s.alpha;
                row.delta = s.delta;
                row.trials = s.trials;
                row.success_rate = s.success_rate;
                row.half_width = s.half_width;
                row.mean_queries = s.mean_queries;
                row.gamma = s.gamma;
                row.trial_errors = s.errors.len();
                records.extend(out.records);
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        rows.push(row);
    }
    Ok(SweepOutput { rows, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn cartesian_order() {
        let mut grid = BTreeMap::new();
        grid.insert("a".to_string(), vec![json!(1), json!(2)]);
        grid.insert("b".to_string(), vec![json!("x"), json!("y"), json!("z")]);
        let extra = vec![BTreeMap::from([("a".to_string(), json!(9))])];
        let cells = expand_cells(Some(&grid), Some(&extra));
        assert_eq!(cells.len(), 7);
        assert_eq!(describe(&cells[1]), "a=1;b=\"y\"");
        assert_eq!(describe(&cells[3]), "a=2;b=\"x\"");
        assert_eq!(describe(&cells[6]), "a=9");
    }

    #[test]
    fn path_patching() {
        let mut v = json!({"learner": {"alpha": 0.1}, "class": null});
        set_path(&mut v, "learner.alpha", json!(0.4)).unwrap();
        set_path(&mut v, "class.depth", json!(3)).unwrap();
        assert_eq!(v, json!({"learner": {"alpha": 0.4}, "class": {"depth": 3}}));
        assert!(set_path(&mut v, "learner.alpha.x", json!(1)).is_err());
    }

    #[test]
    fn bad_cells_are_recorded() {
        let config = ExperimentConfig::from_json(
            r#"{"kind":"sweep","id":"s","class":{"constructor":"k_armed","k":3},
                "noise":{"kind":"deterministic"},
                "learner":{"name":"algorithm1","alpha":0.3,"delta":0.2},
                "trials":4,"grid":{"learner.alpha":[0.3, 7.0]}}"#,
        )
        .unwrap();
        let out = run_sweep(&config).unwrap();
        assert_eq!(out.rows.len(), 2);
        assert!(out.rows[0].error.is_none());
        assert_eq!(out.rows[0].success_rate, 1.0);
        assert!(out.rows[1].error.is_some());
        assert_eq!(out.records.len(), 4);
    }
}
