use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::config::OutputFormat;
use crate::error::Result;

/// Serializes rows as CSV (header from the field names) or pretty JSON.
pub fn rows_to_string<T: Serialize>(rows: &[T], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows)?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn write_rows<T: Serialize>(rows: &[T], path: impl AsRef<Path>, format: OutputFormat) -> Result<()> {
    let text = rows_to_string(rows, format)?;
    let mut file = std::fs::File::create(path)?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

pub fn read_csv_rows<T: DeserializeOwned>(reader: impl Read) -> Result<Vec<T>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|r| r.map_err(Into::into))
        .collect()
}

pub fn read_rows<T: DeserializeOwned>(path: impl AsRef<Path>, format: OutputFormat) -> Result<Vec<T>> {
    let file = std::fs::File::open(path)?;
    match format {
        OutputFormat::Csv => read_csv_rows(file),
        OutputFormat::Json => Ok(serde_json::from_reader(file)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::TrialRecord;

    fn record(arm: Option<usize>) -> TrialRecord {
        TrialRecord {
            experiment_id: "x".into(),
            seed: 17,
            trial: 0,
            learner: "algorithm1".into(),
            class: "tree-d2-n1".into(),
            alpha: 0.2,
            delta: 0.1,
            queries: 10,
            success: arm.is_some(),
            output_arm: arm,
            gamma: 0.25,
            runtime_ms: 0,
        }
    }

    #[test]
    fn csv_header_and_round_trip() {
        let rows = vec![record(Some(3)), record(None)];
        let text = rows_to_string(&rows, OutputFormat::Csv).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "experiment_id,seed,trial,learner,class,alpha,delta,queries,success,output_arm,gamma,runtime_ms"
        );
        let back: Vec<TrialRecord> = read_csv_rows(text.as_bytes()).unwrap();
        assert_eq!(back, rows);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        write_rows(&rows, &path, OutputFormat::Json).unwrap();
        let back: Vec<TrialRecord> = read_rows(&path, OutputFormat::Json).unwrap();
        assert_eq!(back, rows);
    }
}
