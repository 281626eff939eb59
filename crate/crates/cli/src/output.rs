// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic artifact writers: RFC 4180 CSV with 17-significant-digit
//! doubles, or an equivalent JSON table.

use std::fs;
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Schema(format!("unknown format `{other}`"))),
        }
    }
}

/// One tabular artifact.
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// 17 significant digits, '.' decimal separator, exponent form.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_table(dir: &Path, table: &Table, format: Format) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(e.to_string()))?;
    let (path, body) = match format {
        Format::Csv => {
            // RFC 4180: CRLF line endings, header row mandatory.
            let mut s = String::new();
            s.push_str(&table.columns.join(","));
            s.push_str("\r\n");
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
                s.push_str(&cells.join(","));
                s.push_str("\r\n");
            }
            (dir.join(format!("{}.csv", table.name)), s)
        }
        Format::Json => {
            let value = serde_json::json!({
                "columns": table.columns,
                "rows": table.rows,
            });
            (
                dir.join(format!("{}.json", table.name)),
                serde_json::to_string_pretty(&value).expect("serializable table") + "\n",
            )
        }
    };
    fs::write(&path, body).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(path)
}

pub fn write_json_value(
    dir: &Path,
    name: &str,
    value: &serde_json::Value,
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(e.to_string()))?;
    let path = dir.join(format!("{name}.json"));
    let body = serde_json::to_string_pretty(value).expect("serializable value") + "\n";
    fs::write(&path, body).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(path)
}
