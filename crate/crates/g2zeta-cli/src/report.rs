use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Result of one command, in all three output shapes.
pub struct Outcome {
    pub command: &'static str,
    pub config: Value,
    pub results: Vec<Value>,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
    pub passed: bool,
}

impl Outcome {
    pub fn new(command: &'static str, config: Value, columns: &'static [&'static str]) -> Self {
        Outcome { command, config, results: Vec::new(), columns, rows: Vec::new(), passed: true }
    }

    pub fn push<T: Serialize>(&mut self, result: &T, row: Vec<String>, passed: bool) {
        let mut v = serde_json::to_value(result).expect("report values serialize");
        strip_timing(&mut v);
        if let Value::Object(map) = &mut v {
            map.insert("passed".into(), Value::Bool(passed));
        }
        self.results.push(v);
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
        self.passed &= passed;
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let doc = json!({
                    "command": self.command,
                    "config": self.config,
                    "passed": self.passed,
                    "results": self.results,
                });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)
            }
            Format::Csv => {
                writeln!(out, "# {} {}", self.command, self.config)?;
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(self.columns)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            Format::Text => {
                writeln!(out, "command: {}", self.command)?;
                writeln!(out, "config: {}", self.config)?;
                for row in &self.rows {
                    let cells: Vec<String> = self.columns.iter().zip(row).map(|(c, v)| format!("{c}={v}")).collect();
                    writeln!(out, "{}", cells.join("  "))?;
                }
                writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" })
            }
        }
    }
}

/// Wall-clock fields would make reruns differ; they go to stderr instead.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
