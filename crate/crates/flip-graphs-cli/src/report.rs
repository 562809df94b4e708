//! Machine-readable experiment reports. Bodies are deterministic for a fixed
//! seed and parameter set: runtimes go to stderr, never into the body.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Serialize)]
pub struct Report {
    pub experiment: String,
    pub params: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub truncated: bool,
}

impl Report {
    pub fn new(experiment: &str) -> Self {
        Report {
            experiment: experiment.to_string(),
            params: BTreeMap::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            truncated: false,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn columns(&mut self, cols: &[&str]) -> &mut Self {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, values: &[String]) -> &mut Self {
        assert_eq!(values.len(), self.columns.len(), "row width mismatch");
        self.rows.push(values.to_vec());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                s.push_str(&format!("# experiment: {}\n", self.experiment));
                for (k, v) in &self.params {
                    s.push_str(&format!("# {k}: {v}\n"));
                }
                if self.truncated {
                    s.push_str("# truncated: true\n");
                }
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&row.join(","));
                    s.push('\n');
                }
                s
            }
        }
    }
}

#[macro_export]
macro_rules! strings {
    ($($v:expr),* $(,)?) => {
        &[$($v.to_string()),*]
    };
}
