//! Line-oriented run records.
//!
//! A [`Record`] groups the facts produced by one stage of a run. Its text
//! form puts one fact per line, prefixed by the stage name:
//!
//! ```text
//! config seed=7
//! config rng=chacha8
//! reg2_measured value=4
//! ```

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub stage: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(stage: impl Into<String>) -> Self {
        Self {
            stage: stage.into(),
            fields: Vec::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} {}={}", self.stage, k, v)?;
        }
        Ok(())
    }
}

/// Renders records one fact per line.
pub fn render(records: &[Record]) -> String {
    records
        .iter()
        .filter(|r| !r.fields.is_empty())
        .map(|r| format!("{r}\n"))
        .collect()
}
