//! Machine- and human-readable command reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    /// Summary lines for the text rendering.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default)]
    pub data: Value,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), checks: vec![], notes: vec![], data: Value::Object(Default::default()) }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
        pass
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn set(&mut self, key: &str, v: impl Serialize) {
        let v = serde_json::to_value(v).expect("report data serializes");
        if let Value::Object(m) = &mut self.data {
            m.insert(key.to_string(), v);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(src: &str) -> serde_json::Result<Self> {
        serde_json::from_str(src)
    }

    pub fn render_text(&self, quiet: bool) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if quiet && c.pass {
                continue;
            }
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                let _ = writeln!(out, "{tag}  {}", c.name);
            } else {
                let _ = writeln!(out, "{tag}  {}: {}", c.name, c.detail);
            }
        }
        if !quiet {
            for n in &self.notes {
                let _ = writeln!(out, "  {n}");
            }
        }
        out
    }
}
