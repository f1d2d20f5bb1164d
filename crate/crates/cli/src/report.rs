//! Human-readable reports ending in a one-line JSON summary.

use std::fmt::Display;

use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    lines: Vec<String>,
    summary: Map<String, Value>,
    checks: Vec<(String, bool)>,
    /// Body is an instance file; the summary becomes a comment line.
    instance: bool,
}

impl Report {
    pub fn new(command: &str, verdict: &str) -> Self {
        let mut summary = Map::new();
        summary.insert("command".into(), json!(command));
        summary.insert("verdict".into(), json!(verdict));
        Report {
            lines: vec![format!("verdict: {verdict}")],
            summary,
            checks: Vec::new(),
            instance: false,
        }
    }

    /// Negative verdict carried by a refusing error.
    pub fn refusal(command: &str, error: &CliError) -> Self {
        let mut r = Report::new(command, "refused");
        r.line("reason", error);
        if let CliError::Core(e) = error {
            match e {
                flipkit::Error::PreconditionViolated { set }
                | flipkit::Error::ConnectivityTooLow { witness: set, .. } => r.field("set", set.iter().collect::<Vec<_>>()),
                flipkit::Error::HypothesisViolated { set, slack, .. } => {
                    r.field("set", set.iter().collect::<Vec<_>>());
                    r.field("slack", slack.to_string());
                }
                flipkit::Error::NotTu { rows, cols, det } => {
                    r.field("rows", rows);
                    r.field("cols", cols);
                    r.field("det", det);
                }
                flipkit::Error::ObjectiveNotRealizable { arc } => r.field("arc", arc),
                _ => {}
            }
        }
        r.field("reason", error.to_string());
        r
    }

    /// Adds a `key: value` text line.
    pub fn line(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    pub fn text(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    /// Adds a summary field.
    pub fn field(&mut self, key: &str, value: impl serde::Serialize) {
        self.summary.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    /// Adds a verification checklist entry.
    pub fn check(&mut self, name: &str, pass: bool) {
        self.checks.push((name.to_string(), pass));
    }

    /// Drops the verdict line so the body parses as an instance file.
    pub fn into_instance(mut self) -> Self {
        self.lines.remove(0);
        self.instance = true;
        self
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|(_, p)| *p)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        if !self.checks.is_empty() {
            out.push_str("checks:\n");
            for (name, pass) in &self.checks {
                out.push_str(&format!("  [{}] {name}\n", if *pass { "pass" } else { "FAIL" }));
            }
        }
        let mut summary = self.summary.clone();
        if !self.checks.is_empty() {
            let checks: Map<String, Value> = self.checks.iter().map(|(n, p)| (n.clone(), json!(p))).collect();
            summary.insert("checks".into(), Value::Object(checks));
        }
        if self.instance {
            out.push_str("# ");
        }
        out.push_str("summary: ");
        out.push_str(&Value::Object(summary).to_string());
        out.push('\n');
        out
    }
}
