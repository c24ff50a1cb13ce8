//! Itemized pass/fail reports shared by the validators.

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, name: &str, outcome: Result<(), String>) {
        let (passed, detail) = match outcome {
            Ok(()) => (true, String::new()),
            Err(e) => (false, e),
        };
        self.checks.push(Check { name: name.to_string(), passed, detail });
    }

    /// Record `name` as failed unless `cond` holds.
    pub fn require(&mut self, name: &str, cond: bool, why: impl FnOnce() -> String) {
        self.record(name, if cond { Ok(()) } else { Err(why()) });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// `true` when every check with this name passed (and at least one ran).
    pub fn item_passed(&self, name: &str) -> bool {
        let mut it = self.checks.iter().filter(|c| c.name == name).peekable();
        it.peek().is_some() && it.all(|c| c.passed)
    }

    /// Names in order of first appearance with their combined verdict.
    pub fn summary(&self) -> Vec<(String, bool)> {
        let mut out: Vec<(String, bool)> = Vec::new();
        for c in &self.checks {
            match out.iter_mut().find(|(n, _)| *n == c.name) {
                Some((_, ok)) => *ok &= c.passed,
                None => out.push((c.name.clone(), c.passed)),
            }
        }
        out
    }
}
