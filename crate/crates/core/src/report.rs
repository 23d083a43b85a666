//! Outcomes of law checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::finrel::Value;

/// Check outcome, ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    SampledPass,
    BudgetExceeded,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::SampledPass => "sampled-pass",
            Status::BudgetExceeded => "budget-exceeded",
            Status::Fail => "fail",
        }
    }
}

/// A concrete counterexample: the input element and the values of the two
/// paths that should have agreed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub input: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub left: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub right: Option<Value>,
}

impl Witness {
    pub fn new(label: impl Into<String>, input: Value) -> Witness {
        Witness {
            label: label.into(),
            input,
            left: None,
            right: None,
        }
    }

    pub fn paths(label: impl Into<String>, input: Value, left: Value, right: Value) -> Witness {
        Witness {
            label: label.into(),
            input,
            left: Some(left),
            right: Some(right),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub checked: u64,
    pub skipped: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub facts: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub children: Vec<LawReport>,
}

impl LawReport {
    pub fn pass(name: impl Into<String>, anchor: impl Into<String>, checked: u64) -> LawReport {
        LawReport {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Pass,
            checked,
            skipped: 0,
            witness: None,
            seed: None,
            notes: Vec::new(),
            facts: BTreeMap::new(),
            children: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, anchor: impl Into<String>, checked: u64, witness: Witness) -> LawReport {
        LawReport {
            status: Status::Fail,
            witness: Some(witness),
            ..LawReport::pass(name, anchor, checked)
        }
    }

    pub fn budget_exceeded(name: impl Into<String>, anchor: impl Into<String>, err: &Error) -> LawReport {
        let mut r = LawReport::pass(name, anchor, 0);
        r.status = Status::BudgetExceeded;
        r.notes.push(err.to_string());
        r
    }

    /// Turns a budget error into a budget-exceeded report; other errors pass through.
    pub fn or_budget(
        name: &str,
        anchor: &str,
        res: Result<LawReport, Error>,
    ) -> Result<LawReport, Error> {
        match res {
            Err(e) if e.is_budget() => Ok(LawReport::budget_exceeded(name, anchor, &e)),
            other => other,
        }
    }

    /// A report summarizing its children: worst status, summed counts.
    pub fn group(name: impl Into<String>, anchor: impl Into<String>, children: Vec<LawReport>) -> LawReport {
        let mut r = LawReport::pass(name, anchor, 0);
        for c in &children {
            r.status = r.status.max(c.status);
            r.checked += c.checked;
            r.skipped += c.skipped;
        }
        r.children = children;
        r
    }

    /// Adds a child and refreshes the summary counts.
    pub fn push(&mut self, child: LawReport) {
        self.status = self.status.max(child.status);
        self.checked += child.checked;
        self.skipped += child.skipped;
        self.children.push(child);
    }

    pub fn with_note(mut self, note: impl Into<String>) -> LawReport {
        self.notes.push(note.into());
        self
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn with_fact(mut self, key: &str, value: impl Serialize) -> LawReport {
        self.set_fact(key, value);
        self
    }

    pub fn set_fact(&mut self, key: &str, value: impl Serialize) {
        self.facts.insert(
            key.to_string(),
            serde_json::to_value(value).expect("facts serialize"),
        );
    }

    pub fn fact(&self, key: &str) -> Option<&serde_json::Value> {
        self.facts.get(key)
    }

    /// Marks a check as failed with the given witness, keeping counts.
    pub fn set_fail(&mut self, witness: Witness) {
        self.status = Status::Fail;
        self.witness = Some(witness);
    }

    /// Pass or sampled-pass.
    pub fn is_pass(&self) -> bool {
        matches!(self.status, Status::Pass | Status::SampledPass)
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    /// Depth-first search for a descendant by name.
    pub fn find(&self, name: &str) -> Option<&LawReport> {
        if self.name == name {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(name))
    }

    /// First failing report in depth-first order.
    pub fn first_failure(&self) -> Option<&LawReport> {
        if self.status != Status::Fail {
            return None;
        }
        self.children
            .iter()
            .find_map(|c| c.first_failure())
            .or(Some(self))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable indented summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, depth: usize) {
        use std::fmt::Write;
        let pad = "  ".repeat(depth);
        let _ = write!(out, "{pad}[{}] {}", self.status.as_str(), self.name);
        if !self.anchor.is_empty() {
            let _ = write!(out, " ({})", self.anchor);
        }
        let _ = write!(out, ": checked {}", self.checked);
        if self.skipped > 0 {
            let _ = write!(out, ", skipped {}", self.skipped);
        }
        if let Some(seed) = self.seed {
            let _ = write!(out, ", seed {seed}");
        }
        out.push('\n');
        for (k, v) in &self.facts {
            let _ = writeln!(out, "{pad}  {k} = {v}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "{pad}  note: {n}");
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "{pad}  witness {}: input {}", w.label, w.input);
            if let (Some(l), Some(r)) = (&w.left, &w.right) {
                let _ = writeln!(out, "{pad}    left  = {l}");
                let _ = writeln!(out, "{pad}    right = {r}");
            }
        }
        for c in &self.children {
            c.write_text(out, depth + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_takes_worst_status() {
        let a = LawReport::pass("a", "", 3);
        let mut b = LawReport::pass("b", "", 2);
        b.status = Status::SampledPass;
        let g = LawReport::group("g", "", vec![a.clone(), b]);
        assert_eq!(g.status, Status::SampledPass);
        assert_eq!(g.checked, 5);
        let f = LawReport::fail("f", "", 1, Witness::new("w", Value::atom("x")));
        let g = LawReport::group("g", "", vec![a, f]);
        assert_eq!(g.status, Status::Fail);
        assert_eq!(g.first_failure().unwrap().name, "f");
    }

    #[test]
    fn json_round_trip() {
        let r = LawReport::fail(
            "law",
            "anchor",
            7,
            Witness::paths("d", Value::set([Value::atom("a")]), Value::empty_set(), Value::atom("b")),
        )
        .with_fact("size", 4);
        let back: LawReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
