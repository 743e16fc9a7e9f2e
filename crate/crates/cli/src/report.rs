//! Machine-readable results. Exact numbers are strings so that JSON never
//! rounds them.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Exact symbolic computation.
    Exact,
    /// Exact, with a vanishing argument certifying the answer.
    Certified,
    /// Fallback value whose certificate failed (e.g. `χ` for `h⁰`).
    Uncertified,
    /// Rests on stated assumptions or static data.
    Assumed,
    /// Random sampling; the seed reproduces it.
    Stochastic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    /// 0-based statement index.
    pub statement: usize,
    pub line: usize,
    /// Space name, or `ffcheck`.
    pub subject: String,
    pub name: String,
    pub value: Value,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// `Some` for checks with a verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub seed: u64,
    pub runtime_ms: u64,
    pub results: Vec<Entry>,
    pub assumptions: Vec<String>,
    pub warnings: Vec<String>,
    /// Verification failures; non-empty means exit code 1.
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(seed: u64) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            seed,
            runtime_ms: 0,
            results: Vec::new(),
            assumptions: Vec::new(),
            warnings: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn assume(&mut self, text: impl Into<String>) {
        let text = text.into();
        if !self.assumptions.contains(&text) {
            self.assumptions.push(text);
        }
    }

    pub fn find(&self, subject: &str, name: &str) -> Option<&Entry> {
        self.results.iter().find(|e| e.subject == subject && e.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let r: Report = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if r.schema != SCHEMA_VERSION {
            return Err(format!("unsupported report schema {}", r.schema));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.results {
            let verdict = match e.passed {
                Some(true) => " PASS",
                Some(false) => " FAIL",
                None => "",
            };
            let seed = e.seed.map(|s| format!(" seed={s}")).unwrap_or_default();
            let prov = serde_json::to_value(e.provenance).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            writeln!(s, "{:<8} {} = {}  [{prov}{seed}]{verdict}", e.subject, e.name, render(&e.value)).unwrap();
        }
        for w in &self.warnings {
            writeln!(s, "warning: {w}").unwrap();
        }
        for a in &self.assumptions {
            writeln!(s, "assumption: {a}").unwrap();
        }
        for f in &self.failures {
            writeln!(s, "FAILURE: {f}").unwrap();
        }
        s
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("({})", items.iter().map(render).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}: {}", render(v))).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}
