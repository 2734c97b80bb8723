//! Communication and circuit bounds with the chain of inequalities behind
//! them.

use crate::rational::{format_rational, Rational};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Pp,
    Bpp,
    Upp,
    Disc,
    SignRank,
    CircuitSize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

/// One applied result: its name, the inequality as instantiated, and the
/// inputs plugged into it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Step {
    pub theorem: String,
    pub inequality: String,
    pub inputs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub direction: Direction,
    /// Numeric value. Complexity bounds are in bits; `Disc` is the
    /// discrepancy itself; `SignRank` and `CircuitSize` are log2 values.
    pub value: f64,
    /// Exact rational behind `value`, where one exists.
    pub exact: Option<Rational>,
    /// What `exact` stands for, e.g. "square of the bound".
    pub exact_meaning: Option<String>,
    /// True when the bound carries no information.
    pub vacuous: bool,
    pub provenance: Vec<Step>,
    /// Number of conversions through statements with unspecified constants.
    pub slack: u32,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(kind: BoundKind, direction: Direction, value: f64) -> Self {
        BoundReport {
            kind,
            direction,
            value,
            exact: None,
            exact_meaning: None,
            vacuous: false,
            provenance: Vec::new(),
            slack: 0,
            notes: Vec::new(),
        }
    }

    pub fn with_exact(mut self, v: Rational, meaning: &str) -> Self {
        self.exact = Some(v);
        self.exact_meaning = Some(meaning.to_string());
        self
    }

    pub fn step(mut self, theorem: &str, inequality: &str, inputs: &[(&str, String)]) -> Self {
        self.provenance.push(Step {
            theorem: theorem.to_string(),
            inequality: inequality.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        });
        self
    }

    pub fn note(mut self, s: &str) -> Self {
        self.notes.push(s.to_string());
        self
    }

    pub fn vacuous(mut self, v: bool) -> Self {
        self.vacuous = v;
        self
    }

    /// Marks a conversion through an asymptotic statement.
    pub fn slack(mut self, k: u32) -> Self {
        self.slack += k;
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "direction": self.direction,
            "value": if self.value.is_finite() { json!(self.value) } else { json!(self.value.to_string()) },
            "exact": self.exact.as_ref().map(format_rational),
            "exact_meaning": self.exact_meaning,
            "vacuous": self.vacuous,
            "provenance": self.provenance.iter().map(|s| json!({
                "theorem": s.theorem,
                "inequality": s.inequality,
                "inputs": s.inputs.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect::<serde_json::Map<_, _>>(),
            })).collect::<Vec<_>>(),
            "slack": self.slack,
            "notes": self.notes,
        })
    }
}

impl Serialize for BoundReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
