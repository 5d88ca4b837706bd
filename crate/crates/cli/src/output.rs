//! JSON envelopes and conversions shared by the subcommands.

use num_bigint::{BigInt, BigUint};
use pickychar::bijection::{Pairing, Report};
use pickychar::criteria::CriterionResult;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "picky-char/1";

/// Result of a subcommand: a JSON document and its plain-text rendering.
pub struct Output {
    pub json: Value,
    pub text: String,
    /// Nonzero exit status without an error message (failed checks).
    pub failed: bool,
}

impl Output {
    pub fn new(kind: &str, body: Value, text: impl Into<String>) -> Output {
        Output { json: envelope(kind, body), text: text.into(), failed: false }
    }

    pub fn failing(mut self, failed: bool) -> Output {
        self.failed = failed;
        self
    }
}

pub fn envelope(kind: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(SCHEMA));
    m.insert("kind".into(), Value::from(kind));
    match body {
        Value::Object(b) => m.extend(b),
        other => {
            m.insert("result".into(), other);
        }
    }
    Value::Object(m)
}

pub fn int(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn uint(v: &BigUint) -> Value {
    Value::String(v.to_string())
}

pub fn pairing_json(p: &Pairing) -> Value {
    let elements: Vec<Value> = p
        .elements
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "global": e.global.to_string(),
                "type": e.global.cycle_type().to_string(),
                "local": e.local.to_string(),
                "image_check": e.image_check,
            })
        })
        .collect();
    let triples: Vec<Value> = p
        .triples
        .iter()
        .map(|t| {
            json!({
                "lambda": t.global.to_string(),
                "local": t.local.to_string(),
                "local_degree": uint(&t.local.degree()),
                "signs": t.signs,
            })
        })
        .collect();
    json!({
        "context": p.context,
        "side": p.side.to_string(),
        "elements": elements,
        "shared_sign": p.shared_sign,
        "triples": triples,
    })
}

pub fn report_json(r: &Report) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

pub fn criterion_json(r: &CriterionResult) -> Value {
    serde_json::to_value(r).expect("criterion serializes")
}
