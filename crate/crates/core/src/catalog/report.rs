use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use super::Params;
use crate::report::{num, SCHEMA_VERSION};
use crate::seqmodel::AlphaEstimate;

/// Width allowed for a finite alpha interval.
pub const MAX_WIDTH: f64 = 0.1;
/// Slack on interval containment.
pub const CONTAIN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: Value,
    pub expected: Value,
    pub tol: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Expected {
    pub value: Value,
    pub source: String,
}

/// Report of one catalog run.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub schema: &'static str,
    pub id: String,
    pub params: BTreeMap<String, Value>,
    pub measured: BTreeMap<String, Value>,
    pub expected: BTreeMap<String, Expected>,
    pub citation: String,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl ExampleReport {
    pub fn new(id: &str, citation: &str) -> Self {
        ExampleReport {
            schema: SCHEMA_VERSION,
            id: id.to_string(),
            params: BTreeMap::new(),
            measured: BTreeMap::new(),
            expected: BTreeMap::new(),
            citation: citation.to_string(),
            notes: Vec::new(),
            checks: Vec::new(),
            pass: true,
        }
    }

    pub(crate) fn with_params(mut self, p: &Params) -> Self {
        for (k, v) in p.iter() {
            self.params.insert(k.clone(), num(*v));
        }
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub(crate) fn measure<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.measured.insert(key.to_string(), v);
    }

    pub(crate) fn measure_f(&mut self, key: &str, value: f64) {
        self.measured.insert(key.to_string(), num(value));
    }

    pub(crate) fn expect(&mut self, key: &str, value: Value, source: &str) {
        self.expected.insert(key.to_string(), Expected { value, source: source.to_string() });
    }

    pub(crate) fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn push(&mut self, name: &str, measured: Value, expected: Value, tol: Value, pass: bool) {
        self.pass &= pass;
        self.checks.push(Check { name: name.to_string(), measured, expected, tol, pass });
    }

    /// `|measured - expected| <= tol`; two infinities agree.
    pub(crate) fn close(&mut self, name: &str, measured: f64, expected: f64, tol: f64) {
        let pass = if expected.is_infinite() || measured.is_infinite() {
            measured == expected
        } else {
            (measured - expected).abs() <= tol
        };
        self.push(name, num(measured), num(expected), num(tol), pass);
    }

    pub(crate) fn at_most(&mut self, name: &str, measured: f64, bound: f64) {
        let pass = measured <= bound;
        self.push(name, num(measured), serde_json::json!({ "at_most": num(bound) }), Value::Null, pass);
    }

    pub(crate) fn at_least(&mut self, name: &str, measured: f64, bound: f64) {
        let pass = measured >= bound;
        self.push(name, num(measured), serde_json::json!({ "at_least": num(bound) }), Value::Null, pass);
    }

    pub(crate) fn within(&mut self, name: &str, measured: f64, lo: f64, hi: f64) {
        let pass = measured >= lo && measured <= hi;
        self.push(name, num(measured), serde_json::json!([num(lo), num(hi)]), Value::Null, pass);
    }

    pub(crate) fn holds(&mut self, name: &str, value: bool) {
        self.push(name, Value::Bool(value), Value::Bool(true), Value::Null, value);
    }

    /// Records an alpha interval and checks that it contains `claim` and, for finite
    /// claims, is at most `MAX_WIDTH` wide.
    pub(crate) fn alpha(&mut self, key: &str, est: &AlphaEstimate, claim: f64, source: &str) {
        self.measure(key, est);
        self.expect(key, num(claim), source);
        let contains = est.contains(claim, CONTAIN_TOL);
        let narrow = claim.is_infinite() || est.width() <= MAX_WIDTH;
        self.push(
            &format!("{key} contains claim"),
            serde_json::json!([num(est.lower), num(est.upper)]),
            num(claim),
            num(CONTAIN_TOL),
            contains,
        );
        if claim.is_finite() {
            self.push(&format!("{key} width"), num(est.width()), serde_json::json!({ "at_most": MAX_WIDTH }), Value::Null, narrow);
        }
    }
}
