//! The common verification report emitted by every checker.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Outcome of one verification run. `pass` is `ratio <= bound + error_budget`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub check: String,
    /// The statement whose inequality is being tested.
    pub anchor: String,
    pub instance: Value,
    pub quantities: BTreeMap<String, Value>,
    pub ratio: f64,
    pub bound: f64,
    pub bound_formula: String,
    pub error_budget: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<f64>,
}

impl VerificationReport {
    pub fn new(check: &str, anchor: &str, instance: Value) -> Self {
        Self {
            tool: "sodkit".into(),
            version: TOOL_VERSION.into(),
            check: check.into(),
            anchor: anchor.into(),
            instance,
            quantities: BTreeMap::new(),
            ratio: f64::NAN,
            bound: f64::NAN,
            bound_formula: String::new(),
            error_budget: 0.0,
            pass: false,
            seed: None,
            timing_ms: None,
        }
    }

    pub fn quantity(mut self, name: &str, value: impl Serialize) -> Self {
        self.quantities.insert(name.into(), serde_json::to_value(value).expect("serializable quantity"));
        self
    }

    pub fn seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    /// Sets ratio, bound and budget and decides `pass`.
    pub fn conclude(mut self, ratio: f64, bound: f64, bound_formula: &str, error_budget: f64) -> Self {
        self.ratio = ratio;
        self.bound = bound;
        self.bound_formula = bound_formula.into();
        self.error_budget = error_budget;
        self.pass = ratio.is_finite() && ratio <= bound + error_budget;
        self
    }

    /// Forces a failure regardless of the ratio, for failed side conditions.
    pub fn fail(mut self, reason: &str) -> Self {
        self.pass = false;
        self.quantities.insert("failure".into(), Value::String(reason.into()));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule() {
        let r = VerificationReport::new("x", "y", Value::Null).conclude(1.05, 1.0, "1", 0.1);
        assert!(r.pass);
        let r = VerificationReport::new("x", "y", Value::Null).conclude(1.2, 1.0, "1", 0.1);
        assert!(!r.pass);
        let r = VerificationReport::new("x", "y", Value::Null).conclude(f64::NAN, 1.0, "1", 0.1);
        assert!(!r.pass);
        let r = VerificationReport::new("x", "y", Value::Null).conclude(0.5, 1.0, "1", 0.0).fail("side condition");
        assert!(!r.pass);
    }

    #[test]
    fn optional_fields_are_omitted() {
        let r = VerificationReport::new("x", "y", Value::Null);
        let s = serde_json::to_string(&r).unwrap();
        assert!(!s.contains("timing_ms"));
        assert!(!s.contains("seed"));
    }
}
