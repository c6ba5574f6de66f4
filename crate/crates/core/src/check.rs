//! Named pass/fail outcomes with replayable counterexamples.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::io::ToJson;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Check {
    pub fn new(label: impl Into<String>, passed: bool) -> Self {
        Self {
            label: label.into(),
            passed,
            counterexample: None,
        }
    }

    /// Passes iff `lhs == rhs`; on failure both sides are recorded.
    pub fn equal<T: ToJson + PartialEq + ?Sized>(label: impl Into<String>, lhs: &T, rhs: &T) -> Self {
        let passed = lhs == rhs;
        let mut check = Self::new(label, passed);
        if !passed {
            check = check.with("lhs", lhs).with("rhs", rhs);
        }
        check
    }

    /// Attaches an input to the counterexample. Ignored for passing checks.
    pub fn with<T: ToJson + ?Sized>(mut self, key: &str, value: &T) -> Self {
        if !self.passed {
            let obj = self
                .counterexample
                .get_or_insert_with(|| Value::Object(Map::new()))
                .as_object_mut()
                .expect("counterexample is an object");
            obj.insert(key.to_string(), value.to_json());
        }
        self
    }

    pub fn note(mut self, key: &str, text: impl Into<String>) -> Self {
        if !self.passed {
            let obj = self
                .counterexample
                .get_or_insert_with(|| Value::Object(Map::new()))
                .as_object_mut()
                .expect("counterexample is an object");
            obj.insert(key.to_string(), Value::String(text.into()));
        }
        self
    }
}

/// Folds repeated checks of one label into a single outcome that keeps the
/// first failure.
pub fn merge(label: &str, checks: impl IntoIterator<Item = Check>) -> Check {
    let mut merged = Check::new(label, true);
    for c in checks {
        if !c.passed && merged.passed {
            merged.passed = false;
            merged.counterexample = c.counterexample;
        }
    }
    merged
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
