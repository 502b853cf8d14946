//! Machine-readable outcome of a verification run.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::series::Mismatch;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    /// Where the two sides were compared, e.g. `(3,5)` or `k=4`.
    pub location: String,
    pub exponent: i64,
    pub lhs_coefficient: String,
    pub rhs_coefficient: String,
}

impl Discrepancy {
    pub fn from_mismatch(location: impl Into<String>, m: &Mismatch) -> Self {
        Discrepancy {
            location: location.into(),
            exponent: m.exponent,
            lhs_coefficient: m.lhs.to_string(),
            rhs_coefficient: m.rhs.to_string(),
        }
    }
}

/// `pass` is true exactly when `first_discrepancy` is `None`.
///
/// `elapsed_ms` is wall-clock metadata and is left out of the serialized
/// form so that reports are byte-for-byte reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub parameters: BTreeMap<String, Value>,
    pub pass: bool,
    pub first_discrepancy: Option<Discrepancy>,
    #[serde(skip)]
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Collects parameters while the check runs and stamps the elapsed time.
pub struct ReportBuilder {
    check: String,
    parameters: BTreeMap<String, Value>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(check: impl Into<String>) -> Self {
        ReportBuilder {
            check: check.into(),
            parameters: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn finish(self, first_discrepancy: Option<Discrepancy>) -> VerificationReport {
        VerificationReport {
            check: self.check,
            parameters: self.parameters,
            pass: first_discrepancy.is_none(),
            first_discrepancy,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}
