//! Verification outcomes shared by the identity registry and the congruence lab.

use std::time::Duration;

use serde::{Serialize, Serializer};

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Holds,
    /// First index where the two sides disagree, with both coefficients.
    FailsAt {
        index: usize,
        lhs: String,
        rhs: String,
    },
    Error {
        kind: String,
        message: String,
    },
}

impl Status {
    pub fn from_error(e: &Error) -> Status {
        Status::Error { kind: e.root().kind().to_string(), message: e.to_string() }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Status::Holds => "Holds",
            Status::FailsAt { .. } => "FailsAt",
            Status::Error { .. } => "Error",
        }
    }
}

/// What a record is expected to do; known-false variants are registered as `Fails`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    #[default]
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub id: String,
    pub precision: usize,
    pub status: Status,
    pub anchor: String,
    pub expected: Expectation,
    /// Only filled in when timings are requested, so default output stays byte-stable.
    pub elapsed: Option<Duration>,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    /// True when the outcome matches the registered expectation.
    pub fn as_expected(&self) -> bool {
        matches!(
            (&self.status, self.expected),
            (Status::Holds, Expectation::Holds) | (Status::FailsAt { .. }, Expectation::Fails)
        )
    }

    pub fn fail_index(&self) -> Option<usize> {
        match self.status {
            Status::FailsAt { index, .. } => Some(index),
            _ => None,
        }
    }
}

#[derive(Serialize)]
struct Wire<'a> {
    id: &'a str,
    precision: usize,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    fail_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhs_coeff: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rhs_coeff: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_kind: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_message: Option<&'a str>,
    anchor: &'a str,
    expected: Expectation,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut w = Wire {
            id: &self.id,
            precision: self.precision,
            status: self.status.name(),
            fail_index: None,
            lhs_coeff: None,
            rhs_coeff: None,
            error_kind: None,
            error_message: None,
            anchor: &self.anchor,
            expected: self.expected,
            wall_time_ms: self.elapsed.map(|d| d.as_secs_f64() * 1e3),
        };
        match &self.status {
            Status::Holds => {}
            Status::FailsAt { index, lhs, rhs } => {
                w.fail_index = Some(*index);
                w.lhs_coeff = Some(lhs);
                w.rhs_coeff = Some(rhs);
            }
            Status::Error { kind, message } => {
                w.error_kind = Some(kind);
                w.error_message = Some(message);
            }
        }
        w.serialize(s)
    }
}
