use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::constructions::FamilySpec;
use crate::exactpoly::{Polynomial, PolynomialJson};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Subject {
    Family(FamilySpec),
    Polynomial { polynomial_sha256: String },
    Pair { p_sha256: String, q_sha256: String },
    Expression { expression: String },
}

impl Subject {
    pub fn polynomial(p: &Polynomial) -> Self {
        Subject::Polynomial { polynomial_sha256: polynomial_hash(p) }
    }
}

/// SHA-256 of the canonical JSON form, hex encoded.
pub fn polynomial_hash(p: &Polynomial) -> String {
    hex::encode(Sha256::digest(p.to_json().as_bytes()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "out-of-domain")]
    OutOfDomain,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub exact: bool,
    pub residual: f64,
    pub surface: f64,
    pub min_grad_norm: f64,
}

impl Tolerances {
    pub fn exact() -> Self {
        Tolerances { exact: true, residual: 0.0, surface: 0.0, min_grad_norm: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub check: String,
    pub max_residual: f64,
    pub max_normalized: f64,
    pub scale_used: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub subject: Subject,
    pub mode: Mode,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<PolynomialJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remainder: Option<PolynomialJson>,
    /// Largest raw residual magnitude.
    pub max_residual: f64,
    /// Largest residual divided by its scale; this is what `tolerances.residual` bounds.
    pub max_normalized: f64,
    /// Scale at the point attaining `max_normalized`.
    pub scale_used: f64,
    pub points: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckSummary>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_subject(mut self, subject: Subject) -> Self {
        self.subject = subject;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}
