//! Verdicts for mathematical checks, with the first failing monomial kept as
//! a witness so failures are actionable.

use serde::Serialize;
use std::fmt;

/// Result of comparing two series up to their shared precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Comparison {
    /// The series agree on every term of total degree at most the reported
    /// precision.
    AgreeTo(u32),
    /// First difference, in graded-lex order.
    DifferAt {
        degree: u32,
        monomial: String,
        lhs: String,
        rhs: String,
    },
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        matches!(self, Comparison::AgreeTo(_))
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparison::AgreeTo(p) => write!(f, "equal up to total degree {p}"),
            Comparison::DifferAt {
                degree,
                monomial,
                lhs,
                rhs,
            } => write!(
                f,
                "differ at degree {degree}, monomial {monomial}: {lhs} vs {rhs}"
            ),
        }
    }
}

/// Outcome of a named identity check. A failed check always carries a
/// human-readable witness.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl CheckOutcome {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: false,
            witness: Some(witness.into()),
        }
    }

    pub fn from_comparison(name: impl Into<String>, cmp: &Comparison) -> Self {
        match cmp {
            Comparison::AgreeTo(_) => Self::pass(name),
            diff => Self::fail(name, diff.to_string()),
        }
    }

    /// Combine sub-checks; the first failure wins.
    pub fn all(name: impl Into<String>, parts: impl IntoIterator<Item = CheckOutcome>) -> Self {
        for part in parts {
            if !part.passed {
                return CheckOutcome {
                    name: name.into(),
                    passed: false,
                    witness: Some(format!(
                        "{}: {}",
                        part.name,
                        part.witness.unwrap_or_default()
                    )),
                };
            }
        }
        Self::pass(name)
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "{}: ok", self.name)
        } else {
            write!(
                f,
                "{}: FAILED ({})",
                self.name,
                self.witness.as_deref().unwrap_or("no witness")
            )
        }
    }
}
