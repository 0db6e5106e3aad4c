//! JSON schema for series:
//! `{"ring": ..., "vars": [...], "precision": N, "caps": {...},
//!   "terms": [{"exps": [...], "coeff": "..."}]}`
//! with coefficients rendered as canonical strings. Terms appear in
//! graded-lex order, so serialization is deterministic.

use super::coeff::{CoeffRing, RingKind};
use super::series::{ExpVec, Series, Vars};
use super::text::{parse_series, ParseError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid series JSON: {0}")]
    Shape(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Serde(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingJson {
    Integers,
    Rationals,
    GradedIntPoly { generators: usize },
    GradedRatPoly { generators: usize },
    Quotient { generators: usize, caps: Vec<u32> },
}

impl From<&CoeffRing> for RingJson {
    fn from(ring: &CoeffRing) -> Self {
        match ring.kind() {
            RingKind::Integers => RingJson::Integers,
            RingKind::Rationals => RingJson::Rationals,
            RingKind::GradedPoly {
                gens,
                integral,
                caps,
            } => match (integral, caps) {
                (_, Some(caps)) => RingJson::Quotient {
                    generators: *gens,
                    caps: caps.clone(),
                },
                (true, None) => RingJson::GradedIntPoly { generators: *gens },
                (false, None) => RingJson::GradedRatPoly { generators: *gens },
            },
        }
    }
}

impl From<&RingJson> for CoeffRing {
    fn from(json: &RingJson) -> Self {
        match json {
            RingJson::Integers => CoeffRing::integers(),
            RingJson::Rationals => CoeffRing::rationals(),
            RingJson::GradedIntPoly { generators } => CoeffRing::graded_int_poly(*generators),
            RingJson::GradedRatPoly { generators } => CoeffRing::graded_rat_poly(*generators),
            RingJson::Quotient { generators, caps } => {
                CoeffRing::quotient(*generators, caps.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub ring: RingJson,
    pub vars: Vec<String>,
    pub precision: u32,
    pub caps: BTreeMap<String, u32>,
    pub terms: Vec<TermJson>,
}

impl From<&Series> for SeriesJson {
    fn from(s: &Series) -> Self {
        let caps = s
            .vars()
            .names()
            .iter()
            .zip(s.caps().iter())
            .filter_map(|(name, cap)| cap.map(|c| (name.clone(), c)))
            .collect();
        SeriesJson {
            ring: RingJson::from(s.ring()),
            vars: s.vars().names().to_vec(),
            precision: s.precision(),
            caps,
            terms: s
                .terms()
                .map(|(e, c)| TermJson {
                    exps: e.exps().to_vec(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }
}

impl SeriesJson {
    pub fn into_series(&self) -> Result<Series, JsonError> {
        let ring = CoeffRing::from(&self.ring);
        let vars = Vars::new(self.vars.iter().cloned());
        let caps: Vec<Option<u32>> = self
            .vars
            .iter()
            .map(|name| self.caps.get(name).copied())
            .collect();
        let mut out =
            Series::zero_with_caps(ring.clone(), Arc::clone(&vars), self.precision, caps);
        let coeff_vars = Vars::new(Vec::<String>::new());
        for term in &self.terms {
            if term.exps.len() != self.vars.len() {
                return Err(JsonError::Shape(format!(
                    "exponent vector of length {} for {} variables",
                    term.exps.len(),
                    self.vars.len()
                )));
            }
            let coeff_series =
                parse_series(&term.coeff, &ring, &coeff_vars, 0, Vec::new())?;
            out.insert_term(
                ExpVec::from_exps(term.exps.clone()),
                coeff_series.constant_term(),
            );
        }
        Ok(out)
    }
}

pub fn series_to_json(s: &Series) -> serde_json::Value {
    serde_json::to_value(SeriesJson::from(s)).expect("series serializes")
}

pub fn series_from_json(v: &serde_json::Value) -> Result<Series, JsonError> {
    let json: SeriesJson = serde_json::from_value(v.clone())?;
    json.into_series()
}
