//! Claim files: one claim per line, optionally `id | claim | key=value; ...`.

use std::path::Path;

use rayon::prelude::*;

use super::{CongruenceClaim, Lab, DEFAULT_NMAX};
use crate::error::{Error, Result};
use crate::report::{Expectation, VerificationReport};

const BUILTIN: &str = include_str!("../../corpus/claims.txt");

#[derive(Debug, Clone)]
pub struct ClaimRecord {
    pub id: String,
    pub claim: CongruenceClaim,
    pub anchor: String,
    pub expected: Expectation,
    pub n_max: Option<usize>,
    pub line: usize,
}

impl ClaimRecord {
    pub fn check(&self, lab: &Lab, n_max: Option<usize>) -> VerificationReport {
        let n = n_max.or(self.n_max).unwrap_or(DEFAULT_NMAX);
        lab.report(&self.id, &self.claim, n, &self.anchor, self.expected)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ClaimSet {
    records: Vec<ClaimRecord>,
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::Corpus { line, message: message.into() }
}

impl ClaimSet {
    /// Claims compiled into the library.
    pub fn builtin() -> ClaimSet {
        ClaimSet::parse(BUILTIN).expect("built-in claims parse")
    }

    pub fn load(path: &Path) -> Result<ClaimSet> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        ClaimSet::parse(&text)
    }

    pub fn parse(text: &str) -> Result<ClaimSet> {
        let mut records: Vec<ClaimRecord> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split('|').map(str::trim).collect();
            let (id, body, attrs) = match fields.as_slice() {
                [c] => (c.to_string(), *c, ""),
                [id, c] => (id.to_string(), *c, ""),
                [id, c, a] => (id.to_string(), *c, *a),
                _ => return Err(bad(line, "expected `claim` or `id | claim | attributes`")),
            };
            if records.iter().any(|r| r.id == id) {
                return Err(bad(line, format!("duplicate identifier `{id}`")));
            }
            let claim = CongruenceClaim::parse(body).map_err(|e| bad(line, e.to_string()))?;
            let mut rec =
                ClaimRecord { id, claim, anchor: String::new(), expected: Expectation::Holds, n_max: None, line };
            for attr in attrs.split(';').map(str::trim).filter(|a| !a.is_empty()) {
                let (key, value) =
                    attr.split_once('=').ok_or_else(|| bad(line, format!("attribute `{attr}` lacks `=`")))?;
                let value = value.trim();
                match key.trim() {
                    "anchor" => rec.anchor = value.to_string(),
                    "nmax" => rec.n_max = Some(value.parse().map_err(|_| bad(line, format!("bad nmax `{value}`")))?),
                    "expect" => {
                        rec.expected = match value {
                            "holds" => Expectation::Holds,
                            "fails" => Expectation::Fails,
                            _ => return Err(bad(line, format!("expect must be `holds` or `fails`, found `{value}`"))),
                        }
                    }
                    other => return Err(bad(line, format!("unknown attribute `{other}`"))),
                }
            }
            records.push(rec);
        }
        Ok(ClaimSet { records })
    }

    pub fn records(&self) -> &[ClaimRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Result<&ClaimRecord> {
        self.records.iter().find(|r| r.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    /// Reports in file order; claims on the same target share one series.
    pub fn check_all(&self, lab: &Lab, n_max: Option<usize>, parallel: bool) -> Vec<VerificationReport> {
        if parallel {
            self.records.par_iter().map(|r| r.check(lab, n_max)).collect()
        } else {
            self.records.iter().map(|r| r.check(lab, n_max)).collect()
        }
    }
}
