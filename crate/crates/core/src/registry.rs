//! The identity corpus and its verifier.

use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{parse, Evaluator, Expr};
use crate::report::{Expectation, Status, VerificationReport};
use crate::ring::{Coeff, Ring};
use crate::series::{Comparison, ZeroPrefix};

/// Truncation order used when neither the caller nor the record chooses one.
pub const DEFAULT_PRECISION: usize = 512;

/// Environment variable that points the CLI at a different corpus file.
pub const CORPUS_ENV: &str = "QLAB_CORPUS";

const BUILTIN: &str = include_str!("../corpus/identities.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Equality,
    /// Scaled congruence modulo `M`.
    CongruenceMod(u64),
}

#[derive(Debug, Clone)]
pub struct IdentityRecord {
    pub id: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub clearing: Expr,
    pub lhs_text: String,
    pub rhs_text: String,
    pub clearing_text: String,
    pub mode: Mode,
    pub default_precision: Option<usize>,
    pub anchor: String,
    pub expected: Expectation,
    pub note: Option<String>,
    /// 1-based line in the corpus file.
    pub line: usize,
}

impl IdentityRecord {
    /// Evaluate both sides, clear, and compare to `n` terms.
    pub fn check(&self, n: usize) -> Result<Status> {
        let mut ev = Evaluator::new(Ring::ExactRational);
        let c = ev.eval(&self.clearing, n)?;
        match c.zero_prefix() {
            ZeroPrefix::AllZero => {
                return Err(Error::InvalidArgument(format!(
                    "clearing series of `{}` vanishes to precision {n}",
                    self.id
                )))
            }
            ZeroPrefix::Order(k) => {
                let lead = c.coeff(k);
                if lead != Coeff::integer(1) && lead != Coeff::integer(-1) {
                    return Err(Error::InvalidArgument(format!(
                        "clearing series of `{}` has leading coefficient {lead}, expected +-1",
                        self.id
                    )));
                }
            }
        }
        let l = ev.eval(&self.lhs, n)?.mul(&c)?;
        let r = ev.eval(&self.rhs, n)?.mul(&c)?;
        Ok(match self.mode {
            Mode::Equality => match l.equal_to_precision(&r, n)? {
                Comparison::Equal => Status::Holds,
                Comparison::FirstDifference { index, left, right } => {
                    Status::FailsAt { index, lhs: left.to_string(), rhs: right.to_string() }
                }
            },
            Mode::CongruenceMod(m) => match l.sub(&r)?.scaled_congruence_failure(m)? {
                None => Status::Holds,
                Some(index) => {
                    Status::FailsAt { index, lhs: l.coeff(index).to_string(), rhs: r.coeff(index).to_string() }
                }
            },
        })
    }

    pub fn verify(&self, n: Option<usize>) -> VerificationReport {
        let precision = n.or(self.default_precision).unwrap_or(DEFAULT_PRECISION);
        let started = Instant::now();
        let status = self.check(precision).unwrap_or_else(|e| Status::from_error(&e));
        VerificationReport {
            id: self.id.clone(),
            precision,
            status,
            anchor: self.anchor.clone(),
            expected: self.expected,
            elapsed: Some(started.elapsed()),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    records: Vec<IdentityRecord>,
}

fn corpus_err(line: usize, message: impl Into<String>) -> Error {
    Error::Corpus { line, message: message.into() }
}

fn parse_field(text: &str, line: usize, field: &str) -> Result<Expr> {
    parse(text).map_err(|e| match e {
        Error::Parse { position, expected } => corpus_err(
            line,
            format!("{field}: parse error at byte {position} of `{text}`, expected {}", expected.join(" | ")),
        ),
        other => corpus_err(line, format!("{field}: {other}")),
    })
}

/// `*` matches any run of characters; everything else is literal.
fn glob_match(pattern: &str, text: &str) -> bool {
    let parts: Vec<&str> = pattern.split('*').collect();
    if parts.len() == 1 {
        return pattern == text;
    }
    let (first, last) = (parts[0], parts[parts.len() - 1]);
    if !text.starts_with(first) || !text[first.len()..].ends_with(last) {
        return false;
    }
    let mut rest = &text[first.len()..text.len() - last.len()];
    for mid in &parts[1..parts.len() - 1] {
        match rest.find(mid) {
            Some(i) => rest = &rest[i + mid.len()..],
            None => return false,
        }
    }
    true
}

impl Corpus {
    /// The corpus compiled into the library.
    pub fn builtin() -> Corpus {
        Corpus::parse(BUILTIN).expect("built-in corpus parses")
    }

    pub fn load(path: &Path) -> Result<Corpus> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Corpus::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Corpus> {
        let mut records = Vec::new();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split('|').map(str::trim).collect();
            if !(5..=7).contains(&fields.len()) {
                return Err(corpus_err(line, format!("expected 5 to 7 `|`-separated fields, found {}", fields.len())));
            }
            let id = fields[0];
            if id.is_empty() || id.chars().any(char::is_whitespace) {
                return Err(corpus_err(line, "identifier must be non-empty without whitespace"));
            }
            if !seen.insert(id.to_string()) {
                return Err(corpus_err(line, format!("duplicate identifier `{id}`")));
            }
            let modulus = fields.get(5).copied().unwrap_or("");
            let mode = match fields[4] {
                "exact" if modulus.is_empty() => Mode::Equality,
                "exact" => return Err(corpus_err(line, "exact records take no modulus")),
                "mod" => {
                    let m: u64 = modulus.parse().map_err(|_| corpus_err(line, format!("bad modulus `{modulus}`")))?;
                    Ring::modular(m).map_err(|e| corpus_err(line, e.to_string()))?;
                    Mode::CongruenceMod(m)
                }
                other => return Err(corpus_err(line, format!("ring must be `exact` or `mod`, found `{other}`"))),
            };
            let mut rec = IdentityRecord {
                id: id.to_string(),
                lhs: parse_field(fields[1], line, "lhs")?,
                rhs: parse_field(fields[2], line, "rhs")?,
                clearing: parse_field(fields[3], line, "clearing")?,
                lhs_text: fields[1].to_string(),
                rhs_text: fields[2].to_string(),
                clearing_text: fields[3].to_string(),
                mode,
                default_precision: None,
                anchor: String::new(),
                expected: Expectation::Holds,
                note: None,
                line,
            };
            for attr in fields.get(6).copied().unwrap_or("").split(';').map(str::trim).filter(|a| !a.is_empty()) {
                let (key, value) =
                    attr.split_once('=').ok_or_else(|| corpus_err(line, format!("attribute `{attr}` lacks `=`")))?;
                let value = value.trim();
                match key.trim() {
                    "anchor" => rec.anchor = value.to_string(),
                    "note" => rec.note = Some(value.to_string()),
                    "precision" => {
                        let n: usize =
                            value.parse().map_err(|_| corpus_err(line, format!("bad precision `{value}`")))?;
                        if n == 0 {
                            return Err(corpus_err(line, "precision must be positive"));
                        }
                        rec.default_precision = Some(n);
                    }
                    "expect" => {
                        rec.expected = match value {
                            "holds" => Expectation::Holds,
                            "fails" => Expectation::Fails,
                            _ => {
                                return Err(corpus_err(
                                    line,
                                    format!("expect must be `holds` or `fails`, found `{value}`"),
                                ))
                            }
                        }
                    }
                    other => return Err(corpus_err(line, format!("unknown attribute `{other}`"))),
                }
            }
            records.push(rec);
        }
        Ok(Corpus { records })
    }

    pub fn records(&self) -> &[IdentityRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Result<&IdentityRecord> {
        self.records.iter().find(|r| r.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    /// Records whose id matches `pattern` (`*` wildcards), in corpus order.
    pub fn filter(&self, pattern: &str) -> Corpus {
        Corpus { records: self.records.iter().filter(|r| glob_match(pattern, &r.id)).cloned().collect() }
    }

    pub fn verify(&self, id: &str, n: Option<usize>) -> Result<VerificationReport> {
        Ok(self.get(id)?.verify(n))
    }

    /// One report per record, in corpus order whatever the parallelism.
    pub fn verify_all(&self, n: Option<usize>, parallel: bool) -> Vec<VerificationReport> {
        if parallel {
            self.records.par_iter().map(|r| r.verify(n)).collect()
        } else {
            self.records.iter().map(|r| r.verify(n)).collect()
        }
    }
}
