//! Congruences on coefficient progressions of DSOME, SOME and custom series.
//!
//! Every check runs in the modular ring: the target series is computed once per
//! `(target, M)` through the Lambert pipeline and shared between claims.

mod claim;
mod file;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub use claim::{ClaimForm, CongruenceClaim, Progression, Target};
pub use file::{ClaimRecord, ClaimSet};

use crate::error::{Error, Result};
use crate::expr::Evaluator;
use crate::qproducts::{dsome_gf_lambert, some_gf};
use crate::report::{Expectation, Status, VerificationReport};
use crate::ring::{mod_inverse, Ring};
use crate::series::{Series, PRECISION_CAP};

/// Smallest `min_support` the scanner accepts.
pub const MIN_SUPPORT: usize = 20;

/// Default bound on `n` for checks and scans.
pub const DEFAULT_NMAX: usize = 100;

fn length_for(n_max: usize) -> Result<usize> {
    match n_max.checked_add(1) {
        Some(len) if len <= PRECISION_CAP => Ok(len),
        _ => Err(Error::ResourceLimit(format!("{n_max} coefficients requested, cap is {PRECISION_CAP}"))),
    }
}

fn last_index(prog: &Progression, n_max: usize) -> Result<usize> {
    prog.index(n_max).ok_or_else(|| Error::ResourceLimit(format!("index {prog} at n={n_max} overflows")))
}

/// Coefficients `0..=n_max` of `target`, reduced mod `m`.
pub fn series_for_target(target: &Target, n_max: usize, m: u64) -> Result<Series> {
    let ring = Ring::modular(m)?;
    let len = length_for(n_max)?;
    match target {
        Target::Dsome => dsome_gf_lambert(len, ring),
        Target::Some => some_gf(len, ring),
        Target::Custom(e) => Evaluator::new(ring).eval(e, len),
    }
}

type Slot = Arc<Mutex<Option<Arc<Series>>>>;

/// Shared cache of target series, safe to use from many threads.
#[derive(Default)]
pub struct Lab {
    slots: Mutex<HashMap<(String, u64), Slot>>,
}

/// A progression that vanished mod `modulus` on every available index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanHit {
    pub prog: Progression,
    pub modulus: u64,
    /// Largest `n` looked at during the scan.
    pub verified_up_to: usize,
    /// Number of indices checked.
    pub support: usize,
    /// No counterexample when re-checked to twice the scan bound.
    pub witness_free: bool,
}

impl Lab {
    pub fn new() -> Lab {
        Lab::default()
    }

    /// At least `n_max + 1` coefficients of `target` mod `m`. Longer cached series are reused as is.
    pub fn series(&self, target: &Target, n_max: usize, m: u64) -> Result<Arc<Series>> {
        let len = length_for(n_max)?;
        let slot = {
            let mut slots = self.slots.lock().unwrap_or_else(|p| p.into_inner());
            slots.entry((target.key(), m)).or_default().clone()
        };
        // one computation per key; other keys proceed in parallel
        let mut guard = slot.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(s) = guard.as_ref() {
            if s.precision() >= len {
                return Ok(s.clone());
            }
        }
        let s = Arc::new(series_for_target(target, n_max, m)?);
        *guard = Some(s.clone());
        Ok(s)
    }

    fn residues(&self, target: &Target, n_max: usize, m: u64) -> Result<Arc<Series>> {
        let s = self.series(target, n_max, m)?;
        if s.residues().is_none() {
            return Err(Error::InvalidArgument("target series is not modular".into()));
        }
        Ok(s)
    }

    /// `a(A n + B) == 0 (mod M)` for `0 <= n <= n_max`. The report's index is `n`.
    pub fn check_zero(&self, target: &Target, prog: Progression, m: u64, n_max: usize) -> Result<Status> {
        let s = self.residues(target, last_index(&prog, n_max)?, m)?;
        let a = s.residues().unwrap_or_default();
        for n in 0..=n_max {
            let v = a[prog.step * n + prog.residue];
            if v != 0 {
                return Ok(Status::FailsAt { index: n, lhs: v.to_string(), rhs: "0".into() });
            }
        }
        Ok(Status::Holds)
    }

    /// `a(lhs(n)) == sum c_i a(rhs_i(n)) (mod M)` for `0 <= n <= n_max`.
    pub fn check_relation(
        &self,
        target: &Target,
        lhs: Progression,
        rhs: &[(i64, Progression)],
        m: u64,
        n_max: usize,
    ) -> Result<Status> {
        let mut top = last_index(&lhs, n_max)?;
        for (_, p) in rhs {
            top = top.max(last_index(p, n_max)?);
        }
        let s = self.residues(target, top, m)?;
        let a = s.residues().unwrap_or_default();
        let m128 = m as i128;
        for n in 0..=n_max {
            let l = a[lhs.step * n + lhs.residue];
            let r =
                rhs.iter().map(|(c, p)| *c as i128 * a[p.step * n + p.residue] as i128).sum::<i128>().rem_euclid(m128)
                    as u64;
            if l != r {
                return Ok(Status::FailsAt { index: n, lhs: l.to_string(), rhs: r.to_string() });
            }
        }
        Ok(Status::Holds)
    }

    pub fn check_claim(&self, claim: &CongruenceClaim, n_max: usize) -> Result<Status> {
        match &claim.form {
            ClaimForm::Zero { prog, modulus } => self.check_zero(&claim.target, *prog, *modulus, n_max),
            ClaimForm::Relation { lhs, rhs, modulus } => self.check_relation(&claim.target, *lhs, rhs, *modulus, n_max),
        }
    }

    /// Report form of [`Lab::check_claim`]; errors become an `Error` status.
    pub fn report(
        &self,
        id: &str,
        claim: &CongruenceClaim,
        n_max: usize,
        anchor: &str,
        expected: Expectation,
    ) -> VerificationReport {
        let started = std::time::Instant::now();
        let status = self.check_claim(claim, n_max).unwrap_or_else(|e| Status::from_error(&e));
        VerificationReport {
            id: id.to_string(),
            precision: n_max,
            status,
            anchor: anchor.to_string(),
            expected,
            elapsed: Some(started.elapsed()),
        }
    }

    /// Every `(A, B, M)` with `A` in `a_lo..=a_hi` whose available coefficients all vanish mod `M`.
    ///
    /// The series is taken to `a_hi * (n_max + 1)` terms, so smaller steps see more indices.
    /// Steps are visited in increasing order and moduli in decreasing order; a candidate is
    /// dropped when an earlier hit `(A', B', M')` has `A' | A`, `B = B' (mod A')` and `M | M'`.
    pub fn scan(
        &self,
        target: &Target,
        steps: (usize, usize),
        moduli: &[u64],
        n_max: usize,
        min_support: usize,
    ) -> Result<Vec<ScanHit>> {
        let (a_lo, a_hi) = steps;
        if min_support < MIN_SUPPORT {
            return Err(Error::InvalidArgument(format!(
                "min_support must be at least {MIN_SUPPORT}, got {min_support}"
            )));
        }
        if a_lo == 0 || a_lo > a_hi {
            return Err(Error::InvalidArgument(format!("step range {a_lo}..={a_hi} is empty or starts at 0")));
        }
        if moduli.is_empty() {
            return Err(Error::InvalidArgument("no moduli to scan".into()));
        }
        let mut ms = moduli.to_vec();
        ms.sort_unstable_by(|a, b| b.cmp(a));
        ms.dedup();
        let overflow = || Error::ResourceLimit(format!("scan length for step {a_hi} and n_max {n_max} overflows"));
        let len = a_hi.checked_mul(n_max.checked_add(1).ok_or_else(overflow)?).ok_or_else(overflow)?;
        // room for the doubled re-check of the largest step
        let recheck = a_hi.checked_mul(2 * n_max + 1).ok_or_else(overflow)?;
        let mut series = Vec::with_capacity(ms.len());
        for &m in &ms {
            series.push(self.residues(target, recheck, m)?);
        }
        let mut hits: Vec<ScanHit> = Vec::new();
        for a in a_lo..=a_hi {
            for (s, &m) in series.iter().zip(&ms) {
                let coeffs = &s.residues().unwrap_or_default()[..len];
                for b in 0..a {
                    let prog = Progression { step: a, residue: b };
                    let subsumed = hits.iter().any(|h| prog.within(&h.prog) && h.modulus % m == 0);
                    if subsumed {
                        continue;
                    }
                    let support = (len - b).div_ceil(a);
                    if support < min_support {
                        continue;
                    }
                    if coeffs[b..].iter().step_by(a).all(|&v| v == 0) {
                        let witness_free = self.check_zero(target, prog, m, 2 * n_max)? == Status::Holds;
                        hits.push(ScanHit { prog, modulus: m, verified_up_to: support - 1, support, witness_free });
                    }
                }
            }
        }
        Ok(hits)
    }
}

/// The residue class `24 lambda = 1 (mod 5^alpha)` used by the SOME conjecture.
pub fn ag_residue(alpha: u32) -> Result<(u64, u64)> {
    if !(1..=3).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha must be 1, 2 or 3, got {alpha}")));
    }
    let m = 5u64.pow(alpha);
    let r = mod_inverse(24, m).ok_or_else(|| Error::InvalidArgument("24 is not invertible".into()))?;
    Ok((m, r))
}

/// `SOME(lambda) == 0 (mod 5^alpha)` for `lambda <= lambda_max` with `lambda = residue (mod 5^alpha)`.
pub fn check_some_class(lab: &Lab, alpha: u32, residue: u64, lambda_max: usize) -> Result<VerificationReport> {
    let (m, _) = ag_residue(alpha)?;
    let prog = Progression::new(m as usize, (residue % m) as usize)?;
    let claim = CongruenceClaim::zero(Target::Some, prog, m)?;
    let n_max = lambda_max.saturating_sub(prog.residue) / prog.step;
    Ok(lab.report(&claim.to_string(), &claim, n_max, "", Expectation::Holds))
}

/// The conjecture for one `alpha`, over `lambda <= lambda_max`.
pub fn check_ag_conjecture(lab: &Lab, alpha: u32, lambda_max: usize) -> Result<VerificationReport> {
    let (_, r) = ag_residue(alpha)?;
    check_some_class(lab, alpha, r, lambda_max)
}
