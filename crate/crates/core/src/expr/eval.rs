use std::collections::HashMap;

use super::ast::{Expr, ExprKind, NamedSeries};
use crate::error::{Error, Result};
use crate::qproducts::{
    dsome_gf_lambert, euler_f, lambert_inner_dsome, lambert_inner_some, pochhammer_inf, some_gf, PochSign, ProductSpec,
};
use crate::ring::{reduce_rational, Coeff, Ring};
use crate::rr::{dilated, k_series, rr_g, rr_h, t_series, Side};
use crate::series::{Series, PRECISION_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum AtomKey {
    Eta(usize),
    G(usize),
    H(usize),
    T(usize),
    K,
    Named(NamedSeries, usize),
    Poch(PochSign, usize, usize),
}

/// Evaluates expressions in one ring, memoizing atoms at the largest precision seen.
#[derive(Debug)]
pub struct Evaluator {
    ring: Ring,
    cache: HashMap<AtomKey, Series>,
}

fn at(e: &Expr, err: Error) -> Error {
    match err {
        Error::Eval { .. } => err,
        cause => {
            Error::Eval { start: e.span.start, end: e.span.end, source_text: e.to_string(), cause: Box::new(cause) }
        }
    }
}

fn check_precision(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    if n > PRECISION_CAP {
        return Err(Error::ResourceLimit(format!("precision {n} exceeds the cap of {PRECISION_CAP}")));
    }
    Ok(())
}

impl Evaluator {
    pub fn new(ring: Ring) -> Evaluator {
        Evaluator { ring, cache: HashMap::new() }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Series of `e` to exactly `n` terms.
    pub fn eval(&mut self, e: &Expr, n: usize) -> Result<Series> {
        check_precision(n)?;
        self.go(e, n)
    }

    fn atom(&mut self, key: AtomKey, n: usize) -> Result<Series> {
        if let Some(s) = self.cache.get(&key) {
            if s.precision() >= n {
                return s.truncate(n);
            }
        }
        let ring = self.ring;
        let s = match key {
            AtomKey::Eta(k) => euler_f(k, n, ring)?,
            AtomKey::G(k) => dilated(k, n, |m| Ok(rr_g(m, Side::Sum, ring)))?,
            AtomKey::H(k) => dilated(k, n, |m| Ok(rr_h(m, Side::Sum, ring)))?,
            AtomKey::T(k) => t_series(k, n, ring)?,
            AtomKey::K => k_series(n, ring)?,
            AtomKey::Named(which, k) => dilated(k, n, |m| match which {
                NamedSeries::Dsome => dsome_gf_lambert(m, ring),
                NamedSeries::Some => some_gf(m, ring),
                NamedSeries::LambertD => Ok(lambert_inner_dsome(m, ring)),
                NamedSeries::LambertS => Ok(lambert_inner_some(m, ring)),
            })?,
            AtomKey::Poch(sign, a, m) => pochhammer_inf(&ProductSpec::new(sign, a, m, 1)?, n, ring),
        };
        self.cache.insert(key, s.clone());
        Ok(s)
    }

    fn go(&mut self, e: &Expr, n: usize) -> Result<Series> {
        let ring = self.ring;
        let atom = |k| Some(k);
        let key = match &e.kind {
            ExprKind::Eta(k) => atom(AtomKey::Eta(*k)),
            ExprKind::G(k) => atom(AtomKey::G(*k)),
            ExprKind::H(k) => atom(AtomKey::H(*k)),
            ExprKind::T(k) => atom(AtomKey::T(*k)),
            ExprKind::K => atom(AtomKey::K),
            ExprKind::Named(w, k) => atom(AtomKey::Named(*w, *k)),
            ExprKind::Poch { sign, offset, step } => atom(AtomKey::Poch(*sign, *offset, *step)),
            _ => None,
        };
        if let Some(key) = key {
            return self.atom(key, n).map_err(|err| at(e, err));
        }
        match &e.kind {
            ExprKind::Rational(r) => {
                let c = match ring {
                    Ring::ExactRational => Coeff::Exact(r.clone()),
                    Ring::Mod(m) => match reduce_rational(r, m) {
                        Some(value) => Coeff::Mod { value, modulus: m },
                        None => return Err(at(e, Error::NonUnitLeadingCoefficient { ring: ring.to_string() })),
                    },
                };
                Ok(Series::constant(&c, n))
            }
            ExprKind::Monomial(k) => Ok(Series::monomial(ring, 1, *k, n)),
            ExprKind::Neg(a) => Ok(self.go(a, n)?.neg()),
            ExprKind::Add(a, b) => self.go(a, n)?.add(&self.go(b, n)?),
            ExprKind::Sub(a, b) => self.go(a, n)?.sub(&self.go(b, n)?),
            ExprKind::Mul(a, b) => self.go(a, n)?.mul(&self.go(b, n)?),
            ExprKind::Div(a, b) => {
                let num = self.go(a, n)?;
                let den = self.go(b, n)?.invert().map_err(|err| at(b, err))?;
                num.mul(&den)
            }
            ExprKind::Pow(a, k) => self.go(a, n)?.pow(*k).map_err(|err| at(a, err)),
            ExprKind::SubstNegQ4(a) => {
                self.go(a, n.div_ceil(4))?.subst_neg_q4().and_then(|s| s.truncate(n)).map_err(|err| at(e, err))
            }
            ExprKind::Dissect(a, m, r) => {
                let inner = m
                    .checked_mul(n - 1)
                    .and_then(|v| v.checked_add(r + 1))
                    .filter(|&v| v <= PRECISION_CAP)
                    .ok_or_else(|| {
                        at(e, Error::ResourceLimit(format!("dissection needs more than {PRECISION_CAP} terms")))
                    })?;
                self.go(a, inner)?.dissect(*m, *r).map_err(|err| at(e, err))
            }
            _ => unreachable!("atoms handled above"),
        }
    }
}

/// One-shot evaluation of `e` to `n` terms.
pub fn eval(e: &Expr, n: usize, ring: Ring) -> Result<Series> {
    Evaluator::new(ring).eval(e, n)
}
