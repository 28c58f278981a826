//! Dense truncated power series over [`Ring`].
//!
//! A [`Series`] is known modulo `q^N` where `N` is its precision. Binary operations
//! return the smaller of the two precisions; only [`Series::dilate`] ever raises it,
//! and never beyond [`PRECISION_CAP`].

mod kronecker;
mod ntt;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{self, Coeff, Ring};

/// Global upper bound on series precision.
pub const PRECISION_CAP: usize = 1_000_000;

const SCHOOLBOOK_EXACT: usize = 48;
const SCHOOLBOOK_MOD: usize = 96;
const DENSE_INVERT_EXACT: usize = 384;
const DENSE_INVERT_MOD: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// `num[i] / den`, with `den > 0` and `gcd(den, num[..]) = 1`.
    Exact { num: Vec<BigInt>, den: BigInt },
    /// Residues in `[0, m)`.
    Mod { m: u64, c: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    repr: Repr,
}

/// Position of the first nonzero coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroPrefix {
    Order(usize),
    AllZero,
}

/// Outcome of [`Series::equal_to_precision`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    FirstDifference { index: usize, left: Coeff, right: Coeff },
}

fn sparse_enough(nnz: usize, n: usize) -> bool {
    nnz <= 4 * (n as f64).sqrt() as usize + 32
}

impl Series {
    // ---- construction -------------------------------------------------------------

    pub fn zero(ring: Ring, precision: usize) -> Series {
        assert!(precision >= 1, "series precision must be at least 1");
        let repr = match ring {
            Ring::ExactRational => Repr::Exact { num: vec![BigInt::zero(); precision], den: BigInt::one() },
            Ring::Mod(m) => Repr::Mod { m, c: vec![0; precision] },
        };
        Series { repr }
    }

    pub fn one(ring: Ring, precision: usize) -> Series {
        Series::monomial(ring, 1, 0, precision)
    }

    /// `c * q^k` truncated to `precision`.
    pub fn monomial(ring: Ring, c: i64, k: usize, precision: usize) -> Series {
        let mut s = Series::zero(ring, precision);
        if k < precision {
            match &mut s.repr {
                Repr::Exact { num, .. } => num[k] = BigInt::from(c),
                Repr::Mod { m, c: v } => v[k] = ring::reduce_i64(c, *m),
            }
        }
        s
    }

    /// Series with the given integer coefficients; precision is `coeffs.len()`.
    pub fn from_i64(ring: Ring, coeffs: &[i64]) -> Series {
        assert!(!coeffs.is_empty(), "series precision must be at least 1");
        let repr = match ring {
            Ring::ExactRational => {
                Repr::Exact { num: coeffs.iter().map(|&v| BigInt::from(v)).collect(), den: BigInt::one() }
            }
            Ring::Mod(m) => Repr::Mod { m, c: coeffs.iter().map(|&v| ring::reduce_i64(v, m)).collect() },
        };
        Series { repr }
    }

    /// Series with the given integer coefficients, zero-padded up to `precision`.
    pub fn from_i64_padded(ring: Ring, coeffs: &[i64], precision: usize) -> Series {
        let mut v: Vec<i64> = coeffs.iter().copied().take(precision).collect();
        v.resize(precision, 0);
        Series::from_i64(ring, &v)
    }

    pub fn from_bigints(coeffs: Vec<BigInt>) -> Series {
        assert!(!coeffs.is_empty(), "series precision must be at least 1");
        Series { repr: Repr::Exact { num: coeffs, den: BigInt::one() } }
    }

    /// Integer coefficients reduced into `ring` (exact or modular).
    pub fn from_bigints_in(ring: Ring, coeffs: Vec<BigInt>) -> Series {
        match ring {
            Ring::ExactRational => Series::from_bigints(coeffs),
            Ring::Mod(m) => Series::from_residues(m, coeffs.iter().map(|v| ring::reduce_bigint(v, m)).collect()),
        }
    }

    pub fn from_rationals(coeffs: &[BigRational]) -> Series {
        assert!(!coeffs.is_empty(), "series precision must be at least 1");
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Series::exact_normalized(num, den)
    }

    /// Residues are reduced modulo `m`.
    pub fn from_residues(m: u64, coeffs: Vec<u64>) -> Series {
        assert!(!coeffs.is_empty(), "series precision must be at least 1");
        let c = coeffs.into_iter().map(|v| v % m).collect();
        Series { repr: Repr::Mod { m, c } }
    }

    /// A ring element as a constant series.
    pub fn constant(c: &Coeff, precision: usize) -> Series {
        let mut s = Series::zero(c.ring(), precision);
        match (&mut s.repr, c) {
            (Repr::Exact { num, den }, Coeff::Exact(r)) => {
                num[0] = r.numer().clone();
                *den = r.denom().clone();
            }
            (Repr::Mod { c: v, .. }, Coeff::Mod { value, .. }) => v[0] = *value,
            _ => unreachable!("constant ring matches"),
        }
        s
    }

    fn exact_normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Series {
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for x in &num {
                if g.is_one() {
                    break;
                }
                if !x.is_zero() {
                    g = g.gcd(x);
                }
            }
            if num.iter().all(Zero::is_zero) {
                g = den.clone();
            }
            if !g.is_one() {
                for x in num.iter_mut() {
                    if !x.is_zero() {
                        *x /= &g;
                    }
                }
                den /= &g;
            }
        }
        Series { repr: Repr::Exact { num, den } }
    }

    // ---- inspection ---------------------------------------------------------------

    pub fn precision(&self) -> usize {
        match &self.repr {
            Repr::Exact { num, .. } => num.len(),
            Repr::Mod { c, .. } => c.len(),
        }
    }

    pub fn ring(&self) -> Ring {
        match &self.repr {
            Repr::Exact { .. } => Ring::ExactRational,
            Repr::Mod { m, .. } => Ring::Mod(*m),
        }
    }

    /// Coefficient of `q^i`. Panics when `i` is outside the precision.
    pub fn coeff(&self, i: usize) -> Coeff {
        match &self.repr {
            Repr::Exact { num, den } => Coeff::Exact(BigRational::new(num[i].clone(), den.clone())),
            Repr::Mod { m, c } => Coeff::Mod { value: c[i], modulus: *m },
        }
    }

    pub fn coeffs(&self) -> Vec<Coeff> {
        (0..self.precision()).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero_at(&self, i: usize) -> bool {
        match &self.repr {
            Repr::Exact { num, .. } => num[i].is_zero(),
            Repr::Mod { c, .. } => c[i] == 0,
        }
    }

    pub fn zero_prefix(&self) -> ZeroPrefix {
        (0..self.precision()).find(|&i| !self.is_zero_at(i)).map_or(ZeroPrefix::AllZero, ZeroPrefix::Order)
    }

    /// Shared denominator and numerators (exact ring only).
    pub fn exact_parts(&self) -> Option<(&[BigInt], &BigInt)> {
        match &self.repr {
            Repr::Exact { num, den } => Some((num, den)),
            Repr::Mod { .. } => None,
        }
    }

    /// Residues (modular ring only).
    pub fn residues(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Mod { c, .. } => Some(c),
            Repr::Exact { .. } => None,
        }
    }

    /// All coefficients as machine integers when they are integral and fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        match &self.repr {
            Repr::Exact { num, den } if den.is_one() => num.iter().map(ToPrimitive::to_i64).collect(),
            Repr::Exact { .. } => None,
            Repr::Mod { c, .. } => c.iter().map(|&v| i64::try_from(v).ok()).collect(),
        }
    }

    fn nnz(&self, upto: usize) -> usize {
        (0..upto.min(self.precision())).filter(|&i| !self.is_zero_at(i)).count()
    }

    /// First `n` coefficients; fails if `n` exceeds the precision.
    pub fn truncate(&self, n: usize) -> Result<Series> {
        if n > self.precision() {
            return Err(Error::InsufficientPrecision { needed: n, available: self.precision() });
        }
        if n == 0 {
            return Err(Error::InvalidArgument("series precision must be at least 1".into()));
        }
        Ok(match &self.repr {
            Repr::Exact { num, den } => Series::exact_normalized(num[..n].to_vec(), den.clone()),
            Repr::Mod { m, c } => Series { repr: Repr::Mod { m: *m, c: c[..n].to_vec() } },
        })
    }

    /// Internal: zero-pad to a larger length. Callers must only use this where the
    /// extra coefficients are about to be discarded or are known to be zero.
    fn padded(&self, n: usize) -> Series {
        let mut s = self.clone();
        match &mut s.repr {
            Repr::Exact { num, .. } => num.resize(n, BigInt::zero()),
            Repr::Mod { c, .. } => c.resize(n, 0),
        }
        s
    }

    // ---- additive structure -------------------------------------------------------

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Series) -> Result<Series> {
        self.combine(other, false)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Series, subtract: bool) -> Result<Series> {
        self.ring().check_same(&other.ring())?;
        let n = self.precision().min(other.precision());
        Ok(match (&self.repr, &other.repr) {
            (Repr::Exact { num: a, den: da }, Repr::Exact { num: b, den: db }) => {
                if da == db {
                    let num = (0..n).map(|i| if subtract { &a[i] - &b[i] } else { &a[i] + &b[i] }).collect();
                    Series::exact_normalized(num, da.clone())
                } else {
                    let l = da.lcm(db);
                    let (fa, fb) = (&l / da, &l / db);
                    let num = (0..n)
                        .map(|i| {
                            let x = &a[i] * &fa;
                            let y = &b[i] * &fb;
                            if subtract {
                                x - y
                            } else {
                                x + y
                            }
                        })
                        .collect();
                    Series::exact_normalized(num, l)
                }
            }
            (Repr::Mod { m, c: a }, Repr::Mod { c: b, .. }) => {
                let m = *m;
                let c = (0..n)
                    .map(|i| if subtract { ring::mod_sub(a[i], b[i], m) } else { ring::mod_add(a[i], b[i], m) })
                    .collect();
                Series { repr: Repr::Mod { m, c } }
            }
            _ => unreachable!("rings checked"),
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Series {
        match &self.repr {
            Repr::Exact { num, den } => {
                Series { repr: Repr::Exact { num: num.iter().map(|x| -x).collect(), den: den.clone() } }
            }
            Repr::Mod { m, c } => {
                Series { repr: Repr::Mod { m: *m, c: c.iter().map(|&v| ring::mod_sub(0, v, *m)).collect() } }
            }
        }
    }

    /// Multiply every coefficient by a ring element.
    pub fn scale(&self, c: &Coeff) -> Result<Series> {
        self.ring().check_same(&c.ring())?;
        Ok(match (&self.repr, c) {
            (Repr::Exact { num, den }, Coeff::Exact(r)) => {
                let num = num.iter().map(|x| x * r.numer()).collect();
                Series::exact_normalized(num, den * r.denom())
            }
            (Repr::Mod { m, c: v }, Coeff::Mod { value, .. }) => {
                Series { repr: Repr::Mod { m: *m, c: v.iter().map(|&x| ring::mod_mul(x, *value, *m)).collect() } }
            }
            _ => unreachable!("rings checked"),
        })
    }

    pub fn scale_i64(&self, k: i64) -> Series {
        let c = match self.ring() {
            Ring::ExactRational => Coeff::integer(k),
            Ring::Mod(m) => Coeff::Mod { value: ring::reduce_i64(k, m), modulus: m },
        };
        self.scale(&c).expect("same ring")
    }

    // ---- multiplication -----------------------------------------------------------

    /// Truncated Cauchy product.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.ring().check_same(&other.ring())?;
        let n = self.precision().min(other.precision());
        let (sa, sb) = (self.nnz(n), other.nnz(n));
        let (small, large, s_small) = if sa <= sb { (self, other, sa) } else { (other, self, sb) };
        Ok(match (&small.repr, &large.repr) {
            (Repr::Exact { num: a, den: da }, Repr::Exact { num: b, den: db }) => {
                let num = if sparse_enough(s_small, n) || n <= SCHOOLBOOK_EXACT {
                    exact_schoolbook(&a[..n], &b[..n], n)
                } else {
                    kronecker::convolve(&a[..n], &b[..n], n)
                };
                Series::exact_normalized(num, da * db)
            }
            (Repr::Mod { m, c: a }, Repr::Mod { c: b, .. }) => {
                let m = *m;
                let c = if sparse_enough(s_small, n) || n <= SCHOOLBOOK_MOD {
                    mod_schoolbook(&a[..n], &b[..n], n, m)
                } else {
                    ntt::convolve_mod(&a[..n], &b[..n], n, m)
                };
                Series { repr: Repr::Mod { m, c } }
            }
            _ => unreachable!("rings checked"),
        })
    }

    /// Multiplicative inverse to the same precision.
    pub fn invert(&self) -> Result<Series> {
        let n = self.precision();
        match &self.repr {
            Repr::Exact { num, den } => {
                if num[0].is_zero() {
                    return Err(Error::NonUnitLeadingCoefficient { ring: self.ring().to_string() });
                }
                if num[0].abs().is_one() {
                    let b = if sparse_enough(self.nnz(n), n) || n <= DENSE_INVERT_EXACT {
                        exact_unit_inverse(num)
                    } else {
                        return self.newton_inverse();
                    };
                    let num = if den.is_one() { b } else { b.into_iter().map(|x| x * den).collect() };
                    Ok(Series::exact_normalized(num, BigInt::one()))
                } else {
                    Ok(Series::from_rationals(&rational_inverse(&self.coeffs_rational())))
                }
            }
            Repr::Mod { m, c } => {
                let inv0 = ring::mod_inverse(c[0], *m)
                    .ok_or_else(|| Error::NonUnitLeadingCoefficient { ring: self.ring().to_string() })?;
                if sparse_enough(self.nnz(n), n) || n <= DENSE_INVERT_MOD {
                    Ok(Series { repr: Repr::Mod { m: *m, c: mod_inverse_recurrence(c, inv0, *m) } })
                } else {
                    self.newton_inverse()
                }
            }
        }
    }

    fn coeffs_rational(&self) -> Vec<BigRational> {
        match &self.repr {
            Repr::Exact { num, den } => num.iter().map(|x| BigRational::new(x.clone(), den.clone())).collect(),
            Repr::Mod { .. } => unreachable!("exact only"),
        }
    }

    /// Newton iteration `g <- g (2 - a g)`, doubling the known prefix each round.
    fn newton_inverse(&self) -> Result<Series> {
        let n = self.precision();
        let mut g = self.truncate(1)?.invert()?;
        let mut k = 1;
        while k < n {
            let next = (2 * k).min(n);
            let a = self.truncate(next)?;
            let g_ext = g.padded(next);
            let e = a.mul(&g_ext)?;
            let two_minus = Series::monomial(self.ring(), 2, 0, next).sub(&e)?;
            g = g_ext.mul(&two_minus)?;
            k = next;
        }
        Ok(g)
    }

    /// `self^e`; negative exponents require an invertible leading coefficient.
    pub fn pow(&self, e: i64) -> Result<Series> {
        let n = self.precision();
        if e == 0 {
            return Ok(Series::one(self.ring(), n));
        }
        let mut base = if e < 0 { self.invert()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc: Option<Series> = None;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.expect("nonzero exponent"))
    }

    // ---- index maps ---------------------------------------------------------------

    /// Substitute `q -> q^m`. Precision grows to `m * N`, capped at [`PRECISION_CAP`].
    pub fn dilate(&self, m: usize) -> Result<Series> {
        if m == 0 {
            return Err(Error::InvalidArgument("dilation factor must be positive".into()));
        }
        let n = self.precision();
        let out = n.saturating_mul(m).min(PRECISION_CAP.max(n));
        Ok(match &self.repr {
            Repr::Exact { num, den } => {
                let mut v = vec![BigInt::zero(); out];
                for (i, x) in num.iter().enumerate() {
                    if i * m >= out {
                        break;
                    }
                    v[i * m] = x.clone();
                }
                Series { repr: Repr::Exact { num: v, den: den.clone() } }
            }
            Repr::Mod { m: md, c } => {
                let mut v = vec![0u64; out];
                for (i, &x) in c.iter().enumerate() {
                    if i * m >= out {
                        break;
                    }
                    v[i * m] = x;
                }
                Series { repr: Repr::Mod { m: *md, c: v } }
            }
        })
    }

    /// Multiply by `c q^k`, dropping coefficients pushed past the precision.
    pub fn mul_monomial(&self, c: &Coeff, k: usize) -> Result<Series> {
        let scaled = self.scale(c)?;
        Ok(scaled.shift(k))
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: usize) -> Series {
        let n = self.precision();
        match &self.repr {
            Repr::Exact { num, den } => {
                let mut v = vec![BigInt::zero(); n];
                if k < n {
                    v[k..].clone_from_slice(&num[..n - k]);
                }
                Series::exact_normalized(v, den.clone())
            }
            Repr::Mod { m, c } => {
                let mut v = vec![0u64; n];
                if k < n {
                    v[k..].copy_from_slice(&c[..n - k]);
                }
                Series { repr: Repr::Mod { m: *m, c: v } }
            }
        }
    }

    /// Coefficients at indices `m i + r`, i.e. `sum a(m i + r) q^i`.
    pub fn dissect(&self, m: usize, r: usize) -> Result<Series> {
        if m == 0 || r >= m {
            return Err(Error::InvalidArgument(format!("dissection needs 0 <= r < m, got m={m}, r={r}")));
        }
        let n = self.precision();
        if r >= n {
            return Err(Error::InsufficientPrecision { needed: r + 1, available: n });
        }
        let out = (n - r).div_ceil(m);
        Ok(match &self.repr {
            Repr::Exact { num, den } => {
                Series::exact_normalized((0..out).map(|i| num[m * i + r].clone()).collect(), den.clone())
            }
            Repr::Mod { m: md, c } => {
                Series { repr: Repr::Mod { m: *md, c: (0..out).map(|i| c[m * i + r]).collect() } }
            }
        })
    }

    /// Multiply by `(1 - s q^e)` with `s = +-1`, in place of a full product.
    pub fn mul_one_minus(&self, s: i64, e: usize) -> Series {
        debug_assert!(s == 1 || s == -1);
        let mut out = self.clone();
        let n = self.precision();
        match (&mut out.repr, &self.repr) {
            (Repr::Exact { num: dst, .. }, Repr::Exact { num: src, .. }) => {
                for i in e..n {
                    if s == 1 {
                        dst[i] -= &src[i - e];
                    } else {
                        dst[i] += &src[i - e];
                    }
                }
            }
            (Repr::Mod { m, c: dst }, Repr::Mod { c: src, .. }) => {
                for i in e..n {
                    dst[i] = if s == 1 {
                        ring::mod_sub(dst[i], src[i - e], *m)
                    } else {
                        ring::mod_add(dst[i], src[i - e], *m)
                    };
                }
            }
            _ => unreachable!("same series"),
        }
        out
    }

    /// Divide by `(1 - s q^e)` with `s = +-1` and `e >= 1`.
    pub fn div_one_minus(&self, s: i64, e: usize) -> Series {
        debug_assert!(s == 1 || s == -1);
        assert!(e >= 1, "factor must be non-constant");
        let mut out = self.clone();
        let n = self.precision();
        match &mut out.repr {
            Repr::Exact { num, .. } => {
                for i in e..n {
                    let (lo, hi) = num.split_at_mut(i);
                    if s == 1 {
                        hi[0] += &lo[i - e];
                    } else {
                        hi[0] -= &lo[i - e];
                    }
                }
            }
            Repr::Mod { m, c } => {
                for i in e..n {
                    c[i] = if s == 1 { ring::mod_add(c[i], c[i - e], *m) } else { ring::mod_sub(c[i], c[i - e], *m) };
                }
            }
        }
        out
    }

    /// Substitute `q -> -q^4`; the precision grows fourfold like [`Series::dilate`].
    pub fn subst_neg_q4(&self) -> Result<Series> {
        self.negate_alternate().dilate(4)
    }

    /// Substitute `q -> -q`.
    pub fn negate_alternate(&self) -> Series {
        let mut s = self.clone();
        match &mut s.repr {
            Repr::Exact { num, .. } => {
                for x in num.iter_mut().skip(1).step_by(2) {
                    *x = -std::mem::take(x);
                }
            }
            Repr::Mod { m, c } => {
                for x in c.iter_mut().skip(1).step_by(2) {
                    *x = ring::mod_sub(0, *x, *m);
                }
            }
        }
        s
    }

    // ---- integrality and congruences ----------------------------------------------

    /// Map an integral exact series (or a residue series modulo a multiple of `m`) into `Z/m`.
    pub fn reduce_mod(&self, m: u64) -> Result<Series> {
        let target = Ring::modular(m)?;
        match &self.repr {
            Repr::Exact { num, den } => {
                if !den.is_one() {
                    let index = num.iter().position(|x| !x.is_multiple_of(den)).unwrap_or(0);
                    return Err(Error::NonIntegralCoefficient { index });
                }
                Ok(Series::from_residues(m, num.iter().map(|x| ring::reduce_bigint(x, m)).collect()))
            }
            Repr::Mod { m: src, c } => {
                if src % m != 0 {
                    return Err(Error::RingMismatch { left: self.ring().to_string(), right: target.to_string() });
                }
                Ok(Series::from_residues(m, c.clone()))
            }
        }
    }

    /// Exact quotient by a nonzero integer; every quotient coefficient must be an integer.
    pub fn div_exact_int(&self, d: &BigInt) -> Result<Series> {
        if d.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        let (num, den) = self.exact_parts().ok_or_else(|| Error::RingMismatch {
            left: self.ring().to_string(),
            right: Ring::ExactRational.to_string(),
        })?;
        let full = den * d;
        let mut out = Vec::with_capacity(num.len());
        for (i, x) in num.iter().enumerate() {
            let (q, r) = x.div_rem(&full);
            if !r.is_zero() {
                return Err(Error::NotDivisible { index: i, divisor: d.to_string() });
            }
            out.push(q);
        }
        Ok(Series::from_bigints(out))
    }

    /// First index violating `self == 0 (mod m)` in the scaled sense: with `D` the
    /// common denominator and `g` the part of `D` built from primes dividing `m`,
    /// the integer series `D * self` must vanish modulo `g * m`.
    pub fn scaled_congruence_failure(&self, m: u64) -> Result<Option<usize>> {
        Ring::modular(m)?;
        match &self.repr {
            Repr::Exact { num, den } => {
                let modulus = ring::m_part(den, m) * BigInt::from(m);
                Ok(num.iter().position(|x| !x.is_multiple_of(&modulus)))
            }
            Repr::Mod { m: src, c } => {
                if src % m != 0 {
                    return Err(Error::RingMismatch { left: self.ring().to_string(), right: Ring::Mod(m).to_string() });
                }
                Ok(c.iter().position(|&v| v % m != 0))
            }
        }
    }

    pub fn scaled_congruence_zero(&self, m: u64) -> Result<bool> {
        Ok(self.scaled_congruence_failure(m)?.is_none())
    }

    /// Compare the first `n` coefficients.
    pub fn equal_to_precision(&self, other: &Series, n: usize) -> Result<Comparison> {
        self.ring().check_same(&other.ring())?;
        let available = self.precision().min(other.precision());
        if n > available {
            return Err(Error::InsufficientPrecision { needed: n, available });
        }
        let mismatch = match (&self.repr, &other.repr) {
            (Repr::Exact { num: a, den: da }, Repr::Exact { num: b, den: db }) => {
                if da == db {
                    (0..n).find(|&i| a[i] != b[i])
                } else {
                    (0..n).find(|&i| &a[i] * db != &b[i] * da)
                }
            }
            (Repr::Mod { c: a, .. }, Repr::Mod { c: b, .. }) => (0..n).find(|&i| a[i] != b[i]),
            _ => unreachable!("rings checked"),
        };
        Ok(match mismatch {
            None => Comparison::Equal,
            Some(index) => Comparison::FirstDifference { index, left: self.coeff(index), right: other.coeff(index) },
        })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.precision() {
            if self.is_zero_at(i) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", self.coeff(i))?,
                1 => write!(f, "({})*q", self.coeff(i))?,
                _ => write!(f, "({})*q^{i}", self.coeff(i))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision())
    }
}

fn exact_schoolbook(small: &[BigInt], large: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    let one = BigInt::one();
    let minus_one = -BigInt::one();
    for (i, x) in small.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let dst = &mut out[i..];
        let src = &large[..n - i];
        if *x == one {
            for (d, s) in dst.iter_mut().zip(src) {
                if !s.is_zero() {
                    *d += s;
                }
            }
        } else if *x == minus_one {
            for (d, s) in dst.iter_mut().zip(src) {
                if !s.is_zero() {
                    *d -= s;
                }
            }
        } else {
            for (d, s) in dst.iter_mut().zip(src) {
                if !s.is_zero() {
                    *d += x * s;
                }
            }
        }
    }
    out
}

fn mod_schoolbook(small: &[u64], large: &[u64], n: usize, m: u64) -> Vec<u64> {
    let mut acc = vec![0u128; n];
    for (i, &x) in small.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (d, &s) in acc[i..].iter_mut().zip(&large[..n - i]) {
            *d += x as u128 * s as u128;
        }
        // keep headroom: each product is below 2^64
        if i % 1024 == 1023 {
            for d in acc.iter_mut() {
                *d %= m as u128;
            }
        }
    }
    acc.into_iter().map(|v| (v % m as u128) as u64).collect()
}

/// Inverse of an integer series whose constant term is `+-1`.
fn exact_unit_inverse(a: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let lead_neg = a[0].is_negative();
    let terms: Vec<(usize, &BigInt)> = a.iter().enumerate().skip(1).filter(|(_, x)| !x.is_zero()).collect();
    let mut b: Vec<BigInt> = Vec::with_capacity(n);
    b.push(a[0].clone());
    for k in 1..n {
        let mut s = BigInt::zero();
        for &(j, x) in &terms {
            if j > k {
                break;
            }
            let prev = &b[k - j];
            if prev.is_zero() {
                continue;
            }
            if x.is_one() {
                s += prev;
            } else if (-x).is_one() {
                s -= prev;
            } else {
                s += x * prev;
            }
        }
        // b_k = -a_0^{-1} * s and a_0^{-1} = a_0
        b.push(if lead_neg { s } else { -s });
    }
    b
}

fn rational_inverse(a: &[BigRational]) -> Vec<BigRational> {
    let n = a.len();
    let inv0 = a[0].recip();
    let mut b = vec![inv0.clone()];
    for k in 1..n {
        let mut s = BigRational::zero();
        for j in 1..=k {
            if !a[j].is_zero() {
                s += &a[j] * &b[k - j];
            }
        }
        b.push(-(s * &inv0));
    }
    b
}

fn mod_inverse_recurrence(a: &[u64], inv0: u64, m: u64) -> Vec<u64> {
    let n = a.len();
    let terms: Vec<(usize, u64)> = a.iter().copied().enumerate().skip(1).filter(|&(_, x)| x != 0).collect();
    let mut b = vec![0u64; n];
    b[0] = inv0;
    for k in 1..n {
        let mut s: u128 = 0;
        for (cnt, &(j, x)) in terms.iter().enumerate() {
            if j > k {
                break;
            }
            s += x as u128 * b[k - j] as u128;
            if cnt % 1024 == 1023 {
                s %= m as u128;
            }
        }
        let s = (s % m as u128) as u64;
        b[k] = ring::mod_mul(ring::mod_sub(0, s, m), inv0, m);
    }
    b
}

#[cfg(test)]
mod tests;
