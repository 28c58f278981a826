//! Coefficient rings: exact rationals and integers modulo `M`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`Ring::Mod`].
pub const MAX_MODULUS: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    ExactRational,
    Mod(u64),
}

impl Ring {
    /// Checked constructor for the residue ring `Z/MZ`.
    pub fn modular(m: u64) -> Result<Ring> {
        if (2..=MAX_MODULUS).contains(&m) {
            Ok(Ring::Mod(m))
        } else {
            Err(Error::InvalidModulus(m))
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Ring::ExactRational => None,
            Ring::Mod(m) => Some(*m),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Ring::ExactRational)
    }

    pub(crate) fn check_same(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: self.to_string(), right: other.to_string() })
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::ExactRational => write!(f, "Q"),
            Ring::Mod(m) => write!(f, "Z/{m}"),
        }
    }
}

/// A single ring element, as handed out by [`crate::Series::coeff`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coeff {
    Exact(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl Coeff {
    pub fn integer(v: i64) -> Coeff {
        Coeff::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ring(&self) -> Ring {
        match self {
            Coeff::Exact(_) => Ring::ExactRational,
            Coeff::Mod { modulus, .. } => Ring::Mod(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(r) => r.is_zero(),
            Coeff::Mod { value, .. } => *value == 0,
        }
    }

    /// The value as an `i64` when it is an integer that fits (exact ring),
    /// or the canonical residue (modular ring).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Coeff::Exact(r) if r.is_integer() => r.to_integer().to_i64(),
            Coeff::Exact(_) => None,
            Coeff::Mod { value, .. } => i64::try_from(*value).ok(),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(r) => write!(f, "{r}"),
            Coeff::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Extended Euclid on signed integers: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let quot = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
        (old_t, t) = (t, old_t - quot * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

#[inline]
pub(crate) fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn mod_add(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub(crate) fn mod_sub(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        ((a as u128 + m as u128) - b as u128) as u64
    }
}

/// Reduce a signed machine integer into `[0, m)`.
#[inline]
pub(crate) fn reduce_i64(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

/// Reduce an arbitrary integer into `[0, m)`.
pub(crate) fn reduce_bigint(v: &BigInt, m: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue below modulus")
}

/// Map a rational into `Z/m`; fails when the denominator is not invertible.
pub(crate) fn reduce_rational(v: &BigRational, m: u64) -> Option<u64> {
    let num = reduce_bigint(v.numer(), m);
    let den = reduce_bigint(v.denom(), m);
    let inv = mod_inverse(den, m)?;
    Some(mod_mul(num, inv, m))
}

/// The part of `d` built from primes that divide `m`.
pub(crate) fn m_part(d: &BigInt, m: u64) -> BigInt {
    let mut rest = d.abs();
    let mut part = BigInt::one();
    let mm = BigInt::from(m);
    loop {
        let g = rest.gcd(&mm);
        if g.is_one() {
            break;
        }
        part *= &g;
        rest /= &g;
    }
    part
}
