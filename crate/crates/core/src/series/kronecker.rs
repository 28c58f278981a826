//! Exact integer convolution by Kronecker substitution.
//!
//! Each coefficient sequence is packed into one big integer with slots of `w` bits,
//! the two integers are multiplied with `num-bigint` (Karatsuba/Toom-3), and the
//! product is unpacked with balanced digits so negative coefficients survive.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};

const WORD: usize = 32;

fn pack(v: &[BigInt], words: usize) -> BigInt {
    let mut pos = vec![0u32; v.len() * words];
    let mut neg = vec![0u32; v.len() * words];
    for (i, c) in v.iter().enumerate() {
        let (sign, digits) = c.to_u32_digits();
        let dst = match sign {
            Sign::Minus => &mut neg,
            _ => &mut pos,
        };
        dst[i * words..i * words + digits.len()].copy_from_slice(&digits);
    }
    BigInt::from_biguint(Sign::Plus, BigUint::new(pos)) - BigInt::from_biguint(Sign::Plus, BigUint::new(neg))
}

fn unpack(z: &BigInt, words: usize, out_len: usize) -> Vec<BigInt> {
    let (sign, digits) = z.to_u32_digits();
    let half = BigUint::from(1u8) << (words * WORD - 1);
    let full = BigUint::from(1u8) << (words * WORD);
    let mut out = Vec::with_capacity(out_len);
    let mut carry = false;
    for i in 0..out_len {
        let lo = (i * words).min(digits.len());
        let hi = ((i + 1) * words).min(digits.len());
        let mut chunk = BigUint::from_slice(&digits[lo..hi]);
        if carry {
            chunk += 1u8;
        }
        let c = if chunk >= half {
            carry = true;
            BigInt::from_biguint(Sign::Plus, chunk) - BigInt::from_biguint(Sign::Plus, full.clone())
        } else {
            carry = false;
            BigInt::from_biguint(Sign::Plus, chunk)
        };
        out.push(if sign == Sign::Minus { -c } else { c });
    }
    out
}

/// Truncated product of two integer coefficient vectors.
pub(crate) fn convolve(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero(); out_len];
    }
    let bits = |v: &[BigInt]| v.iter().map(|c| c.abs().bits()).max().unwrap_or(0) as usize;
    let terms = a.len().min(b.len());
    let log_terms = usize::BITS as usize - terms.leading_zeros() as usize;
    let need = bits(a) + bits(b) + log_terms + 2;
    let words = need.div_ceil(WORD).max(1);
    let z = pack(a, words) * pack(b, words);
    let mut out = unpack(&z, words, out_len.min(a.len() + b.len() - 1));
    out.resize(out_len, BigInt::zero());
    out
}
