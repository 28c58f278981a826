//! Infinite q-products, eta quotients and the Lambert series behind SOME and DSOME.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::Series;

/// Sign of a Pochhammer factor: `Minus` gives `(1 - q^e)`, `Plus` gives `(1 + q^e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PochSign {
    Minus,
    Plus,
}

impl PochSign {
    fn as_i64(self) -> i64 {
        match self {
            PochSign::Minus => 1,
            PochSign::Plus => -1,
        }
    }
}

/// `(q^offset; q^step)_inf ^ exponent`, or with `Plus`, `(-q^offset; q^step)_inf ^ exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProductSpec {
    pub sign: PochSign,
    pub offset: usize,
    pub step: usize,
    pub exponent: i64,
}

impl ProductSpec {
    pub fn new(sign: PochSign, offset: usize, step: usize, exponent: i64) -> Result<ProductSpec> {
        if offset == 0 || step == 0 || exponent == 0 {
            return Err(Error::InvalidArgument(format!(
                "product needs offset >= 1, step >= 1, exponent != 0 (got {offset}, {step}, {exponent})"
            )));
        }
        Ok(ProductSpec { sign, offset, step, exponent })
    }
}

/// `prod f_k^{e_k}` with distinct dilations and nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtaQuotientSpec {
    factors: Vec<(usize, i64)>,
}

impl EtaQuotientSpec {
    pub fn new(factors: Vec<(usize, i64)>) -> Result<EtaQuotientSpec> {
        for (i, &(k, e)) in factors.iter().enumerate() {
            if k == 0 || e == 0 {
                return Err(Error::InvalidArgument(format!("eta factor f{k}^{e} is not allowed")));
            }
            if factors[..i].iter().any(|&(k2, _)| k2 == k) {
                return Err(Error::InvalidArgument(format!("dilation {k} repeated in eta quotient")));
            }
        }
        Ok(EtaQuotientSpec { factors })
    }

    pub fn factors(&self) -> &[(usize, i64)] {
        &self.factors
    }
}

/// `f_k = (q^k; q^k)_inf` from the pentagonal-number expansion of `(q;q)_inf`.
pub fn euler_f(k: usize, n: usize, ring: Ring) -> Result<Series> {
    if k == 0 {
        return Err(Error::InvalidArgument("f_k needs k >= 1".into()));
    }
    let base_len = n.div_ceil(k);
    let mut c = vec![0i64; base_len];
    c[0] = 1;
    for j in 1.. {
        let g1 = j * (3 * j - 1) / 2;
        if g1 >= base_len {
            break;
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        c[g1] += sign;
        let g2 = j * (3 * j + 1) / 2;
        if g2 < base_len {
            c[g2] += sign;
        }
    }
    Series::from_i64(ring, &c).dilate(k)?.truncate(n)
}

/// Truncated `prod_{j>=0} (1 - s q^{a + j m})^e` over the factors below `q^n`.
pub fn pochhammer_inf(spec: &ProductSpec, n: usize, ring: Ring) -> Series {
    let s = spec.sign.as_i64();
    let mut acc = Series::one(ring, n);
    let mut e = spec.offset;
    while e < n {
        for _ in 0..spec.exponent.unsigned_abs() {
            acc = if spec.exponent > 0 { acc.mul_one_minus(s, e) } else { acc.div_one_minus(s, e) };
        }
        e += spec.step;
    }
    acc
}

pub fn eta_quotient(spec: &EtaQuotientSpec, n: usize, ring: Ring) -> Result<Series> {
    let mut num = Series::one(ring, n);
    let mut den = Series::one(ring, n);
    for &(k, e) in spec.factors() {
        let f = euler_f(k, n, ring)?.pow(e.abs())?;
        if e > 0 {
            num = num.mul(&f)?;
        } else {
            den = den.mul(&f)?;
        }
    }
    if spec.factors().iter().all(|&(_, e)| e > 0) {
        return Ok(num);
    }
    num.mul(&den.invert()?)
}

/// Divisor sieve for `sum_{m>=1} c(m) q^m / (1 + q^m)^2`, using
/// `q^m/(1+q^m)^2 = sum_{j>=1} (-1)^{j-1} j q^{mj}`.
fn lambert_sieve(n: usize, alternate_m: bool) -> Vec<i64> {
    let mut c = vec![0i64; n];
    for m in 1..n {
        let sm = if alternate_m && m % 2 == 0 { -1 } else { 1 };
        let mut j = 1;
        while m * j < n {
            let sj = if j % 2 == 0 { -1 } else { 1 };
            c[m * j] += sm * sj * j as i64;
            j += 1;
        }
    }
    c
}

/// `sum_{m>=1} q^m / (1+q^m)^2`.
pub fn lambert_inner_some(n: usize, ring: Ring) -> Series {
    Series::from_i64(ring, &lambert_sieve(n, false))
}

/// `sum_{m>=1} (-1)^{m-1} q^m / (1+q^m)^2`.
pub fn lambert_inner_dsome(n: usize, ring: Ring) -> Series {
    Series::from_i64(ring, &lambert_sieve(n, true))
}

/// `(-q; q)_inf = f_2 / f_1`.
pub fn distinct_parts_gf(n: usize, ring: Ring) -> Result<Series> {
    euler_f(2, n, ring)?.mul(&euler_f(1, n, ring)?.invert()?)
}

/// Generating function of SOME(n): `(1/f_1) * sum q^m/(1+q^m)^2`.
pub fn some_gf(n: usize, ring: Ring) -> Result<Series> {
    euler_f(1, n, ring)?.invert()?.mul(&lambert_inner_some(n, ring))
}

/// Generating function of DSOME(n) from its Lambert-series form.
pub fn dsome_gf_lambert(n: usize, ring: Ring) -> Result<Series> {
    distinct_parts_gf(n, ring)?.mul(&lambert_inner_dsome(n, ring))
}

/// Generating function of DSOME(n) from the eta-quotient closed form
/// `(f_2/f_1 - f_1^7/f_2^3) / 8`, always exact.
pub fn dsome_gf_closed(n: usize) -> Result<Series> {
    let q = Ring::ExactRational;
    let f1 = euler_f(1, n, q)?;
    let f2 = euler_f(2, n, q)?;
    let first = f2.mul(&f1.invert()?)?;
    let second = f1.pow(7)?.mul(&f2.pow(-3)?)?;
    first.sub(&second)?.div_exact_int(&BigInt::from(8))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Ring = Ring::ExactRational;

    fn ints(s: &Series) -> Vec<i64> {
        s.to_i64_vec().unwrap()
    }

    fn direct_product(n: usize) -> Vec<i64> {
        let mut a = vec![0i64; n];
        a[0] = 1;
        for k in 1..n {
            for i in (k..n).rev() {
                a[i] -= a[i - k];
            }
        }
        a
    }

    /// Brute-force DSOME over strictly decreasing part lists.
    fn dsome_enum(n: usize) -> i64 {
        fn go(rem: usize, max: usize, acc: i64, total: &mut i64) {
            if rem == 0 {
                *total += acc;
                return;
            }
            for p in (1..=max.min(rem)).rev() {
                let w = if p % 2 == 1 { p as i64 } else { -(p as i64) };
                go(rem - p, p - 1, acc + w, total);
            }
        }
        let mut t = 0;
        go(n, n, 0, &mut t);
        t
    }

    #[test]
    fn euler_f_sparse_signs() {
        let f = ints(&euler_f(1, 16, Q).unwrap());
        let mut expect = vec![0i64; 16];
        for (i, v) in [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)] {
            expect[i] = v;
        }
        assert_eq!(f, expect);
        assert_eq!(f, direct_product(16));
    }

    #[test]
    fn euler_f_agrees_with_direct_product() {
        for n in [1usize, 2, 3, 50, 2000] {
            assert_eq!(ints(&euler_f(1, n, Q).unwrap()), direct_product(n), "n={n}");
        }
    }

    #[test]
    fn euler_f_dilation() {
        let n = 101;
        let f2 = euler_f(2, n, Q).unwrap();
        let d = euler_f(1, 51, Q).unwrap().dilate(2).unwrap().truncate(n).unwrap();
        assert_eq!(f2, d);
        assert!(euler_f(0, 5, Q).is_err());
    }

    #[test]
    fn f5_squared_is_f10_mod_2() {
        let m = Ring::Mod(2);
        assert_eq!(euler_f(5, 500, m).unwrap().pow(2).unwrap(), euler_f(10, 500, m).unwrap());
    }

    #[test]
    fn distinct_part_counts() {
        let spec = ProductSpec::new(PochSign::Plus, 1, 1, 1).unwrap();
        let p = pochhammer_inf(&spec, 10, Q);
        assert_eq!(ints(&p), vec![1, 1, 1, 2, 2, 3, 4, 5, 6, 8]);
        let p300 = pochhammer_inf(&spec, 300, Q);
        assert_eq!(p300, distinct_parts_gf(300, Q).unwrap());
        let eta = EtaQuotientSpec::new(vec![(2, 1), (1, -1)]).unwrap();
        assert_eq!(ints(&eta_quotient(&eta, 4, Q).unwrap()), vec![1, 1, 1, 2]);
    }

    #[test]
    fn negative_exponent_pochhammer() {
        // 1/(q;q^5)(q^4;q^5): partitions into parts = +-1 mod 5
        let a = ProductSpec::new(PochSign::Minus, 1, 5, -1).unwrap();
        let b = ProductSpec::new(PochSign::Minus, 4, 5, -1).unwrap();
        let g = pochhammer_inf(&a, 7, Q).mul(&pochhammer_inf(&b, 7, Q)).unwrap();
        assert_eq!(ints(&g), vec![1, 1, 1, 1, 2, 2, 3]);
        assert!(ProductSpec::new(PochSign::Minus, 0, 5, 1).is_err());
        assert!(ProductSpec::new(PochSign::Minus, 1, 5, 0).is_err());
    }

    #[test]
    fn eta_spec_validation() {
        assert!(EtaQuotientSpec::new(vec![(1, 1), (1, 2)]).is_err());
        assert!(EtaQuotientSpec::new(vec![(1, 0)]).is_err());
        let k = EtaQuotientSpec::new(vec![(2, 1), (5, 5), (1, -1), (10, -5)]).unwrap();
        assert_eq!(eta_quotient(&k, 5, Q).unwrap().coeff(0), crate::Coeff::integer(1));
        let f1 = EtaQuotientSpec::new(vec![(1, 1)]).unwrap();
        assert_eq!(eta_quotient(&f1, 30, Q).unwrap(), euler_f(1, 30, Q).unwrap());
    }

    #[test]
    fn lambert_small_coefficients() {
        let d = ints(&lambert_inner_dsome(3, Q));
        assert_eq!(d[1], 1);
        assert_eq!(d[2], -3);
        let s = ints(&lambert_inner_some(3, Q));
        assert_eq!(s[2], -1);
    }

    #[test]
    fn lambert_sieve_matches_direct_divisor_sum() {
        let n = 300;
        let d = ints(&lambert_inner_dsome(n, Q));
        let s = ints(&lambert_inner_some(n, Q));
        for k in 1..n {
            let mut ds = 0i64;
            let mut ss = 0i64;
            for j in 1..=k {
                if k % j == 0 {
                    let m = k / j;
                    let sj = if j % 2 == 1 { j as i64 } else { -(j as i64) };
                    ss += sj;
                    ds += if m % 2 == 1 { sj } else { -sj };
                }
            }
            assert_eq!((d[k], s[k]), (ds, ss), "k={k}");
        }
    }

    #[test]
    fn dsome_and_some_first_values() {
        let expect = [0, 1, -2, 2, 0, 3, -4, -1];
        assert_eq!(ints(&dsome_gf_lambert(8, Q).unwrap()), expect);
        assert_eq!(ints(&dsome_gf_closed(8).unwrap()), expect);
        assert_eq!(ints(&some_gf(6, Q).unwrap())[1..], [1, 0, 5, 0, 11]);
    }

    #[test]
    fn pipelines_agree_with_enumeration() {
        let n = 30;
        let lam = ints(&dsome_gf_lambert(n, Q).unwrap());
        for (k, v) in lam.iter().enumerate() {
            assert_eq!(*v, dsome_enum(k), "n={k}");
        }
    }

    #[test]
    fn quartic_ratio_is_one_minus_eight_lambert() {
        let n = 1000;
        let lhs = euler_f(1, n, Q).unwrap().pow(8).unwrap().mul(&euler_f(2, n, Q).unwrap().pow(-4).unwrap()).unwrap();
        let rhs = Series::one(Q, n).sub(&lambert_inner_dsome(n, Q).scale_i64(8)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn some_vanishes_mod_5_on_progressions() {
        let s = some_gf(1000, Ring::Mod(5)).unwrap();
        for n in 0..199 {
            assert!(s.is_zero_at(5 * n + 2));
            assert!(s.is_zero_at(5 * n + 4));
        }
    }

    #[test]
    fn modular_pipeline_matches_exact() {
        let n = 400;
        let exact = dsome_gf_lambert(n, Q).unwrap();
        for m in [2u64, 4, 5, 8, 16, 25] {
            assert_eq!(dsome_gf_lambert(n, Ring::Mod(m)).unwrap(), exact.reduce_mod(m).unwrap());
        }
    }
}
