use super::*;
use proptest::prelude::*;

const Q: Ring = Ring::ExactRational;

fn ints(s: &Series) -> Vec<i64> {
    s.to_i64_vec().expect("integral")
}

/// (1-q)(1-q^2)...(1-q^{n-1}) by direct multiplication.
fn euler_direct(n: usize) -> Vec<i64> {
    let mut a = vec![0i64; n];
    a[0] = 1;
    for k in 1..n {
        for i in (k..n).rev() {
            a[i] -= a[i - k];
        }
    }
    a
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[test]
fn add_cancels_and_takes_min_precision() {
    let a = Series::from_i64(Q, &[1, 1]);
    let b = Series::from_i64(Q, &[1, -1, 7]);
    let s = a.add(&b).unwrap();
    assert_eq!(s.precision(), 2);
    assert_eq!(ints(&s), vec![2, 0]);
    let z = b.add(&b.neg()).unwrap();
    assert_eq!(z.zero_prefix(), ZeroPrefix::AllZero);
}

#[test]
fn ring_mismatch_is_reported() {
    let a = Series::from_i64(Q, &[1, 1]);
    let b = Series::from_i64(Ring::Mod(4), &[1, 1]);
    assert!(matches!(a.add(&b), Err(Error::RingMismatch { .. })));
    assert!(matches!(a.mul(&b), Err(Error::RingMismatch { .. })));
    assert!(matches!(a.equal_to_precision(&b, 1), Err(Error::RingMismatch { .. })));
    let c = Coeff::Mod { value: 1, modulus: 4 };
    assert!(matches!(a.mul_monomial(&c, 1), Err(Error::RingMismatch { .. })));
}

#[test]
fn mul_difference_of_squares_and_identity() {
    let a = Series::from_i64(Q, &[1, 1, 0, 0]);
    let b = Series::from_i64(Q, &[1, -1, 0, 0]);
    assert_eq!(ints(&a.mul(&b).unwrap()), vec![1, 0, -1, 0]);
    let s = Series::from_i64(Q, &[3, -1, 4, 1, -5]);
    assert_eq!(s.mul(&Series::one(Q, 5)).unwrap(), s);
}

#[test]
fn euler_times_inverse_is_one() {
    for n in [1usize, 2, 17, 600] {
        let f = Series::from_i64(Q, &euler_direct(n));
        let prod = f.mul(&f.invert().unwrap()).unwrap();
        assert_eq!(prod, Series::one(Q, n));
    }
}

#[test]
fn inverse_of_euler_gives_partition_numbers() {
    let f = Series::from_i64(Q, &euler_direct(9));
    assert_eq!(ints(&f.invert().unwrap()), vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
}

#[test]
fn geometric_series_and_mod4_self_inverse() {
    let g = Series::from_i64_padded(Q, &[1, -1], 6).invert().unwrap();
    assert_eq!(ints(&g), vec![1; 6]);
    let a = Series::from_i64_padded(Ring::Mod(4), &[1, 2], 5);
    assert_eq!(a.invert().unwrap(), a);
}

#[test]
fn invert_rejects_non_units() {
    let z = Series::zero(Q, 4);
    assert!(matches!(z.invert(), Err(Error::NonUnitLeadingCoefficient { .. })));
    let even = Series::from_i64(Ring::Mod(4), &[2, 1]);
    assert!(matches!(even.invert(), Err(Error::NonUnitLeadingCoefficient { .. })));
    assert!(even.pow(-1).is_err());
}

#[test]
fn invert_with_non_unit_integer_leading_term() {
    let a = Series::from_i64(Q, &[2, 1, 0, 3]);
    let b = a.invert().unwrap();
    assert_eq!(b.coeff(0), Coeff::Exact(rat(1, 2)));
    assert_eq!(a.mul(&b).unwrap(), Series::one(Q, 4));
}

#[test]
fn newton_inverse_matches_recurrence() {
    // dense enough to take the Newton path in both rings
    let n = 1500;
    let v: Vec<i64> = (0..n as i64).map(|i| if i == 0 { 1 } else { (i * 37) % 11 - 5 }).collect();
    for ring in [Q, Ring::Mod(1 << 20), Ring::Mod(999_999_937)] {
        let a = Series::from_i64(ring, &v);
        let inv = a.invert().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Series::one(ring, n), "{ring}");
    }
}

#[test]
fn pow_examples() {
    let a = Series::from_i64_padded(Q, &[1, 1], 4);
    assert_eq!(ints(&a.pow(2).unwrap()), vec![1, 2, 1, 0]);
    assert_eq!(a.pow(0).unwrap(), Series::one(Q, 4));
    // f2 = (q^2;q^2) and f2^{-3}
    let f2 = Series::from_i64(Q, &euler_direct(3)).dilate(2).unwrap().truncate(5).unwrap();
    assert_eq!(ints(&f2.pow(-3).unwrap()), vec![1, 0, 3, 0, 9]);
}

#[test]
fn euler_square_is_dilation_mod_2() {
    let n = 200;
    let f1 = Series::from_i64(Ring::Mod(2), &euler_direct(n));
    let f2 = Series::from_i64(Ring::Mod(2), &euler_direct(n)).dilate(2).unwrap().truncate(n).unwrap();
    assert_eq!(f1.pow(2).unwrap(), f2);
}

#[test]
fn dilate_examples() {
    let a = Series::from_i64(Q, &[1, 1]);
    let d = a.dilate(5).unwrap();
    assert_eq!(d.precision(), 10);
    assert_eq!(ints(&d), vec![1, 0, 0, 0, 0, 1, 0, 0, 0, 0]);
    assert_eq!(a.dilate(1).unwrap(), a);
    assert!(a.dilate(0).is_err());
    let big = Series::one(Q, 600_000);
    assert_eq!(big.dilate(3).unwrap().precision(), PRECISION_CAP);
}

#[test]
fn mul_monomial_examples() {
    let a = Series::from_i64(Q, &[1, 1, 0, 0]);
    assert_eq!(ints(&a.mul_monomial(&Coeff::integer(1), 2).unwrap()), vec![0, 0, 1, 1]);
    assert_eq!(a.mul_monomial(&Coeff::integer(0), 1).unwrap().zero_prefix(), ZeroPrefix::AllZero);
    assert_eq!(ints(&a.mul_monomial(&Coeff::integer(-3), 3).unwrap()), vec![0, 0, 0, -3]);
}

#[test]
fn dissect_examples() {
    let a = Series::from_i64(Q, &[1, 2, 3, 4]);
    assert_eq!(ints(&a.dissect(2, 1).unwrap()), vec![2, 4]);
    assert_eq!(ints(&a.dissect(3, 0).unwrap()), vec![1, 4]);
    assert_eq!(a.dissect(3, 2).unwrap().precision(), 1);
    assert!(matches!(a.dissect(8, 5), Err(Error::InsufficientPrecision { .. })));
    assert!(a.dissect(2, 2).is_err());
}

#[test]
fn reduce_mod_examples() {
    let a = Series::from_i64(Q, &[0, 8, -16, 24]);
    assert_eq!(a.reduce_mod(8).unwrap(), Series::zero(Ring::Mod(8), 4));
    let half = Series::from_rationals(&[rat(1, 1), rat(0, 1), rat(3, 2)]);
    assert_eq!(half.reduce_mod(4), Err(Error::NonIntegralCoefficient { index: 2 }));
    let p = Series::from_i64(Q, &euler_direct(15)).invert().unwrap().reduce_mod(5).unwrap();
    for i in [4, 9, 14] {
        assert!(p.is_zero_at(i));
    }
    assert!(a.reduce_mod(1).is_err());
}

#[test]
fn div_exact_int_examples() {
    let a = Series::from_i64(Q, &[0, 8, -16]);
    assert_eq!(ints(&a.div_exact_int(&BigInt::from(8)).unwrap()), vec![0, 1, -2]);
    let b = Series::from_i64(Q, &[1, 1]);
    assert!(matches!(b.div_exact_int(&BigInt::from(2)), Err(Error::NotDivisible { index: 0, .. })));
}

#[test]
fn scaled_congruence_rule() {
    // (1/8)(8 q - 64 q^2): integral 8q - 64q^2 over 8 -> 8*a = 8q - 64q^2 must vanish mod 64
    let a = Series::from_rationals(&[rat(0, 1), rat(8, 8), rat(-64, 8)]);
    assert!(!a.scaled_congruence_zero(8).unwrap());
    let b = Series::from_rationals(&[rat(0, 1), rat(64, 8), rat(-128, 8)]);
    assert!(b.scaled_congruence_zero(8).unwrap());
    // 9/8 is not 0 mod 4
    let c = Series::from_rationals(&[rat(9, 8)]);
    assert_eq!(c.scaled_congruence_failure(4).unwrap(), Some(0));
    // odd denominators are units mod 2: 2/3 == 0 (mod 2)
    let d = Series::from_rationals(&[rat(2, 3), rat(4, 3)]);
    assert!(d.scaled_congruence_zero(2).unwrap());
}

#[test]
fn equal_to_precision_examples() {
    let a = Series::from_i64_padded(Q, &[1, 1], 6);
    let b = Series::from_i64(Q, &[1, 1, 0, 0, 0, 1]);
    assert_eq!(a.equal_to_precision(&a, 6).unwrap(), Comparison::Equal);
    assert_eq!(
        a.equal_to_precision(&b, 6).unwrap(),
        Comparison::FirstDifference { index: 5, left: Coeff::integer(0), right: Coeff::integer(1) }
    );
    assert_eq!(a.equal_to_precision(&b, 5).unwrap(), Comparison::Equal);
    assert!(matches!(a.equal_to_precision(&b, 7), Err(Error::InsufficientPrecision { .. })));
}

#[test]
fn rational_normalization() {
    let s = Series::from_rationals(&[rat(1, 2), rat(1, 2)]).scale_i64(2);
    assert_eq!(s.exact_parts().unwrap().1, &BigInt::one());
    assert_eq!(ints(&s), vec![1, 1]);
}

#[test]
fn negate_alternate_is_q_to_minus_q() {
    let s = Series::from_i64(Q, &[1, 2, 3, 4]);
    assert_eq!(ints(&s.negate_alternate()), vec![1, -2, 3, -4]);
    let m = Series::from_i64(Ring::Mod(5), &[1, 2, 3, 4]);
    assert_eq!(m.negate_alternate().residues().unwrap(), &[1, 3, 3, 1]);
}

#[test]
fn large_mod_product_matches_exact_reduction() {
    let n = 3000;
    let a: Vec<i64> = (0..n as i64).map(|i| (i * i * 31 + 7) % 1009 - 500).collect();
    let b: Vec<i64> = (0..n as i64).map(|i| (i * 97 + 3) % 211 - 100).collect();
    let exact = Series::from_i64(Q, &a).mul(&Series::from_i64(Q, &b)).unwrap();
    for m in [8u64, 1 << 32, 4_294_967_291] {
        let modp = Series::from_i64(Ring::Mod(m), &a).mul(&Series::from_i64(Ring::Mod(m), &b)).unwrap();
        assert_eq!(exact.reduce_mod(m).unwrap(), modp);
    }
}

fn arb_coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, 1..max_len)
}

fn arb_ring() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Q), (2u64..100).prop_map(Ring::Mod), Just(Ring::Mod(1 << 32))]
}

proptest! {
    #[test]
    fn dissect_then_dilate_reconstructs(v in arb_coeffs(64), m in 1usize..9) {
        let a = Series::from_i64(Q, &v);
        let n = a.precision();
        let mut acc = Series::zero(Q, n);
        for r in 0..m.min(n) {
            let part = a.dissect(m, r).unwrap().dilate(m).unwrap().shift(0);
            let part = part.padded(n.max(part.precision())).truncate(n).unwrap().shift(r);
            acc = acc.add(&part).unwrap();
        }
        prop_assert_eq!(acc, a);
    }

    #[test]
    fn dissect_of_dilation(v in arb_coeffs(40), m in 1usize..8) {
        let a = Series::from_i64(Q, &v);
        let d = a.dilate(m).unwrap();
        prop_assert_eq!(d.dissect(m, 0).unwrap(), a.clone());
        for r in 1..m {
            prop_assert_eq!(d.dissect(m, r).unwrap().zero_prefix(), ZeroPrefix::AllZero);
        }
    }

    #[test]
    fn inverse_is_two_sided(ring in arb_ring(), mut v in arb_coeffs(64)) {
        v[0] = 1;
        let a = Series::from_i64(ring, &v);
        let b = a.invert().unwrap();
        prop_assert_eq!(a.mul(&b).unwrap(), Series::one(ring, v.len()));
        prop_assert_eq!(b.mul(&a).unwrap(), Series::one(ring, v.len()));
    }
}
