//! Rogers–Ramanujan functions `G`, `H`, their quotient `T = G/H`, the eta quotient
//! `K = f_2 f_5^5 / (f_1 f_10^5)` and convergents of the continued fraction.

use crate::error::{Error, Result};
use crate::qproducts::{eta_quotient, pochhammer_inf, EtaQuotientSpec, PochSign, ProductSpec};
use crate::ring::Ring;
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Sum,
    Product,
}

/// `G` and `H` at a common precision.
#[derive(Debug, Clone)]
pub struct RRPair {
    pub g: Series,
    pub h: Series,
}

impl RRPair {
    pub fn new(n: usize, ring: Ring) -> RRPair {
        RRPair { g: rr_g(n, Side::Sum, ring), h: rr_h(n, Side::Sum, ring) }
    }
}

/// `sum_{j>=0} q^{j^2 + shift*j} / (q;q)_j`; the sum is finite below `q^n`.
fn rr_sum(n: usize, shift: usize, ring: Ring) -> Series {
    let mut acc = Series::zero(ring, n);
    let mut inv = Series::one(ring, n);
    for j in 0.. {
        let e = j * j + shift * j;
        if e >= n {
            break;
        }
        acc = acc.add(&inv.shift(e)).expect("same ring");
        inv = inv.div_one_minus(1, j + 1);
    }
    acc
}

/// `1 / ((q^a; q^5)_inf (q^{5-a}; q^5)_inf)`.
fn rr_product(n: usize, a: usize, ring: Ring) -> Series {
    let first = ProductSpec::new(PochSign::Minus, a, 5, -1).expect("valid spec");
    let second = ProductSpec::new(PochSign::Minus, 5 - a, 5, -1).expect("valid spec");
    pochhammer_inf(&first, n, ring).mul(&pochhammer_inf(&second, n, ring)).expect("same ring")
}

pub fn rr_g(n: usize, side: Side, ring: Ring) -> Series {
    match side {
        Side::Sum => rr_sum(n, 0, ring),
        Side::Product => rr_product(n, 1, ring),
    }
}

pub fn rr_h(n: usize, side: Side, ring: Ring) -> Series {
    match side {
        Side::Sum => rr_sum(n, 1, ring),
        Side::Product => rr_product(n, 2, ring),
    }
}

/// Evaluate `base` at `ceil(n/k)`, substitute `q -> q^k` and keep `n` terms.
pub(crate) fn dilated(k: usize, n: usize, base: impl FnOnce(usize) -> Result<Series>) -> Result<Series> {
    if k == 0 {
        return Err(Error::InvalidArgument("dilation must be positive".into()));
    }
    base(n.div_ceil(k))?.dilate(k)?.truncate(n)
}

/// `T(q^k) = G(q^k) / H(q^k)`.
pub fn t_series(k: usize, n: usize, ring: Ring) -> Result<Series> {
    dilated(k, n, |m| {
        let pair = RRPair::new(m, ring);
        pair.g.mul(&pair.h.invert()?)
    })
}

pub fn k_spec() -> EtaQuotientSpec {
    EtaQuotientSpec::new(vec![(2, 1), (5, 5), (1, -1), (10, -5)]).expect("valid spec")
}

/// `K = f_2 f_5^5 / (f_1 f_10^5)`.
pub fn k_series(n: usize, ring: Ring) -> Result<Series> {
    eta_quotient(&k_spec(), n, ring)
}

/// Depth-`d` convergent `1/(1 + q/(1 + q^2/(... + q^d)))`, which tends to `H/G`.
pub fn rr_cf_convergent(depth: usize, n: usize, ring: Ring) -> Result<Series> {
    if depth == 0 {
        return Err(Error::InvalidArgument("continued fraction depth must be >= 1".into()));
    }
    let one = Series::one(ring, n);
    let mut tail = one.add(&Series::monomial(ring, 1, depth, n))?;
    for j in (1..depth).rev() {
        tail = one.add(&tail.invert()?.shift(j))?;
    }
    tail.invert()
}
