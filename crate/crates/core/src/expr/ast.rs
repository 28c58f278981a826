use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use crate::qproducts::PochSign;

/// Byte range of a node in its source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

/// Named generating functions available as atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedSeries {
    /// DSOME(n), via its Lambert-series form.
    Dsome,
    /// SOME(n), via its Lambert-series form.
    Some,
    /// `sum (-1)^{m-1} q^m / (1+q^m)^2`
    LambertD,
    /// `sum q^m / (1+q^m)^2`
    LambertS,
}

impl NamedSeries {
    pub fn name(self) -> &'static str {
        match self {
            NamedSeries::Dsome => "DSOME",
            NamedSeries::Some => "SOME",
            NamedSeries::LambertD => "LambertD",
            NamedSeries::LambertS => "LambertS",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    /// Non-negative literal; a leading minus parses as [`ExprKind::Neg`].
    Rational(BigRational),
    /// `q^k`
    Monomial(usize),
    /// `f_k`
    Eta(usize),
    /// `G(q^k)`
    G(usize),
    H(usize),
    T(usize),
    K,
    Named(NamedSeries, usize),
    /// `(q^a; q^m)_inf` or `(-q^a; q^m)_inf`
    Poch {
        sign: PochSign,
        offset: usize,
        step: usize,
    },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// The substitution `q -> -q^4`.
    SubstNegQ4(Box<Expr>),
    /// `sum a(m i + r) q^i`
    Dissect(Box<Expr>, usize, usize),
}

/// Parsed expression. Equality ignores source spans.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

impl Expr {
    pub fn new(kind: ExprKind) -> Expr {
        Expr { kind, span: Span::default() }
    }

    pub fn spanned(kind: ExprKind, start: usize, end: usize) -> Expr {
        Expr { kind, span: Span { start, end } }
    }

    pub fn integer(v: i64) -> Expr {
        Expr::new(ExprKind::Rational(BigRational::from_integer(v.into())))
    }

    fn is_integer_literal(&self) -> bool {
        matches!(&self.kind, ExprKind::Rational(r) if r.is_integer() && !r.is_negative())
    }
}

fn dilation(f: &mut fmt::Formatter<'_>, name: &str, k: usize) -> fmt::Result {
    if k == 1 {
        write!(f, "{name}(q)")
    } else {
        write!(f, "{name}(q^{k})")
    }
}

/// Prints a fully parenthesized form that parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Rational(r) => {
                if r.is_integer() && !r.is_negative() {
                    write!(f, "{}", r.numer())
                } else if r.is_negative() {
                    write!(f, "(-{})", -r)
                } else {
                    write!(f, "({}/{})", r.numer(), r.denom())
                }
            }
            ExprKind::Monomial(1) => write!(f, "q"),
            ExprKind::Monomial(k) => write!(f, "q^{k}"),
            ExprKind::Eta(k) => write!(f, "f{k}"),
            ExprKind::G(k) => dilation(f, "G", *k),
            ExprKind::H(k) => dilation(f, "H", *k),
            ExprKind::T(k) => dilation(f, "T", *k),
            ExprKind::K => write!(f, "K"),
            ExprKind::Named(s, 1) => write!(f, "{}", s.name()),
            ExprKind::Named(s, k) => dilation(f, s.name(), *k),
            ExprKind::Poch { sign, offset, step } => match sign {
                PochSign::Minus => write!(f, "poch({offset},{step})"),
                PochSign::Plus => write!(f, "npoch({offset},{step})"),
            },
            ExprKind::Neg(e) => write!(f, "(-{e})"),
            ExprKind::Add(a, b) => write!(f, "({a} + {b})"),
            ExprKind::Sub(a, b) => write!(f, "({a} - {b})"),
            ExprKind::Mul(a, b) => write!(f, "({a} * {b})"),
            ExprKind::Div(a, b) => {
                if b.is_integer_literal() {
                    write!(f, "({a} / ({b}))")
                } else {
                    write!(f, "({a} / {b})")
                }
            }
            ExprKind::Pow(e, k) => match &e.kind {
                ExprKind::Eta(_) | ExprKind::G(_) | ExprKind::H(_) | ExprKind::T(_) | ExprKind::K => {
                    write!(f, "{e}^{k}")
                }
                _ => write!(f, "({e})^{k}"),
            },
            ExprKind::SubstNegQ4(e) => write!(f, "negq4({e})"),
            ExprKind::Dissect(e, m, r) => write!(f, "dissect({e}, {m}, {r})"),
        }
    }
}
