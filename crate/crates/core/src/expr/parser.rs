//! Recursive descent over the token stream.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' int)?
//! atom   := f<k> | 'q' ('^' int)? | G(q^k) | H(q^k) | T(q^k) | 'K'
//!         | int ['/' int] | '(' expr ')' | negq4(expr) | dissect(expr, m, r)
//!         | poch(a, m) | npoch(a, m) | DSOME | SOME | LambertD | LambertS
//! ```
//!
//! `p/q` with both sides bare integers folds into one rational literal unless the
//! denominator carries an exponent.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::ast::{Expr, ExprKind, NamedSeries};
use super::lexer::{tokenize, Keyword, Tok, Token};
use crate::error::{Error, Result};
use crate::qproducts::PochSign;

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser::new(tokenize(text)?);
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

const ATOM_START: &[&str] = &[
    "integer", "f<k>", "q", "G(", "H(", "T(", "K", "(", "negq4(", "dissect(", "poch(", "npoch(", "DSOME", "SOME",
    "LambertD", "LambertS", "-",
];

impl Parser {
    pub(crate) fn new(toks: Vec<Token>) -> Parser {
        Parser { toks, pos: 0 }
    }

    pub(crate) fn mark(&self) -> usize {
        self.pos
    }

    pub(crate) fn reset(&mut self, mark: usize) {
        self.pos = mark;
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks[self.pos].start
    }

    fn last_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].end
        }
    }

    pub(crate) fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, expected: &[&str]) -> Error {
        Error::Parse { position: self.offset(), expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok, what: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    pub(crate) fn expect_eof(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["operator", "end of input"]))
        }
    }

    pub(crate) fn unsigned(&mut self, what: &str) -> Result<usize> {
        match self.peek().clone() {
            Tok::Int(v) => {
                let n = v.to_usize().ok_or_else(|| self.error(&[what]))?;
                self.bump();
                Ok(n)
            }
            _ => Err(self.error(&[what])),
        }
    }

    pub(crate) fn signed(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Int(v) => {
                let v = if neg { -v } else { v };
                let n = v.to_i64().ok_or_else(|| self.error(&["integer in i64 range"]))?;
                self.bump();
                Ok(n)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Int(_)
                | Tok::Eta(_)
                | Tok::LParen
                | Tok::Kw(
                    Keyword::Q
                        | Keyword::G
                        | Keyword::H
                        | Keyword::T
                        | Keyword::K
                        | Keyword::NegQ4
                        | Keyword::Dissect
                        | Keyword::Poch
                        | Keyword::NPoch
                        | Keyword::Dsome
                        | Keyword::Some
                        | Keyword::LambertD
                        | Keyword::LambertS
                )
        )
    }

    pub(crate) fn expr(&mut self) -> Result<Expr> {
        let start = self.offset();
        let mut lhs = self.term()?;
        loop {
            let add = match self.peek() {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let kind = if add {
                ExprKind::Add(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr::spanned(kind, start, self.last_end());
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let start = self.offset();
        let mut lhs = self.unary()?;
        loop {
            let div = match self.peek() {
                Tok::Star => {
                    self.bump();
                    false
                }
                Tok::Slash => {
                    self.bump();
                    true
                }
                _ if self.starts_factor() => false,
                _ => return Ok(lhs),
            };
            let rhs = self.unary()?;
            let kind = if div {
                ExprKind::Div(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Mul(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr::spanned(kind, start, self.last_end());
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let start = self.offset();
        if self.eat(&Tok::Minus) {
            let inner = self.unary()?;
            return Ok(Expr::spanned(ExprKind::Neg(Box::new(inner)), start, self.last_end()));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let start = self.offset();
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let k = self.signed()?;
            return Ok(Expr::spanned(ExprKind::Pow(Box::new(base), k), start, self.last_end()));
        }
        Ok(base)
    }

    /// `(q)` or `(q^k)` with `k >= 1`.
    fn dilation_arg(&mut self) -> Result<usize> {
        self.expect(&Tok::LParen, "(")?;
        self.expect(&Tok::Kw(Keyword::Q), "q")?;
        let k = if self.eat(&Tok::Caret) {
            let at = self.offset();
            let k = self.unsigned("positive integer")?;
            if k == 0 {
                return Err(Error::Parse { position: at, expected: vec!["positive integer".into()] });
            }
            k
        } else {
            1
        };
        self.expect(&Tok::RParen, ")")?;
        Ok(k)
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = self.offset();
        let kind = match self.peek().clone() {
            Tok::Int(p) => {
                self.bump();
                let folds = *self.peek() == Tok::Slash
                    && matches!(self.peek_at(1), Tok::Int(_))
                    && *self.peek_at(2) != Tok::Caret;
                if folds {
                    self.bump();
                    let Tok::Int(d) = self.bump().tok else { unreachable!() };
                    if d == BigInt::from(0) {
                        return Err(Error::Parse {
                            position: self.last_end() - 1,
                            expected: vec!["nonzero denominator".into()],
                        });
                    }
                    ExprKind::Rational(BigRational::new(p, d))
                } else {
                    ExprKind::Rational(BigRational::from_integer(p))
                }
            }
            Tok::Eta(k) => {
                self.bump();
                ExprKind::Eta(k)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(&Tok::RParen, ")")?;
                // keep the inner node; the span widens to cover the parentheses
                return Ok(Expr { kind: inner.kind, span: super::ast::Span { start, end: self.last_end() } });
            }
            Tok::Kw(kw) => {
                self.bump();
                match kw {
                    Keyword::Q => {
                        if self.eat(&Tok::Caret) {
                            ExprKind::Monomial(self.unsigned("nonnegative integer")?)
                        } else {
                            ExprKind::Monomial(1)
                        }
                    }
                    Keyword::G => ExprKind::G(self.dilation_arg()?),
                    Keyword::H => ExprKind::H(self.dilation_arg()?),
                    Keyword::T => ExprKind::T(self.dilation_arg()?),
                    Keyword::K => ExprKind::K,
                    Keyword::Dsome | Keyword::Some | Keyword::LambertD | Keyword::LambertS => {
                        let which = match kw {
                            Keyword::Dsome => NamedSeries::Dsome,
                            Keyword::Some => NamedSeries::Some,
                            Keyword::LambertD => NamedSeries::LambertD,
                            _ => NamedSeries::LambertS,
                        };
                        let k = if *self.peek() == Tok::LParen && *self.peek_at(1) == Tok::Kw(Keyword::Q) {
                            self.dilation_arg()?
                        } else {
                            1
                        };
                        ExprKind::Named(which, k)
                    }
                    Keyword::NegQ4 => {
                        self.expect(&Tok::LParen, "(")?;
                        let inner = self.expr()?;
                        self.expect(&Tok::RParen, ")")?;
                        ExprKind::SubstNegQ4(Box::new(inner))
                    }
                    Keyword::Dissect => {
                        self.expect(&Tok::LParen, "(")?;
                        let inner = self.expr()?;
                        self.expect(&Tok::Comma, ",")?;
                        let at = self.offset();
                        let m = self.unsigned("positive integer")?;
                        if m == 0 {
                            return Err(Error::Parse { position: at, expected: vec!["positive integer".into()] });
                        }
                        self.expect(&Tok::Comma, ",")?;
                        let at = self.offset();
                        let r = self.unsigned("residue")?;
                        if r >= m {
                            return Err(Error::Parse { position: at, expected: vec![format!("residue below {m}")] });
                        }
                        self.expect(&Tok::RParen, ")")?;
                        ExprKind::Dissect(Box::new(inner), m, r)
                    }
                    Keyword::Poch | Keyword::NPoch => {
                        self.expect(&Tok::LParen, "(")?;
                        let at = self.offset();
                        let offset = self.unsigned("positive integer")?;
                        if offset == 0 {
                            return Err(Error::Parse { position: at, expected: vec!["positive integer".into()] });
                        }
                        self.expect(&Tok::Comma, ",")?;
                        let at = self.offset();
                        let step = self.unsigned("positive integer")?;
                        if step == 0 {
                            return Err(Error::Parse { position: at, expected: vec!["positive integer".into()] });
                        }
                        self.expect(&Tok::RParen, ")")?;
                        let sign = if kw == Keyword::Poch { PochSign::Minus } else { PochSign::Plus };
                        ExprKind::Poch { sign, offset, step }
                    }
                    Keyword::Mod | Keyword::N => {
                        self.pos -= 1;
                        return Err(self.error(ATOM_START));
                    }
                }
            }
            _ => return Err(self.error(ATOM_START)),
        };
        Ok(Expr::spanned(kind, start, self.last_end()))
    }
}
