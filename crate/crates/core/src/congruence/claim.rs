//! Claims about coefficient progressions and their text form.
//!
//! ```text
//! claim  := target '[' prog ']' '==' rhs 'mod' int
//! rhs    := '0' | ['-'] item (('+' | '-') item)*
//! item   := [int ['*']] target '[' prog ']'
//! prog   := [int] 'n' ['+' int]
//! target := 'DSOME' | 'SOME' | '{' expr '}'
//! ```

use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::expr::lexer::{tokenize, Keyword, Tok};
use crate::expr::parser::Parser;
use crate::expr::Expr;
use crate::ring::Ring;

/// Indices `A n + B` for `n >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Progression {
    pub step: usize,
    pub residue: usize,
}

impl Progression {
    pub fn new(step: usize, residue: usize) -> Result<Progression> {
        if step == 0 || residue >= step {
            return Err(Error::InvalidArgument(format!("progression needs 0 <= B < A, got A={step}, B={residue}")));
        }
        Ok(Progression { step, residue })
    }

    /// `A n + B`, or `None` on overflow.
    pub fn index(&self, n: usize) -> Option<usize> {
        self.step.checked_mul(n)?.checked_add(self.residue)
    }

    /// Whether every index of `self` is also an index of `other`.
    pub fn within(&self, other: &Progression) -> bool {
        self.step.is_multiple_of(other.step) && self.residue % other.step == other.residue
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.step != 1 {
            write!(f, "{}", self.step)?;
        }
        write!(f, "n")?;
        if self.residue != 0 {
            write!(f, "+{}", self.residue)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Dsome,
    Some,
    /// Coefficients of an arbitrary series expression.
    Custom(Expr),
}

impl Target {
    /// Cache key and display name.
    pub fn key(&self) -> String {
        match self {
            Target::Dsome => "DSOME".into(),
            Target::Some => "SOME".into(),
            Target::Custom(e) => format!("{{{e}}}"),
        }
    }

    pub fn parse(text: &str) -> Result<Target> {
        match text.trim() {
            "DSOME" => Ok(Target::Dsome),
            "SOME" => Ok(Target::Some),
            other => {
                let inner = other.strip_prefix('{').and_then(|s| s.strip_suffix('}')).unwrap_or(other);
                Ok(Target::Custom(crate::expr::parse(inner)?))
            }
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClaimForm {
    /// `a(A n + B) == 0 (mod M)`
    Zero { prog: Progression, modulus: u64 },
    /// `a(lhs) == sum c_i a(rhs_i) (mod M)`
    Relation { lhs: Progression, rhs: Vec<(i64, Progression)>, modulus: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceClaim {
    pub target: Target,
    pub form: ClaimForm,
}

impl CongruenceClaim {
    pub fn zero(target: Target, prog: Progression, modulus: u64) -> Result<CongruenceClaim> {
        Ring::modular(modulus)?;
        Ok(CongruenceClaim { target, form: ClaimForm::Zero { prog, modulus } })
    }

    pub fn relation(
        target: Target,
        lhs: Progression,
        rhs: Vec<(i64, Progression)>,
        modulus: u64,
    ) -> Result<CongruenceClaim> {
        Ring::modular(modulus)?;
        Ok(CongruenceClaim { target, form: ClaimForm::Relation { lhs, rhs, modulus } })
    }

    pub fn modulus(&self) -> u64 {
        match &self.form {
            ClaimForm::Zero { modulus, .. } | ClaimForm::Relation { modulus, .. } => *modulus,
        }
    }

    pub fn progressions(&self) -> Vec<Progression> {
        match &self.form {
            ClaimForm::Zero { prog, .. } => vec![*prog],
            ClaimForm::Relation { lhs, rhs, .. } => std::iter::once(*lhs).chain(rhs.iter().map(|(_, p)| *p)).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<CongruenceClaim> {
        let mut p = Parser::new(tokenize(text)?);
        let target = target(&mut p)?;
        let lhs = bracketed(&mut p)?;
        p.expect(&Tok::EqEq, "==")?;
        let mut rhs = Vec::new();
        let zero_rhs = matches!(p.peek(), Tok::Int(v) if v.to_u8() == Some(0)) && {
            let save = p.mark();
            p.bump();
            let is_end = *p.peek() == Tok::Kw(Keyword::Mod);
            if !is_end {
                p.reset(save);
            }
            is_end
        };
        if !zero_rhs {
            let mut sign = if p.eat(&Tok::Minus) { -1 } else { 1 };
            loop {
                let coeff = match p.peek().clone() {
                    Tok::Int(v) => {
                        let at = p.offset();
                        p.bump();
                        p.eat(&Tok::Star);
                        v.to_i64()
                            .ok_or(Error::Parse { position: at, expected: vec!["coefficient in i64 range".into()] })?
                    }
                    _ => 1,
                };
                let at = p.offset();
                let t = self::target(&mut p)?;
                if t != target {
                    return Err(Error::Parse { position: at, expected: vec![format!("target {target}")] });
                }
                rhs.push((sign * coeff, bracketed(&mut p)?));
                sign = match p.peek() {
                    Tok::Plus => 1,
                    Tok::Minus => -1,
                    _ => break,
                };
                p.bump();
            }
        }
        p.expect(&Tok::Kw(Keyword::Mod), "mod")?;
        let at = p.offset();
        let m = p.unsigned("modulus")? as u64;
        p.expect_eof()?;
        if Ring::modular(m).is_err() {
            return Err(Error::Parse { position: at, expected: vec!["modulus between 2 and 2^32".into()] });
        }
        Ok(if zero_rhs {
            CongruenceClaim { target, form: ClaimForm::Zero { prog: lhs, modulus: m } }
        } else {
            CongruenceClaim { target, form: ClaimForm::Relation { lhs, rhs, modulus: m } }
        })
    }
}

fn target(p: &mut Parser) -> Result<Target> {
    match p.peek() {
        Tok::Kw(Keyword::Dsome) => {
            p.bump();
            Ok(Target::Dsome)
        }
        Tok::Kw(Keyword::Some) => {
            p.bump();
            Ok(Target::Some)
        }
        Tok::LBrace => {
            p.bump();
            let e = p.expr()?;
            p.expect(&Tok::RBrace, "}")?;
            Ok(Target::Custom(e))
        }
        _ => Err(p.error(&["DSOME", "SOME", "{"])),
    }
}

fn bracketed(p: &mut Parser) -> Result<Progression> {
    p.expect(&Tok::LBracket, "[")?;
    let start = p.offset();
    let step = if matches!(p.peek(), Tok::Int(_)) { p.unsigned("step")? } else { 1 };
    p.expect(&Tok::Kw(Keyword::N), "n")?;
    let residue = if p.eat(&Tok::Plus) { p.unsigned("residue")? } else { 0 };
    p.expect(&Tok::RBracket, "]")?;
    // `An+B` with B >= A is a shifted progression of the same step; keep the text honest
    Progression::new(step, residue)
        .map_err(|_| Error::Parse { position: start, expected: vec!["step >= 1 with residue below the step".into()] })
}

fn write_term(f: &mut fmt::Formatter<'_>, target: &Target, p: &Progression) -> fmt::Result {
    write!(f, "{target}[{p}]")
}

impl fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            ClaimForm::Zero { prog, modulus } => {
                write_term(f, &self.target, prog)?;
                write!(f, " == 0 mod {modulus}")
            }
            ClaimForm::Relation { lhs, rhs, modulus } => {
                write_term(f, &self.target, lhs)?;
                write!(f, " ==")?;
                for (i, (c, p)) in rhs.iter().enumerate() {
                    let sign = if *c < 0 {
                        "-"
                    } else if i == 0 {
                        ""
                    } else {
                        "+"
                    };
                    if i == 0 {
                        if *c < 0 {
                            write!(f, " -")?;
                        }
                        write!(f, " ")?;
                    } else {
                        write!(f, " {sign} ")?;
                    }
                    if c.unsigned_abs() != 1 {
                        write!(f, "{}*", c.unsigned_abs())?;
                    }
                    write_term(f, &self.target, p)?;
                }
                write!(f, " mod {modulus}")
            }
        }
    }
}
