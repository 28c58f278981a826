//! Tokenizer shared by the identity expression grammar and the claim grammar.

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Q,
    G,
    H,
    T,
    K,
    NegQ4,
    Dissect,
    Poch,
    NPoch,
    Dsome,
    Some,
    LambertD,
    LambertS,
    Mod,
    N,
}

// longest first, so that e.g. `negq4` wins over `n`
const KEYWORDS: &[(&str, Keyword)] = &[
    ("LambertD", Keyword::LambertD),
    ("LambertS", Keyword::LambertS),
    ("dissect", Keyword::Dissect),
    ("negq4", Keyword::NegQ4),
    ("DSOME", Keyword::Dsome),
    ("npoch", Keyword::NPoch),
    ("poch", Keyword::Poch),
    ("SOME", Keyword::Some),
    ("mod", Keyword::Mod),
    ("q", Keyword::Q),
    ("G", Keyword::G),
    ("H", Keyword::H),
    ("T", Keyword::T),
    ("K", Keyword::K),
    ("n", Keyword::N),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Eta(usize),
    Kw(Keyword),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    EqEq,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

fn err(position: usize, expected: &[&str]) -> Error {
    Error::Parse { position, expected: expected.iter().map(|s| s.to_string()).collect() }
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b'{' => Some(Tok::LBrace),
            b'}' => Some(Tok::RBrace),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            i += 1;
            out.push(Token { tok, start, end: i });
            continue;
        }
        if c == b'=' {
            if bytes.get(i + 1) == Some(&b'=') {
                i += 2;
                out.push(Token { tok: Tok::EqEq, start, end: i });
                continue;
            }
            return Err(err(i + 1, &["'='"]));
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v: BigInt = text[start..i].parse().expect("digits");
            out.push(Token { tok: Tok::Int(v), start, end: i });
            continue;
        }
        if c == b'f' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let k: usize = text[start + 1..i].parse().map_err(|_| err(start + 1, &["dilation that fits in usize"]))?;
            if k == 0 {
                return Err(err(start + 1, &["positive dilation after 'f'"]));
            }
            out.push(Token { tok: Tok::Eta(k), start, end: i });
            continue;
        }
        if let Some(&(word, kw)) = KEYWORDS.iter().find(|(w, _)| text[i..].starts_with(w)) {
            i += word.len();
            out.push(Token { tok: Tok::Kw(kw), start, end: i });
            continue;
        }
        return Err(err(
            start,
            &[
                "number", "operator", "f<k>", "q", "G", "H", "T", "K", "negq4", "dissect", "poch", "npoch", "DSOME",
                "SOME", "LambertD", "LambertS",
            ],
        ));
    }
    out.push(Token { tok: Tok::Eof, start: bytes.len(), end: bytes.len() });
    Ok(out)
}
