//! Identity mini-language: tokenizer, parser, printer and evaluator.

mod ast;
mod eval;
pub(crate) mod lexer;
pub(crate) mod parser;

pub use ast::{Expr, ExprKind, NamedSeries, Span};
pub use eval::{eval, Evaluator};
pub use parser::parse;
