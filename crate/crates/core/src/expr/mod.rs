//! Textual expression language for nice functions.
//!
//! ```text
//! (2+3i)*x1^2*exp(-pi*[[2,0],[0,1]][x,x] + [1i,0].x)
//! ```
//!
//! `M[x,x]` is the quadratic form `x·M x` and `v.x` the bilinear product
//! `v·x`. The dimension is taken from the matrix and vector literals.

mod ast;
mod lower;
mod parser;
mod print;

use thiserror::Error;

pub use ast::{ExpFactor, ExpForm, ExpItem, Expr, ExprKind, NamedConstant, Sign, Span};
pub use lower::{infer_dim, lower};
pub use parser::parse;
pub use print::{format_number, print_function, DISPLAY_DIGITS};

use crate::error::Error;
use crate::nice::NiceFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("parse error at {line}:{column}: expected one of [{}], found {found}", .expected.join(", "))]
    Parse {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

impl ExprError {
    pub fn code(&self) -> &'static str {
        match self {
            ExprError::Parse { .. } => "E_PARSE",
            ExprError::Core(e) => e.code(),
        }
    }
}

/// Parses and lowers, inferring the dimension from the literals.
pub fn parse_function(text: &str) -> Result<NiceFunction, ExprError> {
    let ast = parse(text)?;
    let dim = infer_dim(&ast)?.ok_or_else(|| {
        Error::Invalid("cannot infer dimension: expression has no matrix or vector literal".into())
    })?;
    lower(&ast, dim)
}
