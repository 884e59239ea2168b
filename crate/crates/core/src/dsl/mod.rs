//! Rational operators written as expressions in `z` and `lam`.
//!
//! Expressions are parsed into an [`ExprAst`], then compiled for a given
//! `lam` into a polynomial ratio usable anywhere a built-in operator is.

mod ast;
mod compile;
mod derivative;
mod parser;

use num_complex::Complex64;
use thiserror::Error;

pub use ast::{ExprAst, Span, Var};
pub use compile::{compile, CompileError, MAX_DEGREE};
pub use derivative::symbolic_derivative;
pub use parser::{parse, ParseError, Position, MAX_NESTING};

use crate::kimfamily::RationalOperator;

/// The built-in family as an expression.
pub const KIM_SOURCE: &str = "-z^4*(1-lam+4*z+6*z^2+4*z^3+z^4)/(-1-4*z-6*z^2-4*z^3+(-1+lam)*z^4)";

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// Parse and compile in one step.
pub fn compile_source(source: &str, lambda: Complex64) -> Result<RationalOperator, DslError> {
    Ok(compile(&parse(source)?, lambda)?)
}
