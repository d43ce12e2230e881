//! Library surface of the `bracket` command-line tool: the expression
//! grammar, evaluation into exact truncated series, and the stable output
//! shapes. The binary in `main.rs` is a thin dispatcher over these.

pub mod eval;
pub mod expr;
pub mod output;

pub use eval::{eval_bracket, eval_bracket_inner, eval_lseries, expr_to_laurent_poly, CliError};
pub use expr::{parse, Expr, Func, ParseError};
