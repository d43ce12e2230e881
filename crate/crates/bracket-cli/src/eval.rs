//! Evaluation of parsed expressions into truncated series, and the bracket
//! pipeline with its notational safety guard.
//!
//! For the bracket `[F(z)] G(z)`, `G` is expanded directly as an L-series,
//! while `F` is interpreted by expanding `F(1/z)` as an L-series and
//! mirroring the result into the R family. Under that reading,
//! `z^n/(z-1)` denotes exactly the descending sum `z^{n-1} + z^{n-2} + ...`,
//! and an ascending sum such as `z^n + z^{n+1} + ...` is unrepresentable.
//!
//! The guard: inside bracket-`F` evaluation, a division (or negative power)
//! whose denominator has more than one term must be written with a positive
//! coefficient on its highest power of the variable — `z-1`, not `1-z`. The
//! descending reading is conventional for the former; the latter signals the
//! ascending geometric expansion, which is exactly the reading that breaks
//! bracket algebra, so it is refused as `UnsafeBracket` rather than silently
//! reinterpreted.

use std::fmt;

use bracket_series::bracket::bracket;
use bracket_series::laurent::{LSeries, LaurentPoly, RSeries};
use bracket_series::{Error as CoreError, Rational};

use crate::expr::{Expr, Func, ParseError};

/// Errors surfaced by the command-line pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Parse(ParseError),
    /// The bracket-side expression does not denote a safe R-series reading.
    UnsafeBracket(String),
    Core(CoreError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::UnsafeBracket(msg) => write!(f, "unsafe bracket: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

/// The variable an expression ranges over; constants default to `z`, and
/// mixing both variables in one univariate evaluation is an error.
fn single_variable(expr: &Expr) -> Result<&'static str, CliError> {
    match expr.variables() {
        (_, false) => Ok("z"),
        (false, true) => Ok("w"),
        (true, true) => Err(CliError::Core(CoreError::VariableMismatch {
            left: "z".into(),
            right: "w".into(),
        })),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Position {
    /// Plain L-series evaluation.
    Outside,
    /// Bracket-inner evaluation: the variable is mirrored and the
    /// descending-denominator guard applies.
    Inside,
}

fn eval(expr: &Expr, variable: &str, order: i64, position: Position) -> Result<LSeries, CliError> {
    match expr {
        Expr::Literal(c) => Ok(LSeries::monomial(variable, 0, c.clone(), order)?),
        Expr::Var(_) => {
            let exponent = match position {
                Position::Outside => 1,
                Position::Inside => -1,
            };
            Ok(LSeries::monomial(variable, exponent, Rational::one(), order)?)
        }
        Expr::Add(a, b) => Ok(eval(a, variable, order, position)?
            .add(&eval(b, variable, order, position)?)?),
        Expr::Sub(a, b) => Ok(eval(a, variable, order, position)?
            .sub(&eval(b, variable, order, position)?)?),
        Expr::Mul(a, b) => Ok(eval(a, variable, order, position)?
            .mul(&eval(b, variable, order, position)?)?),
        Expr::Div(a, b) => {
            let numerator = eval(a, variable, order, position)?;
            let denominator = eval(b, variable, order, position)?;
            if position == Position::Inside {
                check_descending(&denominator)?;
            }
            Ok(numerator.div(&denominator)?)
        }
        Expr::Pow(a, m) => {
            let base = eval(a, variable, order, position)?;
            if position == Position::Inside && *m < 0 {
                check_descending(&base)?;
            }
            Ok(base.pow(*m)?)
        }
        Expr::Neg(a) => Ok(eval(a, variable, order, position)?.neg()),
        Expr::Apply(func, a) => {
            let arg = eval(a, variable, order, position)?;
            let result = match func {
                Func::Exp => arg.exp(),
                Func::Log => arg.log(),
                Func::Theta => Ok(arg.theta()),
                Func::D => Ok(arg.derivative()),
            };
            match (result, position) {
                (Ok(s), _) => Ok(s),
                // Inside a bracket, a composition failure means the mirrored
                // expression has no L-expansion at all.
                (Err(CoreError::CompositionValuation(msg)), Position::Inside) => {
                    Err(CliError::UnsafeBracket(format!(
                        "no valid expansion after substituting 1/{variable}: {msg}"
                    )))
                }
                (Err(e), _) => Err(e.into()),
            }
        }
    }
}

/// Rejects multi-term divisors whose mirrored expansion leads with a
/// negative coefficient (see the module docs for the convention).
fn check_descending(denominator: &LSeries) -> Result<(), CliError> {
    let nonzero = denominator.window().filter(|(_, c)| !c.is_zero()).count();
    if nonzero < 2 {
        // Monomials have a single unambiguous reading.
        return Ok(());
    }
    let leading = denominator
        .coefficient_at(denominator.valuation())
        .expect("valuation lies in the window");
    if leading.is_negative() {
        return Err(CliError::UnsafeBracket(
            "the divisor reads as an ascending sum with infinitely many positive powers; \
             write the denominator with a positive leading term (z-1, not 1-z) to request \
             the descending reading"
                .into(),
        ));
    }
    Ok(())
}

/// Exact truncated expansion of an expression as an L-series.
pub fn eval_lseries(expr: &Expr, order: i64) -> Result<LSeries, CliError> {
    let variable = single_variable(expr)?;
    eval(expr, variable, order, Position::Outside)
}

/// Expands `F(1/z)` as an L-series (refusing unsafe readings) and mirrors it
/// into the R family for use inside a bracket.
pub fn eval_bracket_inner(expr: &Expr, order: i64) -> Result<RSeries, CliError> {
    let variable = single_variable(expr)?;
    let mirrored = eval(expr, variable, order, Position::Inside)?;
    Ok(RSeries::from_mirror(mirrored))
}

/// The bracket `[F] G` for two expression strings' worth of series.
pub fn eval_bracket(f: &Expr, g: &Expr, order: i64) -> Result<Rational, CliError> {
    let inner = eval_bracket_inner(f, order)?;
    let outer = eval_lseries(g, order)?;
    Ok(bracket(&inner, &outer)?)
}

/// Interprets an expression as an exact Laurent polynomial in `z` (rational
/// constants, `z`, sums, differences, products, integer powers, and division
/// by monomials only).
pub fn expr_to_laurent_poly(expr: &Expr) -> Result<LaurentPoly, CliError> {
    let invalid = |msg: &str| CliError::Core(CoreError::InvalidArgument(msg.into()));
    match expr {
        Expr::Literal(c) => Ok(LaurentPoly::constant(c.clone())),
        Expr::Var('z') => Ok(LaurentPoly::monomial(1, Rational::one())),
        Expr::Var(_) => Err(invalid("polynomials here are univariate in z")),
        Expr::Add(a, b) => Ok(expr_to_laurent_poly(a)?.add(&expr_to_laurent_poly(b)?)),
        Expr::Sub(a, b) => Ok(expr_to_laurent_poly(a)?.sub(&expr_to_laurent_poly(b)?)),
        Expr::Mul(a, b) => Ok(expr_to_laurent_poly(a)?.mul(&expr_to_laurent_poly(b)?)),
        Expr::Neg(a) => Ok(expr_to_laurent_poly(a)?.neg()),
        Expr::Pow(a, m) => {
            let base = expr_to_laurent_poly(a)?;
            if *m >= 0 {
                Ok(base.pow(*m as u32))
            } else {
                let inverse = invert_monomial(&base)
                    .ok_or_else(|| invalid("negative powers apply only to monomials here"))?;
                Ok(inverse.pow(m.unsigned_abs() as u32))
            }
        }
        Expr::Div(a, b) => {
            let numerator = expr_to_laurent_poly(a)?;
            let denominator = expr_to_laurent_poly(b)?;
            let inverse = invert_monomial(&denominator)
                .ok_or_else(|| invalid("polynomial division is limited to monomial divisors"))?;
            Ok(numerator.mul(&inverse))
        }
        Expr::Apply(..) => Err(invalid("function applications are not polynomial")),
    }
}

fn invert_monomial(poly: &LaurentPoly) -> Option<LaurentPoly> {
    let mut terms = poly.iter();
    let (exponent, coeff) = terms.next()?;
    if terms.next().is_some() {
        return None;
    }
    Some(LaurentPoly::monomial(
        -exponent,
        Rational::one().checked_div(coeff).ok()?,
    ))
}
