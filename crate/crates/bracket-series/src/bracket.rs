//! The coefficient-of bracket `[F(z)] G(z) = Σ_n f_n g_n`.
//!
//! The safety discipline is enforced by the types: the function inside the
//! bracket must be an [`RSeries`] (finitely many positive exponents) and the
//! function outside must be an [`LSeries`] (finitely many negative
//! exponents), so the dot product of the coefficient sequences is a finite
//! sum. Rather than silently truncating, under-resolved windows are a hard
//! error: the result is exact or absent.

use alloc::format;

use crate::error::{Error, Result};
use crate::laurent::{LSeries, LaurentPoly, RSeries};
use crate::rational::Rational;

/// The bracket `Σ_n f_n g_n` of an R-series against an L-series.
///
/// The sum ranges over `valuation(g) ..= top(f)`; outside that range one of
/// the factors is exactly zero. Both windows must cover the range:
/// `low_order(f) <= valuation(g)` and `order(g) >= top(f)`, otherwise the
/// value would depend on unknown tail coefficients and the call fails with
/// `InsufficientPrecision`.
pub fn bracket(f: &RSeries, g: &LSeries) -> Result<Rational> {
    if f.variable() != g.variable() {
        return Err(Error::VariableMismatch {
            left: f.variable().into(),
            right: g.variable().into(),
        });
    }
    let lo = g.valuation();
    let hi = f.top();
    if hi < lo {
        // Disjoint support: f is exactly zero above its top, g below its
        // valuation, so the dot product is exactly zero.
        return Ok(Rational::zero());
    }
    if f.low_order() > lo {
        return Err(Error::InsufficientPrecision(format!(
            "bracket needs the inner series down to exponent {lo}, known only to {}",
            f.low_order()
        )));
    }
    if g.order() < hi {
        return Err(Error::InsufficientPrecision(format!(
            "bracket needs the outer series up to exponent {hi}, known only to {}",
            g.order()
        )));
    }
    let mut sum = Rational::zero();
    for n in lo..=hi {
        let fn_ = f.coefficient_at(n).expect("window checked");
        if fn_.is_zero() {
            continue;
        }
        sum = sum + fn_ * g.coefficient_at(n).expect("window checked");
    }
    Ok(sum)
}

/// The bracket of an exact Laurent polynomial against an L-series.
///
/// A polynomial is known everywhere, so only `g`'s window can be
/// insufficient: every support exponent of `f` at or above `valuation(g)`
/// must lie within `g`'s window.
pub fn bracket_poly(f: &LaurentPoly, g: &LSeries) -> Result<Rational> {
    let low = match f.min_exp() {
        Some(min) => min.min(g.valuation()),
        None => return Ok(Rational::zero()),
    };
    let f_series = f.to_rseries(g.variable(), low).expect("window covers support");
    bracket(&f_series, g)
}

/// The coefficient of `z^n`, as the bracket `[z^n] g`.
pub fn extract_coefficient(n: i64, g: &LSeries) -> Result<Rational> {
    bracket_poly(&LaurentPoly::monomial(n, Rational::one()), g)
}

/// The leftward sum `g_{n-1} + g_{n-2} + ... + g_{valuation}`: the bracket
/// of `z^n/(z-1)`, read as the descending series `z^{n-1} + z^{n-2} + ...`,
/// against `g`. The sum is finite because `g` is an L-series.
///
/// Requires `order(g) >= n-1` so that every summand is known.
pub fn leftward_sum_bracket(n: i64, g: &LSeries) -> Result<Rational> {
    if g.order() < n - 1 {
        return Err(Error::InsufficientPrecision(format!(
            "leftward sum needs coefficients up to exponent {}, window ends at {}",
            n - 1,
            g.order()
        )));
    }
    let mut sum = Rational::zero();
    for k in g.valuation()..=n - 1 {
        sum = sum + g.coefficient_at(k).expect("window checked");
    }
    Ok(sum)
}

/// The descending series `z^{n-1} + z^{n-2} + ...` (the expansion of
/// `z^n/(z-1)` in the R family), materialized down to `low_order`.
pub fn leftward_series(variable: &str, n: i64, low_order: i64) -> Result<RSeries> {
    if low_order > n - 1 {
        return Err(Error::InvalidArgument(format!(
            "leftward series needs low_order <= {}, got {low_order}",
            n - 1
        )));
    }
    RSeries::from_terms(
        variable,
        (low_order..=n - 1).map(|e| (e, Rational::one())),
        low_order,
    )
}
