//! Series reversion and the Lagrange inversion formula.
//!
//! [`revert`] computes the compositional inverse by a triangular coefficient
//! solve; [`lagrange_coefficient`] evaluates `(m/n)·[z^{-m}] f^{-n}`, which
//! the classical Lagrange formula `n [z^n] g^m = m [z^{-m}] f^{-n}` equates
//! with `[z^n] g^m` for the inverse `g`. The two routes are deliberately
//! independent so they can check each other.

use alloc::format;

use crate::error::{Error, Result};
use crate::laurent::LSeries;
use crate::rational::Rational;

fn check_reversible(f: &LSeries) -> Result<()> {
    if f.is_zero_window() || f.valuation() != 1 {
        return Err(Error::CompositionValuation(format!(
            "reversion needs valuation exactly 1 with a nonzero linear coefficient, found valuation {}",
            f.valuation()
        )));
    }
    Ok(())
}

/// The compositional inverse `g` of `f`, with `f(g(z)) = g(f(z)) = z` up to
/// `O(z^{order+1})`.
///
/// Requires `valuation(f) == 1` (so the linear coefficient is nonzero) and
/// `order(f) >= order`. Each coefficient `g_n` is determined by one linear
/// equation from `f(g) = z`.
pub fn revert(f: &LSeries, order: i64) -> Result<LSeries> {
    check_reversible(f)?;
    if f.order() < order {
        return Err(Error::InsufficientPrecision(format!(
            "reversion to order {order} needs f known to that order, window ends at {}",
            f.order()
        )));
    }
    let f = f.truncate(order);
    let variable = f.variable();
    let f1 = f.coefficient_at(1).expect("within window");
    let mut g = LSeries::monomial(
        variable,
        1,
        Rational::one().checked_div(&f1).expect("nonzero linear coefficient"),
        order,
    )?;
    for n in 2..=order {
        // With g correct through z^{n-1}, the defect of f(g) at z^n is
        // linear in g_n with coefficient f_1.
        let defect = f.compose(&g)?.coefficient_at(n)?;
        let correction = -defect.checked_div(&f1).expect("nonzero linear coefficient");
        g = g.add(&LSeries::monomial(variable, n, correction, order)?)?;
    }
    Ok(g)
}

/// The Lagrange coefficient `(m/n) · [z^{-m}] f(z)^{-n}`, which equals
/// `[z^n] g(z)^m` for the compositional inverse `g` of `f`.
///
/// Valid for all integers `m` and nonzero `n`, provided `f` carries enough
/// precision to resolve the requested coefficient of `f^{-n}`.
pub fn lagrange_coefficient(f: &LSeries, m: i64, n: i64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidArgument("the coefficient index n must be nonzero".into()));
    }
    check_reversible(f)?;
    let power = f.pow(-n)?;
    let coeff = power.coefficient_at(-m)?;
    Ok(Rational::from(m) / Rational::from(n) * coeff)
}
