//! Stable output shapes: JSON schemas and expression-compatible printing.

use bracket_series::laurent::LSeries;
use bracket_series::Rational;
use serde::Serialize;

/// JSON shape of a truncated series: coefficients listed from the valuation
/// to the order, each as a `[numerator, denominator]` pair of decimal
/// strings.
#[derive(Debug, Serialize)]
pub struct SeriesJson {
    pub variable: String,
    pub valuation: i64,
    pub order: i64,
    pub coefficients: Vec<[String; 2]>,
}

impl SeriesJson {
    pub fn from_series(series: &LSeries) -> SeriesJson {
        SeriesJson {
            variable: series.variable().to_string(),
            valuation: series.valuation(),
            order: series.order(),
            coefficients: series.window().map(|(_, c)| rational_pair(c)).collect(),
        }
    }
}

/// `[numerator, denominator]` as decimal strings (exact at any size).
pub fn rational_pair(value: &Rational) -> [String; 2] {
    [value.numerator().to_string(), value.denominator().to_string()]
}

/// Renders `(exponent, coefficient)` terms in reading order:
/// `1/8 z^-2 + 1/4 z^-1 + 1 + 1/4 z`, skipping zeros ("0" if all vanish).
pub fn terms_to_text(variable: &str, terms: impl Iterator<Item = (i64, Rational)>) -> String {
    let mut out = String::new();
    for (exponent, coeff) in terms {
        if coeff.is_zero() {
            continue;
        }
        let negative = coeff.is_negative();
        let magnitude = coeff.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if exponent == 0 {
            out.push_str(&magnitude.to_string());
        } else {
            if !magnitude.is_one() {
                out.push_str(&format!("{magnitude} "));
            }
            if exponent == 1 {
                out.push_str(variable);
            } else {
                out.push_str(&format!("{variable}^{exponent}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Renders the known window as an expression string that re-parses to the
/// same polynomial: `1/2 + 1/4*z + 1/8*z^2`, with explicit `*` and `^`.
pub fn series_to_expr_string(series: &LSeries) -> String {
    let variable = series.variable();
    let mut out = String::new();
    for (exponent, coeff) in series.window() {
        if coeff.is_zero() {
            continue;
        }
        let negative = coeff.is_negative();
        let magnitude = coeff.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if exponent == 0 {
            out.push_str(&magnitude.to_string());
        } else {
            if !magnitude.is_one() {
                out.push_str(&format!("{magnitude}*"));
            }
            if exponent == 1 {
                out.push_str(variable);
            } else {
                out.push_str(&format!("{variable}^{exponent}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
