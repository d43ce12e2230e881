//! Exponential polynomials: finite sums `Σ a·e^{b t}` with rational `a`, `b`.
//!
//! This is the coefficient ring for the coupon-collector integrand. The
//! canonical form keeps one term per rate and drops zero amplitudes, so
//! equality is decidable termwise.

use alloc::collections::BTreeMap;
use core::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A finite sum of terms `amplitude · e^{rate · t}` with pairwise distinct
/// rates and no zero amplitudes.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ExpPoly {
    terms: BTreeMap<Rational, Rational>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    /// The multiplicative identity `1 = e^{0t}`.
    pub fn one() -> Self {
        ExpPoly::term(Rational::one(), Rational::zero())
    }

    /// The single term `amplitude · e^{rate t}`.
    pub fn term(amplitude: Rational, rate: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !amplitude.is_zero() {
            terms.insert(rate, amplitude);
        }
        ExpPoly { terms }
    }

    /// Sums `amplitude · e^{rate t}` terms, merging equal rates.
    pub fn from_terms(items: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut p = ExpPoly::zero();
        for (amplitude, rate) in items {
            p.add_term(amplitude, rate);
        }
        p
    }

    fn add_term(&mut self, amplitude: Rational, rate: Rational) {
        if amplitude.is_zero() {
            return;
        }
        let merged = match self.terms.get(&rate) {
            Some(existing) => existing + &amplitude,
            None => amplitude,
        };
        if merged.is_zero() {
            self.terms.remove(&rate);
        } else {
            self.terms.insert(rate, merged);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(rate, amplitude)` pairs in increasing rate order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (rate, amp) in &other.terms {
            out.add_term(amp.clone(), rate.clone());
        }
        out
    }

    pub fn neg(&self) -> ExpPoly {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|(rate, amp)| (rate.clone(), -amp))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ExpPoly) -> ExpPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &Rational) -> ExpPoly {
        if factor.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|(rate, amp)| (rate.clone(), amp * factor))
                .collect(),
        }
    }

    /// Product: rates add, amplitudes multiply, like rates merge.
    pub fn mul(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (ra, aa) in &self.terms {
            for (rb, ab) in &other.terms {
                out.add_term(aa * ab, ra + rb);
            }
        }
        out
    }

    /// The exact value of `∫_0^∞ p(t) e^{-t} dt = Σ a/(1-b)`.
    ///
    /// Requires every rate `b < 1`; otherwise the integral diverges.
    pub fn integrate_against_decay(&self) -> Result<Rational> {
        let one = Rational::one();
        let mut sum = Rational::zero();
        for (rate, amp) in &self.terms {
            if *rate >= one {
                return Err(Error::IntegralDivergent { rate: rate.clone() });
            }
            sum = sum + amp.checked_div(&(&one - rate))?;
        }
        Ok(sum)
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Largest rate first reads like a polynomial.
        for (i, (rate, amp)) in self.terms.iter().rev().enumerate() {
            let neg = amp.is_negative();
            let mag = amp.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if rate.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "e^({rate} t)")?;
            } else {
                write!(f, "{mag} e^({rate} t)")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
