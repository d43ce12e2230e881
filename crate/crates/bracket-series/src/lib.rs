//! Exact symbolic machinery for truncated formal Laurent series and the
//! coefficient-of bracket operator `[F(z)] G(z)`.
//!
//! Everything here is computed over exact big-integer rationals; identities
//! are checked with zero tolerance. The crate is split along the layers of
//! the theory:
//!
//! - [`rational`]: the coefficient field, plus binomial coefficients with the
//!   polynomial extension to negative upper index.
//! - [`exppoly`]: exponential polynomials `Σ a·e^{b t}`, the coefficient ring
//!   used by the coupon-collector integral.
//! - [`laurent`]: truncated L-series (finitely many negative exponents) and
//!   R-series (finitely many positive exponents), with arithmetic, calculus
//!   and substitution. Every series carries an explicit known-precision
//!   window; each operation returns the maximal provable window.
//! - [`bracket`]: the bracket `[F(z)] G(z) = Σ f_n g_n` under the safety
//!   discipline that F is an R-series and G is an L-series, plus the
//!   leftward-sum bracket that totals all coefficients below a cutoff.
//! - [`annulus`]: region-dependent expansions of factored rational functions
//!   via exact partial fractions; the same function has different coefficient
//!   streams in different annuli.
//! - [`multivar`]: sparse bivariate series, subscripted brackets, monomial
//!   substitution, and the Saalschütz / Dixon / Gessel–Stanton identity
//!   drivers.
//! - [`inversion`]: series reversion and the Lagrange inversion formula
//!   `n [z^n] g^m = m [z^{-m}] f^{-n}`.
//! - [`coupon`]: expected trials for the coupon collector, computed three
//!   independent ways (bracket integral, subset closed form, Markov chain).
//!
//! The crate is `no_std` (with `alloc`); parsing, serialization and the
//! command-line front end live in the companion `bracket-cli` crate.
//!
//! ```
//! use bracket_series::laurent::LSeries;
//! use bracket_series::bracket::bracket_poly;
//! use bracket_series::{LaurentPoly, Rational};
//!
//! // 1/(2-z) = 1/2 + z/4 + z^2/8 + ... on an explicit window.
//! let one = LSeries::one("z", 8);
//! let denom = LSeries::from_terms("z", [(0, Rational::from(2)), (1, Rational::from(-1))], 8)?;
//! let series = one.div(&denom)?;
//! assert_eq!(series.coefficient_at(3)?, Rational::new(1, 16));
//!
//! // [z^2 + 2z^3] G is a weighted pair of coefficients: 1/8 + 2/16 = 1/4.
//! let probe = LaurentPoly::from_terms([(2, Rational::one()), (3, Rational::from(2))]);
//! assert_eq!(bracket_poly(&probe, &series)?, Rational::new(1, 4));
//! # Ok::<(), bracket_series::Error>(())
//! ```

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod annulus;
pub mod bracket;
pub mod coupon;
pub mod error;
pub mod exppoly;
pub mod inversion;
pub mod laurent;
pub mod multivar;
pub mod rational;

pub use error::{Error, Result};
pub use exppoly::ExpPoly;
pub use laurent::{LSeries, LaurentPoly, RSeries};
pub use rational::{binomial, factorial, Rational};
