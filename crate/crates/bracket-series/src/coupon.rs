//! Expected trials for the coupon collector's problem, three ways.
//!
//! A trial independently produces coupon `c` with probability `p(c)`; we
//! want the expected number of trials until `n` distinct coupons have been
//! seen. The three routes are exact and must agree:
//!
//! - [`expected_trials_bracket`]: expands `Π_c (1 + z(e^{p(c)t} - 1))`, sums
//!   the coefficients of `z^0 ..= z^{n-1}` (the leftward-sum bracket against
//!   `z^n/(z-1)`), and integrates the resulting exponential polynomial
//!   against `e^{-t}` term by term.
//! - [`expected_trials_formula`]: the subset closed form
//!   `Σ_{|A|<n} (-1)^{n-1-|A|} C(|C|-|A|-1, |C|-n) / (1 - p(A))`.
//! - [`markov_oracle`]: solves the expectation recurrence over the subset
//!   lattice directly; an independent check on both formulas.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::rational::{binomial, Rational};

/// Subset enumeration is exponential; the closed-form routes stop here.
const MAX_COUPONS_FORMULA: usize = 24;
/// The Markov oracle stores one value per subset, so it stops earlier.
const MAX_COUPONS_ORACLE: usize = 20;

/// A coupon-collector instance: exact per-coupon probabilities summing to 1,
/// and the target number of distinct coupons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouponProblem {
    probabilities: Vec<Rational>,
    target: usize,
}

impl CouponProblem {
    pub fn new(probabilities: Vec<Rational>, target: usize) -> Result<CouponProblem> {
        if probabilities.is_empty() {
            return Err(Error::InvalidArgument("at least one coupon is required".into()));
        }
        if target < 1 || target > probabilities.len() {
            return Err(Error::InvalidArgument(alloc::format!(
                "target {target} must lie in 1..={}",
                probabilities.len()
            )));
        }
        let mut total = Rational::zero();
        for p in &probabilities {
            if p.is_zero() || p.is_negative() {
                return Err(Error::InvalidArgument(
                    "every coupon probability must be strictly positive".into(),
                ));
            }
            total = total + p.clone();
        }
        if !total.is_one() {
            return Err(Error::InvalidArgument(alloc::format!(
                "probabilities must sum to exactly 1, got {total}"
            )));
        }
        Ok(CouponProblem { probabilities, target })
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn target(&self) -> usize {
        self.target
    }

    fn count(&self) -> usize {
        self.probabilities.len()
    }

    fn check_formula_size(&self) -> Result<()> {
        if self.count() > MAX_COUPONS_FORMULA {
            return Err(Error::InvalidArgument(alloc::format!(
                "subset formulas are capped at {MAX_COUPONS_FORMULA} coupons"
            )));
        }
        Ok(())
    }

    /// `p(A)` for every subset bitmask, by lowest-bit dynamic programming.
    fn subset_probabilities(&self) -> Vec<Rational> {
        let size = self.count();
        let mut sums = vec![Rational::zero(); 1usize << size];
        for mask in 1..(1usize << size) {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = &sums[mask & (mask - 1)] + &self.probabilities[low];
        }
        sums
    }
}

/// The integrand left over after the bracket step:
/// `Σ_{B ⊆ C, |B| < n} Π_{c ∈ B} (e^{p(c)t} - 1)` as an exponential
/// polynomial.
///
/// Computed by expanding the degree-`|C|` polynomial in `z` with [`ExpPoly`]
/// coefficients `Π_c (1 + z(e^{p(c)t} - 1))` and summing the coefficients of
/// `z^0 ..= z^{n-1}`.
pub fn bracket_integrand(problem: &CouponProblem) -> Result<ExpPoly> {
    problem.check_formula_size()?;
    // Coefficients of the z-polynomial, index = power of z.
    let mut z_poly: Vec<ExpPoly> = vec![ExpPoly::one()];
    for p in &problem.probabilities {
        let factor = ExpPoly::term(Rational::one(), p.clone()).sub(&ExpPoly::one());
        let mut next = vec![ExpPoly::zero(); z_poly.len() + 1];
        for (i, coeff) in z_poly.iter().enumerate() {
            next[i] = next[i].add(coeff);
            next[i + 1] = next[i + 1].add(&coeff.mul(&factor));
        }
        z_poly = next;
    }
    let mut sum = ExpPoly::zero();
    for coeff in z_poly.iter().take(problem.target) {
        sum = sum.add(coeff);
    }
    Ok(sum)
}

/// Expected trials via the bracket-integral route: sum the low-order `z`
/// coefficients of the product generating polynomial, then integrate the
/// surviving exponential polynomial against `e^{-t}` over `[0, ∞)`.
pub fn expected_trials_bracket(problem: &CouponProblem) -> Result<Rational> {
    bracket_integrand(problem)?.integrate_against_decay()
}

/// Expected trials via the subset closed form
/// `Σ_{A ⊆ C, |A| < n} (-1)^{n-1-|A|} C(|C|-|A|-1, |C|-n) / (1 - p(A))`.
pub fn expected_trials_formula(problem: &CouponProblem) -> Result<Rational> {
    problem.check_formula_size()?;
    let size = problem.count();
    let n = problem.target;
    let sums = problem.subset_probabilities();
    let one = Rational::one();
    let mut total = Rational::zero();
    for (mask, p_sum) in sums.iter().enumerate() {
        let a = mask.count_ones() as usize;
        if a >= n {
            continue;
        }
        let sign = if (n - 1 - a) % 2 == 0 { Rational::one() } else { -Rational::one() };
        let weight = binomial((size - a - 1) as i64, (size - n) as i64);
        // p(A) < 1 is guaranteed: A is a proper subset and every p(c) > 0.
        total = total + sign * weight.checked_div(&(&one - p_sum))?;
    }
    Ok(total)
}

/// Expected trials by solving the subset-lattice recurrence
/// `E[S]·(1 - p(S)) = 1 + Σ_{c ∉ S} p(c)·E[S ∪ {c}]` backwards from the
/// states that already hold `n` distinct coupons.
pub fn markov_oracle(problem: &CouponProblem) -> Result<Rational> {
    if problem.count() > MAX_COUPONS_ORACLE {
        return Err(Error::InvalidArgument(alloc::format!(
            "the Markov oracle is capped at {MAX_COUPONS_ORACLE} coupons"
        )));
    }
    let size = problem.count();
    let n = problem.target;
    let sums = problem.subset_probabilities();
    let one = Rational::one();
    let full = 1usize << size;
    let mut expect: Vec<Rational> = vec![Rational::zero(); full];

    // Order states by descending popcount so successors are ready.
    let mut states: Vec<usize> = (0..full).collect();
    states.sort_by_key(|mask| core::cmp::Reverse(mask.count_ones()));
    for mask in states {
        if (mask.count_ones() as usize) >= n {
            continue;
        }
        let mut acc = Rational::one();
        for c in 0..size {
            if mask & (1 << c) == 0 {
                acc = acc + &problem.probabilities[c] * &expect[mask | (1 << c)];
            }
        }
        let stay = &one - &sums[mask];
        expect[mask] = acc.checked_div(&stay)?;
    }
    Ok(expect[0].clone())
}
