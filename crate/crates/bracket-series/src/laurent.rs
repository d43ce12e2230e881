//! Truncated formal Laurent series with explicit known-precision windows.
//!
//! An [`LSeries`] has finitely many negative exponents: it is known exactly on
//! the window `valuation ..= order` and carries an unknown tail
//! `O(z^{order+1})`. Below the valuation every coefficient is exactly zero.
//! An [`RSeries`] is the mirror family (finitely many positive exponents,
//! unknown tail descending past `low_order`); it is represented internally by
//! the L-series obtained from the substitution `z -> 1/z`, which is a ring
//! isomorphism between the two families.
//!
//! Every operation returns the maximal window provable from the operand
//! windows; the per-operation formulas are given on the methods. Canonical
//! form strips leading zeros so that the valuation is meaningful, and the
//! all-zero window is encoded as `valuation == order + 1`.
//!
//! [`LaurentPoly`] is the exact class: a finite polynomial in `z` and `1/z`,
//! which is simultaneously an L-series and an R-series and needs no window.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

/// A finite Laurent polynomial: exponent -> coefficient, no zero entries.
///
/// This is the class of series that are exact (both L and R at once); it is
/// the natural domain for bracket test functions and for the numerators of
/// factored rational functions.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::monomial(0, c)
    }

    pub fn monomial(exponent: i64, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        LaurentPoly { terms }
    }

    /// Sums the given `(exponent, coefficient)` terms; duplicates merge.
    pub fn from_terms(items: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in items {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exponent: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let merged = match self.terms.get(&exponent) {
            Some(existing) => existing + &coeff,
            None => coeff,
        };
        if merged.is_zero() {
            self.terms.remove(&exponent);
        } else {
            self.terms.insert(exponent, merged);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> Rational {
        self.terms.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Terms in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> LaurentPoly {
        if factor.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * factor)).collect(),
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// The substitution `z -> z^m` for nonzero integer `m` (exact on
    /// polynomials for either sign).
    pub fn subst_power(&self, m: i64) -> Result<LaurentPoly> {
        if m == 0 {
            return Err(Error::InvalidArgument("substitution power must be nonzero".into()));
        }
        Ok(LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e * m, c.clone())).collect(),
        })
    }

    /// The mirror substitution `z -> 1/z`.
    pub fn mirror(&self) -> LaurentPoly {
        self.subst_power(-1).expect("-1 is nonzero")
    }

    /// The operator `z d/dz`: coefficient at `z^n` multiplied by `n`.
    pub fn theta(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c * &Rational::from(*e))),
        )
    }

    pub fn derivative(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (e - 1, c * &Rational::from(*e))),
        )
    }

    /// Applies the operator `P(theta)` where `P` is the polynomial with the
    /// given coefficients (lowest degree first): coefficient at `z^n` is
    /// multiplied by `P(n)`.
    pub fn apply_exponent_poly(&self, p: &[Rational]) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| {
            let x = Rational::from(*e);
            let mut value = Rational::zero();
            for coeff in p.iter().rev() {
                value = value * x.clone() + coeff.clone();
            }
            (*e, c * &value)
        }))
    }

    /// The exact bracket of two Laurent polynomials: the dot product of
    /// their coefficient sequences.
    pub fn bracket(&self, other: &LaurentPoly) -> Rational {
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            if let Some(d) = other.terms.get(e) {
                sum = sum + c * d;
            }
        }
        sum
    }

    /// Embeds into a truncated L-series with the given window order.
    pub fn to_lseries(&self, variable: &str, order: i64) -> Result<LSeries> {
        LSeries::from_terms(
            variable,
            self.terms.iter().map(|(e, c)| (*e, c.clone())),
            order,
        )
    }

    /// Embeds into a truncated R-series known down to `low_order`.
    pub fn to_rseries(&self, variable: &str, low_order: i64) -> Result<RSeries> {
        RSeries::from_terms(
            variable,
            self.terms.iter().map(|(e, c)| (*e, c.clone())),
            low_order,
        )
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write_terms(f, "z", self.terms.iter().map(|(e, c)| (*e, c)))?;
        Ok(())
    }
}

/// A truncated formal Laurent series with finitely many negative exponents.
///
/// Known exactly on `valuation ..= order`; zero below the valuation; unknown
/// tail `O(z^{order+1})`. Canonical form: the leading stored coefficient is
/// nonzero, and the zero-on-window series is encoded as
/// `valuation == order + 1` with no stored coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct LSeries {
    variable: String,
    valuation: i64,
    /// Coefficients for exponents `valuation ..= order` (may hold interior
    /// and trailing zeros; those are exact).
    coeffs: Vec<Rational>,
    order: i64,
}

/// Result of the substitution `z -> z^m`: an L-series for `m > 0`, an
/// R-series (the mirror family) for `m < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substituted {
    L(LSeries),
    R(RSeries),
}

impl Substituted {
    pub fn into_lseries(self) -> Option<LSeries> {
        match self {
            Substituted::L(s) => Some(s),
            Substituted::R(_) => None,
        }
    }

    pub fn into_rseries(self) -> Option<RSeries> {
        match self {
            Substituted::R(s) => Some(s),
            Substituted::L(_) => None,
        }
    }
}

impl LSeries {
    fn canonical(variable: String, mut valuation: i64, mut coeffs: Vec<Rational>, order: i64) -> LSeries {
        debug_assert!(
            coeffs.is_empty() || coeffs.len() as i64 == order - valuation + 1,
            "window size mismatch"
        );
        let leading_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if leading_zeros > 0 {
            coeffs.drain(..leading_zeros);
            valuation += leading_zeros as i64;
        }
        if coeffs.is_empty() {
            valuation = order + 1;
        }
        LSeries { variable, valuation, coeffs, order }
    }

    /// The zero-on-window series `0 + O(z^{order+1})`.
    pub fn zero(variable: &str, order: i64) -> LSeries {
        LSeries {
            variable: variable.to_string(),
            valuation: order + 1,
            coeffs: Vec::new(),
            order,
        }
    }

    /// The constant one, known through the given (nonnegative) order.
    pub fn one(variable: &str, order: i64) -> LSeries {
        assert!(order >= 0, "the constant one needs a window containing exponent 0");
        let mut coeffs = vec![Rational::zero(); (order + 1) as usize];
        coeffs[0] = Rational::one();
        LSeries { variable: variable.to_string(), valuation: 0, coeffs, order }
    }

    /// Builds a series from `(exponent, coefficient)` terms, zero elsewhere
    /// on the window. Duplicate exponents merge; an exponent above `order` is
    /// an `InvalidArgument` error.
    pub fn from_terms(
        variable: &str,
        terms: impl IntoIterator<Item = (i64, Rational)>,
        order: i64,
    ) -> Result<LSeries> {
        let mut map: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e > order {
                return Err(Error::InvalidArgument(alloc::format!(
                    "exponent {e} exceeds the window order {order}"
                )));
            }
            let merged = match map.get(&e) {
                Some(existing) => existing + &c,
                None => c,
            };
            map.insert(e, merged);
        }
        map.retain(|_, c| !c.is_zero());
        let Some(&valuation) = map.keys().next() else {
            return Ok(LSeries::zero(variable, order));
        };
        let mut coeffs = vec![Rational::zero(); (order - valuation + 1) as usize];
        for (e, c) in map {
            coeffs[(e - valuation) as usize] = c;
        }
        Ok(LSeries::canonical(variable.to_string(), valuation, coeffs, order))
    }

    /// Builds the single-term series `coeff · z^exponent + O(z^{order+1})`.
    pub fn monomial(variable: &str, exponent: i64, coeff: Rational, order: i64) -> Result<LSeries> {
        LSeries::from_terms(variable, [(exponent, coeff)], order)
    }

    pub fn from_poly(poly: &LaurentPoly, variable: &str, order: i64) -> Result<LSeries> {
        poly.to_lseries(variable, order)
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    /// Smallest known-nonzero exponent; equals `order() + 1` for the
    /// zero-on-window series.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The known window as `(exponent, coefficient)` pairs, including exact
    /// interior zeros.
    pub fn window(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.valuation + i as i64, c))
    }

    /// The known window as an exact Laurent polynomial (zeros dropped).
    pub fn poly_part(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.window().map(|(e, c)| (e, c.clone())))
    }

    /// The coefficient of `z^n`: zero below the valuation, stored value on
    /// the window, `InsufficientPrecision` above the order.
    pub fn coefficient_at(&self, n: i64) -> Result<Rational> {
        if n > self.order {
            return Err(Error::InsufficientPrecision(alloc::format!(
                "coefficient of {}^{} requested, window ends at order {}",
                self.variable, n, self.order
            )));
        }
        if n < self.valuation {
            return Ok(Rational::zero());
        }
        Ok(self.coeffs[(n - self.valuation) as usize].clone())
    }

    fn check_variable(&self, other: &LSeries) -> Result<()> {
        if self.variable != other.variable {
            return Err(Error::VariableMismatch {
                left: self.variable.clone(),
                right: other.variable.clone(),
            });
        }
        Ok(())
    }

    /// Coefficientwise sum; the result window order is
    /// `min(order_a, order_b)`.
    pub fn add(&self, other: &LSeries) -> Result<LSeries> {
        self.check_variable(other)?;
        let order = self.order.min(other.order);
        let valuation = self.valuation.min(other.valuation);
        if valuation > order {
            return Ok(LSeries::zero(&self.variable, order));
        }
        let coeffs = (valuation..=order)
            .map(|n| {
                let a = self.coefficient_at(n).expect("within both windows");
                let b = other.coefficient_at(n).expect("within both windows");
                a + b
            })
            .collect();
        Ok(LSeries::canonical(self.variable.clone(), valuation, coeffs, order))
    }

    pub fn neg(&self) -> LSeries {
        LSeries {
            variable: self.variable.clone(),
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &LSeries) -> Result<LSeries> {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by a constant.
    pub fn scale(&self, factor: &Rational) -> LSeries {
        if factor.is_zero() {
            return LSeries::zero(&self.variable, self.order);
        }
        LSeries {
            variable: self.variable.clone(),
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            order: self.order,
        }
    }

    /// Multiplies by `z^k` exactly.
    pub fn shift(&self, k: i64) -> LSeries {
        LSeries {
            variable: self.variable.clone(),
            valuation: self.valuation + k,
            coeffs: self.coeffs.clone(),
            order: self.order + k,
        }
    }

    /// Cauchy product `h_n = Σ_{j+k=n} f_j g_k` on the maximal provable
    /// window: valuation `v_a + v_b`, order
    /// `min(order_a + v_b, order_b + v_a)`.
    pub fn mul(&self, other: &LSeries) -> Result<LSeries> {
        self.check_variable(other)?;
        let order = (self.order + other.valuation).min(other.order + self.valuation);
        if self.is_zero_window() || other.is_zero_window() {
            return Ok(LSeries::zero(&self.variable, order));
        }
        let valuation = self.valuation + other.valuation;
        let coeffs = (valuation..=order)
            .map(|n| {
                let lo = self.valuation.max(n - other.order);
                let hi = self.order.min(n - other.valuation);
                let mut sum = Rational::zero();
                for j in lo..=hi {
                    let a = &self.coeffs[(j - self.valuation) as usize];
                    let b = &other.coeffs[(n - j - other.valuation) as usize];
                    sum = sum + a * b;
                }
                sum
            })
            .collect();
        Ok(LSeries::canonical(self.variable.clone(), valuation, coeffs, order))
    }

    /// The multiplicative inverse of a series with a nonempty window:
    /// valuation `-v`, order `order - 2v`.
    fn invert(&self) -> Result<LSeries> {
        if self.is_zero_window() {
            return Err(Error::DivisionByZeroSeries);
        }
        let lead = self.coeffs[0].clone();
        let rel = (self.order - self.valuation) as usize;
        // Unit-part inverse: w_0 = 1, w_k = -Σ_{j=1..k} u_j w_{k-j} with
        // u_j = c_{v+j}/c_v.
        let mut w = vec![Rational::zero(); rel + 1];
        w[0] = Rational::one();
        for k in 1..=rel {
            let mut sum = Rational::zero();
            for j in 1..=k {
                let u = self.coeffs[j].checked_div(&lead).expect("nonzero leading coefficient");
                sum = sum + u * w[k - j].clone();
            }
            w[k] = -sum;
        }
        let coeffs = w
            .into_iter()
            .map(|c| c.checked_div(&lead).expect("nonzero leading coefficient"))
            .collect();
        Ok(LSeries::canonical(
            self.variable.clone(),
            -self.valuation,
            coeffs,
            self.order - 2 * self.valuation,
        ))
    }

    /// Quotient `q` with `q·b = a` on the provable window: valuation
    /// `v_a - v_b`, order `min(order_a - v_b, order_b - 2 v_b + v_a)`.
    ///
    /// `DivisionByZeroSeries` when the divisor window is empty.
    pub fn div(&self, other: &LSeries) -> Result<LSeries> {
        self.check_variable(other)?;
        self.mul(&other.invert()?)
    }

    /// Integer power: valuation `m·v`, order `order + (m-1)·v`. Negative `m`
    /// inverts first and requires a nonempty window.
    pub fn pow(&self, m: i64) -> Result<LSeries> {
        if m < 0 {
            return self.invert()?.pow(-m);
        }
        if self.is_zero_window() {
            if m == 0 {
                // Empty product: exactly 1, with a nominal window.
                return Ok(LSeries::one(&self.variable, self.order.max(0)));
            }
            return Ok(LSeries::zero(&self.variable, m * (self.order + 1) - 1));
        }
        let mut acc = LSeries::one(&self.variable, self.order - self.valuation);
        for _ in 0..m {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Truncates the window to a smaller order (no-op if already smaller).
    pub fn truncate(&self, order: i64) -> LSeries {
        if order >= self.order {
            return self.clone();
        }
        if self.valuation > order {
            return LSeries::zero(&self.variable, order);
        }
        let keep = (order - self.valuation + 1) as usize;
        LSeries::canonical(
            self.variable.clone(),
            self.valuation,
            self.coeffs[..keep].to_vec(),
            order,
        )
    }

    /// Composition `g(f) = Σ_n f^n [z^n] g`, truncated to the provable
    /// window (the minimum over the contributing term windows and the
    /// tail bound `v_f·(order_g + 1) - 1`).
    ///
    /// Requires `valuation(f) >= 1`; if `g` has negative-exponent terms the
    /// composition additionally requires `valuation(f) == 1` exactly, since
    /// Laurent composition is otherwise ill-defined.
    pub fn compose(&self, f: &LSeries) -> Result<LSeries> {
        self.check_variable(f)?;
        let vf = f.valuation;
        if vf < 1 {
            return Err(Error::CompositionValuation(alloc::format!(
                "inner series must have valuation >= 1, found {vf}"
            )));
        }
        if self.valuation < 0 && !self.is_zero_window() && (f.is_zero_window() || vf != 1) {
            return Err(Error::CompositionValuation(
                "negative-exponent outer series requires inner valuation exactly 1".into(),
            ));
        }
        let tail_bound = vf
            .checked_mul(self.order + 1)
            .and_then(|t| t.checked_sub(1))
            .expect("window arithmetic overflow");
        let mut acc = LSeries::zero(&self.variable, tail_bound);
        if self.is_zero_window() {
            return Ok(acc);
        }
        let mut power = f.pow(self.valuation)?;
        for (n, c) in self.window() {
            if !c.is_zero() {
                let term = if n == 0 {
                    // f^0 is exactly 1 regardless of f's window.
                    LSeries::monomial(&self.variable, 0, c.clone(), tail_bound)?
                } else {
                    power.scale(c)
                };
                acc = acc.add(&term)?;
            }
            if n < self.order {
                power = power.mul(f)?;
            }
        }
        Ok(acc)
    }

    /// `exp` of a series with zero constant term (valuation at least 1),
    /// by composition with the exponential power series.
    pub fn exp(&self) -> Result<LSeries> {
        if self.valuation < 1 {
            return Err(Error::CompositionValuation(alloc::format!(
                "exp requires a zero constant term and valuation >= 1, found valuation {}",
                self.valuation
            )));
        }
        let n = self.order;
        let exp_series = LSeries::from_terms(
            &self.variable,
            (0..=n).map(|k| {
                let inv_fact = Rational::one()
                    .checked_div(&factorial(k as u64))
                    .expect("factorial is nonzero");
                (k, inv_fact)
            }),
            n,
        )?;
        exp_series.compose(self)
    }

    /// `log` of a series with constant term exactly 1, by composition of
    /// `log(1+u)` with `self - 1`.
    pub fn log(&self) -> Result<LSeries> {
        let constant = self.coefficient_at(0).map_err(|_| {
            Error::CompositionValuation("log needs the constant term inside the window".into())
        })?;
        if self.valuation < 0 || !constant.is_one() {
            return Err(Error::CompositionValuation(
                "log requires constant term exactly 1".into(),
            ));
        }
        let n = self.order;
        let log_series = LSeries::from_terms(
            &self.variable,
            (1..=n.max(0)).map(|k| {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                (k, Rational::new(sign, 1) / Rational::from(k))
            }),
            n,
        )?;
        let shifted = self.sub(&LSeries::one(&self.variable, n))?;
        log_series.compose(&shifted)
    }

    /// Termwise derivative `n c_n z^{n-1}`; the window order drops by one.
    pub fn derivative(&self) -> LSeries {
        if self.is_zero_window() {
            return LSeries::zero(&self.variable, self.order - 1);
        }
        let coeffs = self
            .window()
            .map(|(n, c)| c * &Rational::from(n))
            .collect();
        LSeries::canonical(self.variable.clone(), self.valuation - 1, coeffs, self.order - 1)
    }

    /// The operator `z d/dz`: coefficient at `z^n` multiplied by `n`; the
    /// window is unchanged.
    pub fn theta(&self) -> LSeries {
        let coeffs = self
            .window()
            .map(|(n, c)| c * &Rational::from(n))
            .collect();
        LSeries::canonical(self.variable.clone(), self.valuation, coeffs, self.order)
    }

    /// The substitution `z -> c z` for nonzero `c`: coefficient at `z^n`
    /// multiplied by `c^n`.
    pub fn scale_var(&self, c: &Rational) -> Result<LSeries> {
        if c.is_zero() {
            return Err(Error::InvalidArgument("variable scale must be nonzero".into()));
        }
        let coeffs = self
            .window()
            .map(|(n, coeff)| Ok(coeff * &c.pow(n)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(LSeries::canonical(self.variable.clone(), self.valuation, coeffs, self.order))
    }

    fn subst_power_positive(&self, m: i64) -> LSeries {
        debug_assert!(m > 0);
        let order = m * (self.order + 1) - 1;
        if self.is_zero_window() {
            return LSeries::zero(&self.variable, order);
        }
        let valuation = m * self.valuation;
        let mut coeffs = vec![Rational::zero(); (order - valuation + 1) as usize];
        for (n, c) in self.window() {
            coeffs[(m * (n - self.valuation)) as usize] = c.clone();
        }
        LSeries::canonical(self.variable.clone(), valuation, coeffs, order)
    }

    /// The substitution `z -> z^m` for nonzero integer `m`. Positive `m`
    /// stays in the L family; negative `m` lands in the mirror R family.
    pub fn subst_power(&self, m: i64) -> Result<Substituted> {
        if m == 0 {
            return Err(Error::InvalidArgument("substitution power must be nonzero".into()));
        }
        if m > 0 {
            Ok(Substituted::L(self.subst_power_positive(m)))
        } else {
            Ok(Substituted::R(RSeries {
                mirrored: self.subst_power_positive(-m),
            }))
        }
    }

    /// The mirror `z -> 1/z` as an R-series.
    pub fn mirror(&self) -> RSeries {
        RSeries { mirrored: self.clone() }
    }

    /// True when the two series agree on every exponent of their common
    /// window (ignores the differing tails).
    pub fn agrees_on_common_window(&self, other: &LSeries) -> bool {
        if self.variable != other.variable {
            return false;
        }
        let order = self.order.min(other.order);
        let lo = self.valuation.min(other.valuation);
        (lo..=order).all(|n| {
            self.coefficient_at(n).expect("within window")
                == other.coefficient_at(n).expect("within window")
        })
    }
}

/// Writes `coeff·var^exp` terms joined by signs, for Display impls.
fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    variable: &str,
    terms: impl Iterator<Item = (i64, &'a Rational)>,
) -> core::result::Result<bool, fmt::Error> {
    let mut wrote_any = false;
    for (exp, coeff) in terms {
        if coeff.is_zero() {
            continue;
        }
        let neg = coeff.is_negative();
        let mag = coeff.abs();
        if !wrote_any {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if exp == 0 {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            if exp == 1 {
                write!(f, "{variable}")?;
            } else {
                write!(f, "{variable}^{exp}")?;
            }
        }
        wrote_any = true;
    }
    Ok(wrote_any)
}

impl fmt::Display for LSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrote = write_terms(f, &self.variable, self.window())?;
        if wrote {
            write!(f, " + ")?;
        }
        write!(f, "O({}^{})", self.variable, self.order + 1)
    }
}

impl fmt::Debug for LSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A reverse truncated Laurent series: finitely many positive exponents,
/// known exactly on `low_order ..= top`, unknown tail descending as
/// `O(z^{low_order - 1})`, exact zeros above `top`.
///
/// Stored as the mirror L-series under `z -> 1/z`.
#[derive(Clone, PartialEq, Eq)]
pub struct RSeries {
    mirrored: LSeries,
}

impl RSeries {
    /// Wraps an L-series `M` as the R-series `M(1/z)`.
    pub fn from_mirror(mirrored: LSeries) -> RSeries {
        RSeries { mirrored }
    }

    /// The mirror image `self(1/z)` as an L-series.
    pub fn mirror(&self) -> LSeries {
        self.mirrored.clone()
    }

    /// Builds an R-series from terms, known down to `low_order`. An exponent
    /// below `low_order` is an `InvalidArgument` error.
    pub fn from_terms(
        variable: &str,
        terms: impl IntoIterator<Item = (i64, Rational)>,
        low_order: i64,
    ) -> Result<RSeries> {
        let mirrored = LSeries::from_terms(
            variable,
            terms.into_iter().map(|(e, c)| (-e, c)),
            -low_order,
        )
        .map_err(|e| match e {
            Error::InvalidArgument(_) => Error::InvalidArgument(alloc::format!(
                "exponent below the window low order {low_order}"
            )),
            other => other,
        })?;
        Ok(RSeries { mirrored })
    }

    pub fn zero(variable: &str, low_order: i64) -> RSeries {
        RSeries { mirrored: LSeries::zero(variable, -low_order) }
    }

    pub fn variable(&self) -> &str {
        self.mirrored.variable()
    }

    /// Largest known-nonzero exponent; equals `low_order() - 1` for the
    /// zero-on-window series.
    pub fn top(&self) -> i64 {
        -self.mirrored.valuation()
    }

    pub fn low_order(&self) -> i64 {
        -self.mirrored.order()
    }

    pub fn is_zero_window(&self) -> bool {
        self.mirrored.is_zero_window()
    }

    /// The coefficient of `z^n`: zero above the top, stored value on the
    /// window, `InsufficientPrecision` below `low_order`.
    pub fn coefficient_at(&self, n: i64) -> Result<Rational> {
        self.mirrored.coefficient_at(-n)
    }

    /// The known window as `(exponent, coefficient)` pairs in descending
    /// exponent order.
    pub fn window(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.mirrored.window().map(|(e, c)| (-e, c))
    }

    pub fn poly_part(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.window().map(|(e, c)| (e, c.clone())))
    }

    pub fn add(&self, other: &RSeries) -> Result<RSeries> {
        Ok(RSeries { mirrored: self.mirrored.add(&other.mirrored)? })
    }

    pub fn neg(&self) -> RSeries {
        RSeries { mirrored: self.mirrored.neg() }
    }

    pub fn scale(&self, factor: &Rational) -> RSeries {
        RSeries { mirrored: self.mirrored.scale(factor) }
    }

    /// Product of two R-series (the mirror of the L-series product).
    pub fn mul(&self, other: &RSeries) -> Result<RSeries> {
        Ok(RSeries { mirrored: self.mirrored.mul(&other.mirrored)? })
    }
}

impl fmt::Display for RSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrote = write_terms(f, self.variable(), self.window())?;
        if wrote {
            write!(f, " + ")?;
        }
        write!(f, "O({}^{})", self.variable(), self.low_order() - 1)
    }
}

impl fmt::Debug for RSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn series(terms: &[(i64, i64)], order: i64) -> LSeries {
        LSeries::from_terms("z", terms.iter().map(|&(e, c)| (e, Rational::from(c))), order)
            .unwrap()
    }

    #[test]
    fn construction_and_canonical_form() {
        let s = series(&[(0, 1), (1, 1)], 5);
        assert_eq!(s.valuation(), 0);
        assert_eq!(s.order(), 5);
        assert_eq!(s.coefficient_at(0).unwrap(), r(1, 1));
        assert_eq!(s.coefficient_at(5).unwrap(), Rational::zero());

        let zero = series(&[], 3);
        assert!(zero.is_zero_window());
        assert_eq!(zero.valuation(), 4);

        let laurent = series(&[(-1, 1), (1, 2)], 2);
        assert_eq!(laurent.valuation(), -1);
        assert_eq!(laurent.coefficient_at(0).unwrap(), Rational::zero());
        assert_eq!(laurent.coefficient_at(-5).unwrap(), Rational::zero());
    }

    #[test]
    fn exponent_above_order_is_rejected() {
        let err = LSeries::from_terms("z", [(7, Rational::one())], 5);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn addition_and_inverses() {
        let a = series(&[(0, 1), (1, 1)], 6);
        let b = series(&[(0, 1), (1, -1)], 6);
        let sum = a.add(&b).unwrap();
        assert_eq!(sum, series(&[(0, 2)], 6));

        // A series plus its negation is the zero window.
        let g = LSeries::one("z", 8).div(&series(&[(0, 2), (1, -1)], 8)).unwrap();
        let cancelled = g.add(&g.neg()).unwrap();
        assert!(cancelled.is_zero_window());
    }

    #[test]
    fn addition_oracle() {
        // (1/2 + z/4 + z^2/8) + (1/2 - 3z/4), coefficientwise.
        let a = LSeries::from_terms("z", [(0, r(1, 2)), (1, r(1, 4)), (2, r(1, 8))], 4).unwrap();
        let b = LSeries::from_terms("z", [(0, r(1, 2)), (1, r(-3, 4))], 4).unwrap();
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.coefficient_at(0).unwrap(), r(1, 1));
        assert_eq!(sum.coefficient_at(1).unwrap(), r(-1, 2));
        assert_eq!(sum.coefficient_at(2).unwrap(), r(1, 8));
    }

    #[test]
    fn multiplication_windows() {
        let a = series(&[(0, 1), (1, 1)], 6);
        let b = series(&[(0, 1), (1, -1)], 6);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod, series(&[(0, 1), (2, -1)], 6));

        // Telescoping: (1-z)(1+z+...+z^N) = 1 on the provable window.
        let n = 8;
        let ones = LSeries::from_terms("z", (0..=n).map(|k| (k, Rational::one())), n).unwrap();
        let tele = b.truncate(n).mul(&ones).unwrap();
        assert_eq!(tele.coefficient_at(0).unwrap(), r(1, 1));
        for k in 1..=tele.order() {
            assert_eq!(tele.coefficient_at(k).unwrap(), Rational::zero());
        }
    }

    #[test]
    fn division_geometric() {
        // 1/(2-z) = 1/2 + z/4 + z^2/8 + z^3/16 + ...
        let q = LSeries::one("z", 6).div(&series(&[(0, 2), (1, -1)], 6)).unwrap();
        for k in 0..=6 {
            assert_eq!(q.coefficient_at(k).unwrap(), r(1, 1 << (k + 1)));
        }
        // Multiplying back by the denominator gives 1 on the window.
        let back = q.mul(&series(&[(0, 2), (1, -1)], 6)).unwrap();
        assert_eq!(back.coefficient_at(0).unwrap(), r(1, 1));
        for k in 1..=back.order() {
            assert_eq!(back.coefficient_at(k).unwrap(), Rational::zero());
        }
    }

    #[test]
    fn division_of_monomials() {
        let q = series(&[(2, 1)], 6).div(&series(&[(1, 1)], 6)).unwrap();
        assert_eq!(q.valuation(), 1);
        assert_eq!(q.coefficient_at(1).unwrap(), r(1, 1));
    }

    #[test]
    fn division_long_oracle() {
        // theta(F)/F for F = z + z^2 is (1+2z)/(1+z) = 1 + z - z^2 + z^3 - ...
        let f = series(&[(1, 1), (2, 1)], 8);
        let q = f.theta().div(&f).unwrap();
        let expected = [(0, 1), (1, 1), (2, -1), (3, 1), (4, -1), (5, 1)];
        for (e, c) in expected {
            assert_eq!(q.coefficient_at(e).unwrap(), Rational::from(c), "at exponent {e}");
        }
    }

    #[test]
    fn division_by_zero_series() {
        let zero = LSeries::zero("z", 5);
        assert_eq!(series(&[(0, 1)], 5).div(&zero), Err(Error::DivisionByZeroSeries));
    }

    #[test]
    fn powers_binomial() {
        let p = series(&[(0, 1), (1, 1)], 5).pow(3).unwrap();
        assert_eq!(p, series(&[(0, 1), (1, 3), (2, 3), (3, 1)], 5));
        assert_eq!(series(&[(0, 1), (1, 1)], 5).pow(0).unwrap(), LSeries::one("z", 5));
    }

    #[test]
    fn negative_power_shifts_valuation() {
        // (z - z^2)^{-3} = z^{-3} (1-z)^{-3} = z^-3 + 3z^-2 + 6z^-1 + 10 + 15z + ...
        let f = series(&[(1, 1), (2, -1)], 7);
        let p = f.pow(-3).unwrap();
        assert_eq!(p.valuation(), -3);
        let expected = [(-3, 1), (-2, 3), (-1, 6), (0, 10), (1, 15)];
        for (e, c) in expected {
            assert_eq!(p.coefficient_at(e).unwrap(), Rational::from(c), "at exponent {e}");
        }
        assert_eq!(LSeries::zero("z", 4).pow(-1), Err(Error::DivisionByZeroSeries));
    }

    #[test]
    fn composition_identity_and_monomial() {
        let g = series(&[(0, 2), (1, 5), (3, -1)], 6);
        let z = series(&[(1, 1)], 6);
        assert_eq!(g.compose(&z).unwrap(), g);

        // 1/(1-u) composed with z^2 is the geometric series in z^2.
        let geo = LSeries::one("z", 5).div(&series(&[(0, 1), (1, -1)], 5)).unwrap();
        let sq = geo.compose(&series(&[(2, 1)], 5)).unwrap();
        assert_eq!(sq.coefficient_at(0).unwrap(), r(1, 1));
        assert_eq!(sq.coefficient_at(1).unwrap(), Rational::zero());
        assert_eq!(sq.coefficient_at(2).unwrap(), r(1, 1));
        assert_eq!(sq.coefficient_at(4).unwrap(), r(1, 1));
    }

    #[test]
    fn composition_valuation_guards() {
        let g = series(&[(0, 1), (1, 1)], 4);
        let bad = series(&[(0, 1)], 4);
        assert!(matches!(g.compose(&bad), Err(Error::CompositionValuation(_))));

        let laurent_g = series(&[(-1, 1), (1, 1)], 4);
        let quadratic = series(&[(2, 1)], 4);
        assert!(matches!(
            laurent_g.compose(&quadratic),
            Err(Error::CompositionValuation(_))
        ));
        // ... but valuation exactly 1 is fine for Laurent outer series.
        assert!(laurent_g.compose(&series(&[(1, 1), (2, 1)], 4)).is_ok());
    }

    #[test]
    fn exp_of_zero_and_geometric_argument() {
        let zero = LSeries::zero("z", 4);
        assert_eq!(zero.exp().unwrap(), LSeries::one("z", 4));

        // exp(z/(1-z)) = 1 + z + 3/2 z^2 + 13/6 z^3 + 73/24 z^4 + ...
        let arg = series(&[(1, 1)], 4).div(&series(&[(0, 1), (1, -1)], 4)).unwrap();
        let e = arg.exp().unwrap();
        let expected = [r(1, 1), r(1, 1), r(3, 2), r(13, 6), r(73, 24)];
        for (k, want) in expected.into_iter().enumerate() {
            assert_eq!(e.coefficient_at(k as i64).unwrap(), want, "at exponent {k}");
        }
    }

    #[test]
    fn log_oracle_and_roundtrip() {
        // log(1+z) = z - z^2/2 + z^3/3 - ...
        let l = series(&[(0, 1), (1, 1)], 6).log().unwrap();
        for k in 1..=6i64 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(l.coefficient_at(k).unwrap(), r(sign, k), "at exponent {k}");
        }

        let a = series(&[(1, 1), (2, -2), (4, 3)], 7);
        let round = a.exp().unwrap().log().unwrap();
        assert!(round.agrees_on_common_window(&a));
    }

    #[test]
    fn exp_rejects_nonzero_constant_term() {
        assert!(matches!(
            series(&[(0, 1), (1, 1)], 4).exp(),
            Err(Error::CompositionValuation(_))
        ));
        assert!(matches!(
            series(&[(-1, 1)], 4).exp(),
            Err(Error::CompositionValuation(_))
        ));
    }

    #[test]
    fn derivative_and_theta() {
        let p = series(&[(0, 1), (1, 1), (2, 1)], 5);
        assert_eq!(p.derivative(), series(&[(0, 1), (1, 2)], 4));
        assert_eq!(series(&[(3, 1)], 5).theta(), series(&[(3, 3)], 5));

        let f = series(&[(1, 7), (2, 5), (3, -2)], 5);
        let t = f.theta();
        assert_eq!(t.coefficient_at(1).unwrap(), r(7, 1));
        assert_eq!(t.coefficient_at(2).unwrap(), r(10, 1));
        assert_eq!(t.coefficient_at(3).unwrap(), r(-6, 1));
    }

    #[test]
    fn scale_var_multiplies_by_powers() {
        let p = series(&[(0, 1), (1, 1), (2, 1)], 4);
        let scaled = p.scale_var(&r(2, 1)).unwrap();
        assert_eq!(scaled, series(&[(0, 1), (1, 2), (2, 4)], 4));
        assert_eq!(p.scale_var(&Rational::one()).unwrap(), p);
        assert!(p.scale_var(&Rational::zero()).is_err());

        // Negative exponents scale by inverse powers.
        let q = series(&[(-1, 4)], 3).scale_var(&r(2, 1)).unwrap();
        assert_eq!(q.coefficient_at(-1).unwrap(), r(2, 1));
    }

    #[test]
    fn subst_power_both_directions() {
        let p = series(&[(0, 1), (1, 1)], 4);
        let up = p.subst_power(2).unwrap().into_lseries().unwrap();
        assert_eq!(up.coefficient_at(0).unwrap(), r(1, 1));
        assert_eq!(up.coefficient_at(2).unwrap(), r(1, 1));
        assert_eq!(up.coefficient_at(1).unwrap(), Rational::zero());
        assert_eq!(up.order(), 9);

        let q = series(&[(0, 1), (1, 2), (2, 3)], 2);
        let down = q.subst_power(-1).unwrap().into_rseries().unwrap();
        assert_eq!(down.top(), 0);
        assert_eq!(down.coefficient_at(0).unwrap(), r(1, 1));
        assert_eq!(down.coefficient_at(-1).unwrap(), r(2, 1));
        assert_eq!(down.coefficient_at(-2).unwrap(), r(3, 1));

        // A palindrome is fixed by the mirror.
        let pal = series(&[(-1, 1), (0, 1), (1, 1)], 1);
        let m = pal.subst_power(-1).unwrap().into_rseries().unwrap();
        assert_eq!(m.coefficient_at(-1).unwrap(), r(1, 1));
        assert_eq!(m.coefficient_at(0).unwrap(), r(1, 1));
        assert_eq!(m.coefficient_at(1).unwrap(), r(1, 1));

        assert!(p.subst_power(0).is_err());
    }

    #[test]
    fn coefficient_outside_window_errors() {
        let p = series(&[(0, 1)], 5);
        assert!(matches!(
            p.coefficient_at(10),
            Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn variable_mismatch() {
        let a = series(&[(0, 1)], 3);
        let b = LSeries::one("w", 3);
        assert!(matches!(a.add(&b), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn display_format() {
        let q = LSeries::one("z", 3).div(&series(&[(0, 2), (1, -1)], 3)).unwrap();
        assert_eq!(
            alloc::format!("{q}"),
            "1/2 + 1/4 z + 1/8 z^2 + 1/16 z^3 + O(z^4)"
        );
        assert_eq!(alloc::format!("{}", LSeries::zero("z", 3)), "O(z^4)");
        let laurent = series(&[(-1, 1), (1, -1)], 2);
        assert_eq!(alloc::format!("{laurent}"), "z^-1 - z + O(z^3)");
    }

    #[test]
    fn rseries_window_and_display() {
        let f = RSeries::from_terms("z", [(1, Rational::one()), (0, Rational::one()), (-1, Rational::one())], -1)
            .unwrap();
        assert_eq!(f.top(), 1);
        assert_eq!(f.low_order(), -1);
        assert_eq!(f.coefficient_at(5).unwrap(), Rational::zero());
        assert!(f.coefficient_at(-2).is_err());
        assert_eq!(alloc::format!("{f}"), "z + 1 + z^-1 + O(z^-2)");
    }

    #[test]
    fn rseries_arithmetic_mirrors_lseries() {
        let a = RSeries::from_terms("z", [(2, r(1, 1)), (0, r(3, 1)), (-1, r(-2, 1))], -4)
            .unwrap();
        let b = RSeries::from_terms("z", [(1, r(2, 1)), (-2, r(1, 1))], -4).unwrap();

        let sum = a.add(&b).unwrap();
        assert_eq!(sum.coefficient_at(2).unwrap(), r(1, 1));
        assert_eq!(sum.coefficient_at(1).unwrap(), r(2, 1));
        assert_eq!(sum.coefficient_at(-2).unwrap(), r(1, 1));

        // (z^2 + 3 - 2/z)(2z + 1/z^2) has top exponent 3 with coefficient 2.
        let product = a.mul(&b).unwrap();
        assert_eq!(product.top(), 3);
        assert_eq!(product.coefficient_at(3).unwrap(), r(2, 1));
        assert_eq!(product.coefficient_at(1).unwrap(), r(6, 1));
        assert_eq!(product.coefficient_at(0).unwrap(), r(-3, 1));
        // Window: the mirror of the L-series product window formula.
        assert_eq!(product.low_order(), -2);
        assert!(product.coefficient_at(-3).is_err());

        // Mirroring the product equals the product of the mirrors.
        assert_eq!(product.mirror(), a.mirror().mul(&b.mirror()).unwrap());
    }

    #[test]
    fn poly_bracket_is_dot_product() {
        let f = LaurentPoly::from_terms([(2, r(1, 1)), (3, r(2, 1))]);
        let g = LaurentPoly::from_terms([(0, r(1, 1)), (2, r(3, 1)), (3, r(1, 1))]);
        assert_eq!(f.bracket(&g), r(5, 1));
        assert_eq!(f.bracket(&g), g.bracket(&f));
    }

    #[test]
    fn poly_theta_and_exponent_poly() {
        let p = LaurentPoly::from_terms([(-2, r(1, 1)), (0, r(5, 1)), (3, r(1, 1))]);
        let t = p.theta();
        assert_eq!(t.coeff(-2), r(-2, 1));
        assert_eq!(t.coeff(0), Rational::zero());
        assert_eq!(t.coeff(3), r(3, 1));

        // P(theta) with P(x) = 1 + x^2.
        let applied = p.apply_exponent_poly(&[r(1, 1), r(0, 1), r(1, 1)]);
        assert_eq!(applied.coeff(-2), r(5, 1));
        assert_eq!(applied.coeff(0), r(5, 1));
        assert_eq!(applied.coeff(3), r(10, 1));
    }
}
