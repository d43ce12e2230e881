//! Sparse bivariate series, subscripted brackets, monomial substitution, and
//! the classical identity drivers (Saalschütz, Dixon, Gessel–Stanton).
//!
//! A [`BiSeries`] in the ordered variable pair `(w, z)` is known exactly on
//! an exponent box: coefficients below either box minimum are exactly zero
//! (the bivariate analogue of an L-series valuation), coefficients inside
//! the box are stored sparsely, and coefficients beyond either maximum are
//! unknown. Operations return the maximal provable box, axis by axis, with
//! the same window formulas as the univariate case.
//!
//! Bracket test functions and substitution arguments are exact Laurent
//! polynomials; the drivers only ever substitute into finite objects, so
//! every identity check below is a finite exact computation.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::laurent::{LSeries, LaurentPoly};
use crate::rational::{binomial, factorial, Rational};

/// Exponent box `[min_w ..= max_w] × [min_z ..= max_z]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiBox {
    pub min_w: i64,
    pub max_w: i64,
    pub min_z: i64,
    pub max_z: i64,
}

impl BiBox {
    pub fn new(min_w: i64, max_w: i64, min_z: i64, max_z: i64) -> BiBox {
        BiBox { min_w, max_w, min_z, max_z }
    }

    fn contains(&self, (p, q): (i64, i64)) -> bool {
        (self.min_w..=self.max_w).contains(&p) && (self.min_z..=self.max_z).contains(&q)
    }
}

/// Selects one variable of the ordered pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BiVar {
    W,
    Z,
}

/// A bivariate series with finite sparse support inside an explicit
/// known-window box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    var_w: String,
    var_z: String,
    support: BTreeMap<(i64, i64), Rational>,
    bounds: BiBox,
}

impl BiSeries {
    /// Builds a series from `(exponent pair, coefficient)` terms; every
    /// exponent pair must lie inside the box.
    pub fn new(
        var_w: &str,
        var_z: &str,
        terms: impl IntoIterator<Item = ((i64, i64), Rational)>,
        bounds: BiBox,
    ) -> Result<BiSeries> {
        let mut support: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        for (point, coeff) in terms {
            if !bounds.contains(point) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "support point ({}, {}) outside the box",
                    point.0, point.1
                )));
            }
            let merged = match support.get(&point) {
                Some(existing) => existing + &coeff,
                None => coeff,
            };
            support.insert(point, merged);
        }
        support.retain(|_, c| !c.is_zero());
        Ok(BiSeries { var_w: var_w.to_string(), var_z: var_z.to_string(), support, bounds })
    }

    /// An exact bivariate Laurent polynomial: the box is the tight bounding
    /// box of the support.
    pub fn polynomial(
        var_w: &str,
        var_z: &str,
        terms: impl IntoIterator<Item = ((i64, i64), Rational)>,
    ) -> BiSeries {
        let mut support: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        for (point, coeff) in terms {
            let merged = match support.get(&point) {
                Some(existing) => existing + &coeff,
                None => coeff,
            };
            if merged.is_zero() {
                support.remove(&point);
            } else {
                support.insert(point, merged);
            }
        }
        let bounds = tight_bounds(&support);
        BiSeries { var_w: var_w.to_string(), var_z: var_z.to_string(), support, bounds }
    }

    pub fn zero(var_w: &str, var_z: &str, bounds: BiBox) -> BiSeries {
        BiSeries {
            var_w: var_w.to_string(),
            var_z: var_z.to_string(),
            support: BTreeMap::new(),
            bounds,
        }
    }

    pub fn one(var_w: &str, var_z: &str) -> BiSeries {
        BiSeries::polynomial(var_w, var_z, [((0, 0), Rational::one())])
    }

    pub fn variables(&self) -> (&str, &str) {
        (&self.var_w, &self.var_z)
    }

    pub fn bounds(&self) -> BiBox {
        self.bounds
    }

    /// Support as `((w exponent, z exponent), coefficient)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.support.iter()
    }

    pub fn is_zero_on_box(&self) -> bool {
        self.support.is_empty()
    }

    /// Enlarges the box maxima, asserting the series is an exact polynomial
    /// (every coefficient beyond the stored support is zero). Only sound for
    /// values built with [`BiSeries::polynomial`] or equal to such.
    pub fn pad_box(mut self, max_w: i64, max_z: i64) -> BiSeries {
        self.bounds.max_w = self.bounds.max_w.max(max_w);
        self.bounds.max_z = self.bounds.max_z.max(max_z);
        self
    }

    /// The coefficient at `(w^p, z^q)`: exactly zero below either box
    /// minimum, stored inside the box, unknown beyond either maximum.
    pub fn coefficient_at(&self, p: i64, q: i64) -> Result<Rational> {
        if p < self.bounds.min_w || q < self.bounds.min_z {
            return Ok(Rational::zero());
        }
        if p > self.bounds.max_w || q > self.bounds.max_z {
            return Err(Error::InsufficientPrecision(alloc::format!(
                "coefficient at ({p}, {q}) lies beyond the box maxima ({}, {})",
                self.bounds.max_w, self.bounds.max_z
            )));
        }
        Ok(self.support.get(&(p, q)).cloned().unwrap_or_default())
    }

    fn check_variables(&self, other: &BiSeries) -> Result<()> {
        if self.var_w != other.var_w || self.var_z != other.var_z {
            return Err(Error::VariableMismatch {
                left: alloc::format!("({}, {})", self.var_w, self.var_z),
                right: alloc::format!("({}, {})", other.var_w, other.var_z),
            });
        }
        Ok(())
    }

    /// Coefficientwise sum on the intersection of the known regions:
    /// box minima combine by `min`, maxima by `min`.
    pub fn add(&self, other: &BiSeries) -> Result<BiSeries> {
        self.check_variables(other)?;
        let bounds = BiBox {
            min_w: self.bounds.min_w.min(other.bounds.min_w),
            max_w: self.bounds.max_w.min(other.bounds.max_w),
            min_z: self.bounds.min_z.min(other.bounds.min_z),
            max_z: self.bounds.max_z.min(other.bounds.max_z),
        };
        let mut support = BTreeMap::new();
        for (point, coeff) in self.support.iter().chain(other.support.iter()) {
            if !bounds.contains(*point) {
                continue;
            }
            let merged = match support.get(point) {
                Some(existing) => existing + coeff,
                None => coeff.clone(),
            };
            support.insert(*point, merged);
        }
        support.retain(|_, c: &mut Rational| !c.is_zero());
        Ok(BiSeries { var_w: self.var_w.clone(), var_z: self.var_z.clone(), support, bounds })
    }

    pub fn neg(&self) -> BiSeries {
        BiSeries {
            var_w: self.var_w.clone(),
            var_z: self.var_z.clone(),
            support: self.support.iter().map(|(p, c)| (*p, -c)).collect(),
            bounds: self.bounds,
        }
    }

    pub fn sub(&self, other: &BiSeries) -> Result<BiSeries> {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &Rational) -> BiSeries {
        if factor.is_zero() {
            return BiSeries::zero(&self.var_w, &self.var_z, self.bounds);
        }
        BiSeries {
            var_w: self.var_w.clone(),
            var_z: self.var_z.clone(),
            support: self.support.iter().map(|(p, c)| (*p, c * factor)).collect(),
            bounds: self.bounds,
        }
    }

    /// Convolution on the maximal provable box: per axis, minima add and
    /// `max = min(max_a + min_b, max_b + min_a)`.
    pub fn mul(&self, other: &BiSeries) -> Result<BiSeries> {
        self.check_variables(other)?;
        let a = self.bounds;
        let b = other.bounds;
        let bounds = BiBox {
            min_w: a.min_w + b.min_w,
            max_w: (a.max_w + b.min_w).min(b.max_w + a.min_w),
            min_z: a.min_z + b.min_z,
            max_z: (a.max_z + b.min_z).min(b.max_z + a.min_z),
        };
        let mut support: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        for ((pa, qa), ca) in &self.support {
            for ((pb, qb), cb) in &other.support {
                let point = (pa + pb, qa + qb);
                if point.0 > bounds.max_w || point.1 > bounds.max_z {
                    continue;
                }
                let product = ca * cb;
                let merged = match support.get(&point) {
                    Some(existing) => existing + &product,
                    None => product,
                };
                support.insert(point, merged);
            }
        }
        support.retain(|_, c| !c.is_zero());
        Ok(BiSeries { var_w: self.var_w.clone(), var_z: self.var_z.clone(), support, bounds })
    }

    /// Product of two exact bivariate Laurent polynomials: plain support
    /// convolution with a tight bounding box. Both operands are interpreted
    /// as exact (nothing beyond their support), so no window clipping
    /// applies; use [`BiSeries::mul`] for truncated series.
    pub fn mul_exact(&self, other: &BiSeries) -> Result<BiSeries> {
        self.check_variables(other)?;
        let mut support: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        for ((pa, qa), ca) in &self.support {
            for ((pb, qb), cb) in &other.support {
                let point = (pa + pb, qa + qb);
                let product = ca * cb;
                let merged = match support.get(&point) {
                    Some(existing) => existing + &product,
                    None => product,
                };
                support.insert(point, merged);
            }
        }
        support.retain(|_, c| !c.is_zero());
        let bounds = tight_bounds(&support);
        Ok(BiSeries { var_w: self.var_w.clone(), var_z: self.var_z.clone(), support, bounds })
    }

    /// Power of an exact bivariate Laurent polynomial (see
    /// [`BiSeries::mul_exact`]).
    pub fn pow_exact(&self, exp: u32) -> Result<BiSeries> {
        let mut acc = BiSeries::one(&self.var_w, &self.var_z);
        for _ in 0..exp {
            acc = acc.mul_exact(self)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, exp: u32) -> Result<BiSeries> {
        let mut acc = BiSeries::one(&self.var_w, &self.var_z).pad_box(
            self.bounds.max_w - self.bounds.min_w,
            self.bounds.max_z - self.bounds.min_z,
        );
        for _ in 0..exp {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Reciprocal of a series with unit-anchored box (`min = (0,0)`) and a
    /// nonzero constant term, on the same box.
    fn invert_unit(&self) -> Result<BiSeries> {
        if self.bounds.min_w != 0 || self.bounds.min_z != 0 {
            return Err(Error::InvalidArgument(
                "unit division needs a box anchored at (0, 0) with no negative exponents".into(),
            ));
        }
        let lead = self.support.get(&(0, 0)).cloned().unwrap_or_default();
        if lead.is_zero() {
            return Err(Error::DivisionByZeroSeries);
        }
        // Graded triangular solve: every support offset of the divisor is
        // strictly positive, so each target point depends only on smaller ones.
        let mut inv: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        let mut points: Vec<(i64, i64)> = (0..=self.bounds.max_w)
            .flat_map(|p| (0..=self.bounds.max_z).map(move |q| (p, q)))
            .collect();
        points.sort_by_key(|&(p, q)| (p + q, p));
        for (p, q) in points {
            let mut acc = if (p, q) == (0, 0) { Rational::one() } else { Rational::zero() };
            for ((bp, bq), bc) in &self.support {
                if (*bp, *bq) == (0, 0) || *bp > p || *bq > q {
                    continue;
                }
                if let Some(prev) = inv.get(&(p - bp, q - bq)) {
                    acc = acc - bc * prev;
                }
            }
            let value = acc.checked_div(&lead)?;
            if !value.is_zero() {
                inv.insert((p, q), value);
            }
        }
        Ok(BiSeries {
            var_w: self.var_w.clone(),
            var_z: self.var_z.clone(),
            support: inv,
            bounds: self.bounds,
        })
    }

    /// Quotient by a series with nonzero constant term and box anchored at
    /// `(0, 0)`.
    pub fn div_unit(&self, other: &BiSeries) -> Result<BiSeries> {
        self.check_variables(other)?;
        self.mul(&other.invert_unit()?)
    }

    /// The substitution `w -> a·w^k z^l`, `z -> b·w^m z^n` on an exact
    /// bivariate Laurent polynomial: support point `(p, q)` maps to
    /// `(kp + mq, lp + nq)` with coefficient scaled by `a^p b^q`. Requires
    /// nonzero scales and `kn - lm != 0` (so the remap is injective).
    pub fn monomial_substitute(
        &self,
        matrix: (i64, i64, i64, i64),
        scales: (&Rational, &Rational),
    ) -> Result<BiSeries> {
        let (k, l, m, n) = matrix;
        let (a, b) = scales;
        if k * n - l * m == 0 {
            return Err(Error::InvalidArgument(
                "monomial substitution needs a nonsingular exponent matrix".into(),
            ));
        }
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidArgument("substitution scales must be nonzero".into()));
        }
        let mut support = BTreeMap::new();
        for ((p, q), c) in &self.support {
            let point = (k * p + m * q, l * p + n * q);
            let coeff = c * &(a.pow(*p)? * b.pow(*q)?);
            support.insert(point, coeff);
        }
        let bounds = tight_bounds(&support);
        Ok(BiSeries { var_w: self.var_w.clone(), var_z: self.var_z.clone(), support, bounds })
    }
}

fn tight_bounds(support: &BTreeMap<(i64, i64), Rational>) -> BiBox {
    if support.is_empty() {
        return BiBox::new(0, 0, 0, 0);
    }
    let mut bounds = BiBox::new(i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for (p, q) in support.keys() {
        bounds.min_w = bounds.min_w.min(*p);
        bounds.max_w = bounds.max_w.max(*p);
        bounds.min_z = bounds.min_z.min(*q);
        bounds.max_z = bounds.max_z.max(*q);
    }
    bounds
}

/// The bivariate bracket `Σ f_{m,n} g_{m,n}` of an exact Laurent polynomial
/// `f` (its stored support is its entirety) against a boxed series `g`.
///
/// Support points of `f` in `g`'s exact-zero region contribute nothing;
/// points beyond `g`'s box maxima are an `InsufficientPrecision` error.
pub fn bi_bracket(f: &BiSeries, g: &BiSeries) -> Result<Rational> {
    if f.variables() != g.variables() {
        return Err(Error::VariableMismatch {
            left: alloc::format!("({}, {})", f.var_w, f.var_z),
            right: alloc::format!("({}, {})", g.var_w, g.var_z),
        });
    }
    let mut sum = Rational::zero();
    for ((p, q), c) in &f.support {
        sum = sum + c * &g.coefficient_at(*p, *q)?;
    }
    Ok(sum)
}

/// Brackets out one variable only: for a univariate Laurent polynomial `f`
/// in the selected variable, returns `Σ_p f_p · (slice of g at exponent p)`
/// as an L-series in the remaining variable.
pub fn partial_bracket(f: &LaurentPoly, g: &BiSeries, var: BiVar) -> Result<LSeries> {
    let (sel_max, other_max, other_name) = match var {
        BiVar::W => (g.bounds.max_w, g.bounds.max_z, &g.var_z),
        BiVar::Z => (g.bounds.max_z, g.bounds.max_w, &g.var_w),
    };
    for (e, _) in f.iter() {
        if *e > sel_max {
            return Err(Error::InsufficientPrecision(alloc::format!(
                "partial bracket needs exponent {e} of the selected variable, box ends at {sel_max}"
            )));
        }
    }
    let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
    for ((p, q), c) in &g.support {
        let (sel, other) = match var {
            BiVar::W => (*p, *q),
            BiVar::Z => (*q, *p),
        };
        let weight = f.coeff(sel);
        if weight.is_zero() {
            continue;
        }
        let entry = coeffs.remove(&other).unwrap_or_default() + weight * c.clone();
        coeffs.insert(other, entry);
    }
    LSeries::from_terms(other_name, coeffs, other_max)
}

/// `(1/(n-m)!) · [z^n] U(z)^{n-m} e^{V(z)}`: the single-variable reduction
/// of the coefficient `[w^m z^n] e^{U(wz)/w + V(wz)}` used in random-graph
/// counting. Requires `U(0) = 0`; returns 0 when `n < m`.
pub fn random_graph_coeff(u: &LSeries, v: &LSeries, m: i64, n: i64) -> Result<Rational> {
    if m < 0 || n < 0 {
        return Err(Error::InvalidArgument("exponents must be nonnegative".into()));
    }
    if u.valuation() < 1 {
        return Err(Error::InvalidArgument("U must vanish at 0".into()));
    }
    if n < m {
        return Ok(Rational::zero());
    }
    let series = u.pow(n - m)?.mul(&v.exp()?)?;
    let coeff = series.coefficient_at(n)?;
    coeff.checked_div(&factorial((n - m) as u64))
}

/// Outcome of a Saalschütz identity check: the hypergeometric sum, the
/// middle bracket `[w^k z^l](1+w)^{m+l}(1+z)^{n+k}` expanded bivariately,
/// and the closed-form binomial product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaalschutzCheck {
    pub sum_side: Rational,
    pub bracket_side: Rational,
    pub product_side: Rational,
    pub equal: bool,
}

/// Checks Saalschütz's identity
/// `Σ_r C(m,k-r) C(n,l-r) C(m+n+r,r) = C(m+l,k) C(n+k,l)`
/// by three independent routes.
pub fn saalschutz(k: i64, l: i64, m: i64, n: i64) -> Result<SaalschutzCheck> {
    if k < 0 || l < 0 || m < 0 || n < 0 {
        return Err(Error::InvalidArgument("Saalschütz parameters must be nonnegative".into()));
    }
    let mut sum_side = Rational::zero();
    for r in 0..=k.min(l) {
        sum_side = sum_side + binomial(m, k - r) * binomial(n, l - r) * binomial(m + n + r, r);
    }

    // Both factors are exact polynomials, so padding their boxes to cover
    // the target coefficient is sound.
    let left = one_plus_var_pow("w", "z", BiVar::W, (m + l) as u32).pad_box(k, l);
    let right = one_plus_var_pow("w", "z", BiVar::Z, (n + k) as u32).pad_box(k, l);
    let bracket_side = left.mul(&right)?.coefficient_at(k, l)?;

    let product_side = binomial(m + l, k) * binomial(n + k, l);
    let equal = sum_side == bracket_side && bracket_side == product_side;
    Ok(SaalschutzCheck { sum_side, bracket_side, product_side, equal })
}

/// Outcome of a Dixon identity check: the bracket coefficient, the
/// alternating binomial sum, and the factorial closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DixonCheck {
    pub bracket_side: Rational,
    pub sum_side: Rational,
    pub closed_form: Rational,
    pub all_equal: bool,
}

/// Checks Dixon's identity
/// `[w^{l+n} z^{m+n}] (w-z)^{l+m}/(1-wz)^{l+m+1}
///    = Σ_k (-1)^{k+m} C(l+m,k+m) C(m+n,k+n) C(n+l,k+l)
///    = (-1)^m (l+m+n)!/(l! m! n!)`
/// by three independent routes.
pub fn dixon(l: i64, m: i64, n: i64) -> Result<DixonCheck> {
    if l < 0 || m < 0 || n < 0 {
        return Err(Error::InvalidArgument("Dixon parameters must be nonnegative".into()));
    }
    let target = (l + n, m + n);
    let numerator = w_minus_z_pow("w", "z", (l + m) as u32)
        .pad_box(target.0.max(l + m), target.1.max(l + m));
    let diag = diagonal_geometric_pow("w", "z", (l + m + 1) as u32, target.0, target.1);
    let bracket_side = numerator.mul(&diag)?.coefficient_at(target.0, target.1)?;

    let mut sum_side = Rational::zero();
    for k in -m..=l {
        let sign = if (k + m) % 2 == 0 { Rational::one() } else { -Rational::one() };
        sum_side = sum_side
            + sign * binomial(l + m, k + m) * binomial(m + n, k + n) * binomial(n + l, k + l);
    }

    let sign = if m % 2 == 0 { Rational::one() } else { -Rational::one() };
    let closed_form = sign * factorial((l + m + n) as u64)
        / (factorial(l as u64) * factorial(m as u64) * factorial(n as u64));

    let all_equal = bracket_side == sum_side && sum_side == closed_form;
    Ok(DixonCheck { bracket_side, sum_side, closed_form, all_equal })
}

/// `(1+w)^p` or `(1+z)^p` as an exact bivariate polynomial.
fn one_plus_var_pow(var_w: &str, var_z: &str, var: BiVar, p: u32) -> BiSeries {
    BiSeries::polynomial(
        var_w,
        var_z,
        (0..=p as i64).map(|i| {
            let point = match var {
                BiVar::W => (i, 0),
                BiVar::Z => (0, i),
            };
            (point, binomial(p as i64, i))
        }),
    )
}

/// `(w-z)^r` as an exact bivariate polynomial.
fn w_minus_z_pow(var_w: &str, var_z: &str, r: u32) -> BiSeries {
    let r = r as i64;
    BiSeries::polynomial(
        var_w,
        var_z,
        (0..=r).map(|i| {
            let sign = if (r - i) % 2 == 0 { Rational::one() } else { -Rational::one() };
            ((i, r - i), sign * binomial(r, i))
        }),
    )
}

/// The expansion of `1/(1-wz)^t` on the box `(max_w, max_z)`:
/// `Σ_j C(j+t-1, t-1) (wz)^j`.
fn diagonal_geometric_pow(var_w: &str, var_z: &str, t: u32, max_w: i64, max_z: i64) -> BiSeries {
    let top = max_w.min(max_z).max(0);
    BiSeries::new(
        var_w,
        var_z,
        (0..=top).map(|j| ((j, j), binomial(j + t as i64 - 1, t as i64 - 1))),
        BiBox::new(0, max_w.max(0), 0, max_z.max(0)),
    )
    .expect("diagonal support lies inside the box")
}

/// The factored family `G(w,z) = (1+w)^p (1+z)^q (w-z)^r / (1-wz)^s` used by
/// the Gessel–Stanton checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GsFactors {
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub s: u32,
}

/// Outcome of a Gessel–Stanton transformation check: both sides of
/// `[w^k z^l] G/(1-wz) = [w^k z^l (1+1/z)^k (1+1/w)^l] G(w/(1+z), z/(1+w))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

/// Shared expansions for repeated Gessel–Stanton checks on one box: the
/// substituted factors and their powers are cached, so grid sweeps only pay
/// for the final brackets.
pub struct GesselStantonEvaluator {
    var_w: String,
    var_z: String,
    max_w: i64,
    max_z: i64,
    one_plus_x: BiSeries,
    one_plus_y: BiSeries,
    x_minus_y: BiSeries,
    diag_subst_inv: BiSeries,
    rhs_cache: BTreeMap<(u32, u32, u32, u32), BiSeries>,
    lhs_cache: BTreeMap<(u32, u32, u32, u32), BiSeries>,
}

impl GesselStantonEvaluator {
    pub fn new(var_w: &str, var_z: &str, max_w: i64, max_z: i64) -> Result<GesselStantonEvaluator> {
        if max_w < 0 || max_z < 0 {
            return Err(Error::InvalidArgument("box maxima must be nonnegative".into()));
        }
        let one = BiSeries::one(var_w, var_z).pad_box(max_w, max_z);
        let w = BiSeries::polynomial(var_w, var_z, [((1, 0), Rational::one())])
            .pad_box(max_w, max_z);
        let z = BiSeries::polynomial(var_w, var_z, [((0, 1), Rational::one())])
            .pad_box(max_w, max_z);
        let inv_one_plus_w = one.add(&w)?.invert_unit()?;
        let inv_one_plus_z = one.add(&z)?.invert_unit()?;
        // x = w/(1+z), y = z/(1+w)
        let x = w.mul(&inv_one_plus_z)?;
        let y = z.mul(&inv_one_plus_w)?;
        let one_plus_x = one.add(&x)?;
        let one_plus_y = one.add(&y)?;
        let x_minus_y = x.sub(&y)?;
        // 1 - wz/((1+w)(1+z)) = 1 - x·y
        let diag_subst_inv = one.sub(&x.mul(&y)?)?.invert_unit()?;
        Ok(GesselStantonEvaluator {
            var_w: var_w.to_string(),
            var_z: var_z.to_string(),
            max_w,
            max_z,
            one_plus_x,
            one_plus_y,
            x_minus_y,
            diag_subst_inv,
            rhs_cache: BTreeMap::new(),
            lhs_cache: BTreeMap::new(),
        })
    }

    /// `G/(1-wz)` expanded on the box.
    fn lhs_series(&mut self, g: GsFactors) -> Result<BiSeries> {
        let key = (g.p, g.q, g.r, g.s);
        if let Some(cached) = self.lhs_cache.get(&key) {
            return Ok(cached.clone());
        }
        let pw = one_plus_var_pow(&self.var_w, &self.var_z, BiVar::W, g.p)
            .pad_box(self.max_w, self.max_z);
        let pz = one_plus_var_pow(&self.var_w, &self.var_z, BiVar::Z, g.q)
            .pad_box(self.max_w, self.max_z);
        let diff = w_minus_z_pow(&self.var_w, &self.var_z, g.r)
            .pad_box(self.max_w.max(g.r as i64), self.max_z.max(g.r as i64));
        let diag =
            diagonal_geometric_pow(&self.var_w, &self.var_z, g.s + 1, self.max_w, self.max_z);
        let series = pw.mul(&pz)?.mul(&diff)?.mul(&diag)?;
        self.lhs_cache.insert(key, series.clone());
        Ok(series)
    }

    /// `G(w/(1+z), z/(1+w))` expanded on the box.
    fn rhs_series(&mut self, g: GsFactors) -> Result<BiSeries> {
        let key = (g.p, g.q, g.r, g.s);
        if let Some(cached) = self.rhs_cache.get(&key) {
            return Ok(cached.clone());
        }
        let series = self
            .one_plus_x
            .pow(g.p)?
            .mul(&self.one_plus_y.pow(g.q)?)?
            .mul(&self.x_minus_y.pow(g.r)?)?
            .mul(&self.diag_subst_inv.pow(g.s)?)?;
        self.rhs_cache.insert(key, series.clone());
        Ok(series)
    }

    /// Evaluates both sides for the monomial test function `w^k z^l`.
    pub fn check(&mut self, k: i64, l: i64, g: GsFactors) -> Result<GsCheck> {
        if k < 0 || l < 0 {
            return Err(Error::InvalidArgument("monomial exponents must be nonnegative".into()));
        }
        let lhs = self.lhs_series(g)?.coefficient_at(k, l)?;

        // F substituted: w^k z^l (1 + 1/z)^k (1 + 1/w)^l, a finite Laurent
        // polynomial.
        let f_subst = BiSeries::polynomial(
            &self.var_w,
            &self.var_z,
            (0..=k).flat_map(|i| {
                (0..=l).map(move |j| ((k - j, l - i), binomial(k, i) * binomial(l, j)))
            }),
        );
        let rhs = bi_bracket(&f_subst, &self.rhs_series(g)?)?;
        let equal = lhs == rhs;
        Ok(GsCheck { lhs, rhs, equal })
    }
}

/// One-shot Gessel–Stanton check of `[w^k z^l] G/(1-wz)` against the
/// substituted side, expanding on the box `(max_w, max_z)`.
pub fn gessel_stanton_check(
    k: i64,
    l: i64,
    g: GsFactors,
    max_w: i64,
    max_z: i64,
) -> Result<GsCheck> {
    GesselStantonEvaluator::new("w", "z", max_w, max_z)?.check(k, l, g)
}
