//! Region-dependent expansion of factored rational functions.
//!
//! A rational function analytic on an annulus `inner < |z| < outer` has a
//! unique two-sided coefficient stream there, and the stream genuinely
//! depends on the annulus: `1/(2-z)` is `1/2 + z/4 + z^2/8 + ...` for
//! `|z| < 2` but `-z^{-1} - 2z^{-2} - 4z^{-3} - ...` for `|z| > 2`.
//!
//! The expansion is computed by exact partial fractions over the rationals:
//! each simple-pole term `1/(z-r)` is expanded as `-(1/r)(1 + z/r + ...)`
//! when the pole lies on or outside the outer radius, and as
//! `z^{-1}(1 + r/z + ...)` when it lies on or inside the inner radius;
//! higher multiplicities follow by differentiating these. Every coefficient
//! has an exact closed form, so queries need no truncation window.
//!
//! Region-dependent readings are the reason the bracket API refuses
//! ascending sums: a sum `g_n + g_{n+1} + ...` taken from the `|z| < 1`
//! expansion of `z^n/(1-z)` sometimes gives the right answer (see the
//! `lucky_rightward_sum` test for the classic instance with `(1-z)^2`) and
//! sometimes a contradiction (the constant term of `-z/(1-z)` is 0 or 1
//! depending on the annulus). This module is the one place where such
//! readings are available, each one pinned to an explicit annulus.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::rational::{binomial, Rational};

/// A rational function `scale · z^shift · numerator(z) / Π (z - rootᵢ)^mᵢ`
/// with rational coefficients and nonzero rational pole roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredRational {
    numerator: LaurentPoly,
    poles: Vec<(Rational, u32)>,
    shift: i64,
    scale: Rational,
}

impl FactoredRational {
    pub fn new(
        numerator: LaurentPoly,
        poles: Vec<(Rational, u32)>,
        shift: i64,
        scale: Rational,
    ) -> Result<FactoredRational> {
        if scale.is_zero() {
            return Err(Error::InvalidArgument("scale must be nonzero".into()));
        }
        for (i, (root, mult)) in poles.iter().enumerate() {
            if root.is_zero() {
                return Err(Error::InvalidArgument(
                    "pole roots must be nonzero (powers of z go in the monomial shift)".into(),
                ));
            }
            if *mult == 0 {
                return Err(Error::InvalidArgument("pole multiplicity must be >= 1".into()));
            }
            if poles[..i].iter().any(|(other, _)| other == root) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "duplicate pole root {root}"
                )));
            }
        }
        Ok(FactoredRational { numerator, poles, shift, scale })
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn poles(&self) -> &[(Rational, u32)] {
        &self.poles
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    /// The denominator `Π (z - rootᵢ)^mᵢ` as a Laurent polynomial.
    pub fn denominator_poly(&self) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for (root, mult) in &self.poles {
            let factor = LaurentPoly::from_terms([(1, Rational::one()), (0, -root)]);
            acc = acc.mul(&factor.pow(*mult));
        }
        acc
    }
}

/// An open annulus `inner < |z| < outer` (`outer = None` means infinity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusSpec {
    inner: Rational,
    outer: Option<Rational>,
}

impl AnnulusSpec {
    pub fn new(inner: Rational, outer: Option<Rational>) -> Result<AnnulusSpec> {
        if inner.is_negative() {
            return Err(Error::InvalidArgument("inner radius must be >= 0".into()));
        }
        if let Some(outer) = &outer {
            if &inner >= outer {
                return Err(Error::InvalidAnnulus);
            }
        }
        Ok(AnnulusSpec { inner, outer })
    }

    pub fn inner(&self) -> &Rational {
        &self.inner
    }

    /// `None` encodes an unbounded outer radius.
    pub fn outer(&self) -> Option<&Rational> {
        self.outer.as_ref()
    }

    /// Which side of the annulus a pole falls on: `|root| <= inner` is
    /// inside, `|root| >= outer` is outside, strictly between is an error
    /// (the function is not analytic on the annulus).
    fn classify(&self, root: &Rational) -> Result<Side> {
        let mag = root.abs();
        if mag <= self.inner {
            return Ok(Side::Inside);
        }
        match &self.outer {
            Some(outer) if &mag >= outer => Ok(Side::Outside),
            None => Err(Error::PoleInAnnulus { root: root.clone() }),
            Some(_) => Err(Error::PoleInAnnulus { root: root.clone() }),
        }
    }
}

/// Which side of the annulus a pole sits on, which decides the direction of
/// its geometric expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `|root| <= inner`: expands into negative powers of `z`.
    Inside,
    /// `|root| >= outer`: expands into nonnegative powers of `z`.
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct PoleTerm {
    root: Rational,
    /// Denominator power `j` of this partial-fraction term `c/(z-root)^j`.
    power: u32,
    coeff: Rational,
    side: Side,
}

/// A factored rational function resolved against an annulus: the exact
/// partial-fraction terms plus each pole's expansion side. Coefficient
/// queries are closed-form and valid for every integer exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleExpansion {
    source: FactoredRational,
    annulus: AnnulusSpec,
    /// Quotient of the polynomial division `numerator / denominator`.
    quotient: Vec<Rational>,
    terms: Vec<PoleTerm>,
    /// Overall monomial factor: source shift plus the numerator's lowest
    /// exponent (the dense numerator used for division starts at z^0).
    monomial_shift: i64,
}

impl DoubleExpansion {
    pub fn source(&self) -> &FactoredRational {
        &self.source
    }

    pub fn annulus(&self) -> &AnnulusSpec {
        &self.annulus
    }

    /// The exact coefficient of `z^n` in the expansion valid on the annulus.
    pub fn coefficient(&self, n: i64) -> Rational {
        let e = n - self.monomial_shift;
        let mut acc = if (0..self.quotient.len() as i64).contains(&e) {
            self.quotient[e as usize].clone()
        } else {
            Rational::zero()
        };
        for term in &self.terms {
            let j = term.power as i64;
            let contribution = match term.side {
                Side::Outside if e >= 0 => {
                    // 1/(z-r)^j = (-1)^j r^{-j} Σ_e C(e+j-1, j-1) (z/r)^e
                    let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
                    sign * binomial(e + j - 1, j - 1)
                        * term.root.pow(-j - e).expect("nonzero root")
                }
                Side::Inside if e <= -j => {
                    // 1/(z-r)^j = z^{-j} Σ_k C(k+j-1, j-1) (r/z)^k
                    binomial(-e - 1, j - 1) * term.root.pow(-e - j).expect("nonzero root")
                }
                _ => continue,
            };
            acc = acc + &term.coeff * &contribution;
        }
        &self.source.scale * &acc
    }
}

/// Resolves a factored rational function against an annulus: classifies the
/// poles, computes the exact partial-fraction decomposition, and returns the
/// queryable two-sided expansion.
pub fn expand_in_annulus(f: &FactoredRational, a: &AnnulusSpec) -> Result<DoubleExpansion> {
    let sides: Vec<Side> = f
        .poles
        .iter()
        .map(|(root, _)| a.classify(root))
        .collect::<Result<_>>()?;

    // Dense numerator with its lowest exponent factored into the shift.
    let (num_dense, num_min) = match (f.numerator.min_exp(), f.numerator.max_exp()) {
        (Some(min), Some(max)) => {
            let mut dense = vec![Rational::zero(); (max - min + 1) as usize];
            for (e, c) in f.numerator.iter() {
                dense[(e - min) as usize] = c.clone();
            }
            (dense, min)
        }
        _ => (Vec::new(), 0),
    };

    let mut denominator = vec![Rational::one()];
    for (root, mult) in &f.poles {
        for _ in 0..*mult {
            denominator = poly_mul(&denominator, &[-root, Rational::one()]);
        }
    }

    let (quotient, remainder) = poly_divrem(&num_dense, &denominator);

    let mut terms = Vec::new();
    for (index, (root, mult)) in f.poles.iter().enumerate() {
        // Cofactor: the denominator with this pole's factor removed.
        let mut cofactor = vec![Rational::one()];
        for (other_index, (other_root, other_mult)) in f.poles.iter().enumerate() {
            if other_index == index {
                continue;
            }
            for _ in 0..*other_mult {
                cofactor = poly_mul(&cofactor, &[-other_root, Rational::one()]);
            }
        }
        // Taylor-expand remainder/cofactor at z = root to order mult-1:
        // remainder/denominator = Σ_k t_k (z-root)^{k-mult}, so the term
        // with denominator power j has coefficient t_{mult-j}.
        let shifted_num = poly_taylor_shift(&remainder, root);
        let shifted_den = poly_taylor_shift(&cofactor, root);
        let t = series_div_prefix(&shifted_num, &shifted_den, *mult as usize)?;
        for j in 1..=*mult {
            let coeff = t[(*mult - j) as usize].clone();
            if coeff.is_zero() {
                continue;
            }
            terms.push(PoleTerm {
                root: root.clone(),
                power: j,
                coeff,
                side: sides[index],
            });
        }
    }

    Ok(DoubleExpansion {
        source: f.clone(),
        annulus: a.clone(),
        quotient,
        terms,
        monomial_shift: f.shift + num_min,
    })
}

// Dense polynomial helpers (index = degree).

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(ca * cb);
        }
    }
    poly_trim(out)
}

/// Euclidean division `num = q·den + r` with `deg r < deg den`.
fn poly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let den = poly_trim(den.to_vec());
    assert!(!den.is_empty(), "zero denominator polynomial");
    let mut rem = poly_trim(num.to_vec());
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - den.len() + 1];
    let lead = den.last().expect("nonempty").clone();
    while rem.len() >= den.len() {
        let degree_gap = rem.len() - den.len();
        let factor = rem.last().expect("nonempty") / &lead;
        quot[degree_gap] = factor.clone();
        for (i, c) in den.iter().enumerate() {
            rem[degree_gap + i] = &rem[degree_gap + i] - &(c * &factor);
        }
        rem = poly_trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    (quot, rem)
}

/// Coefficients of `p(root + u)` as a polynomial in `u` (Taylor shift).
fn poly_taylor_shift(p: &[Rational], root: &Rational) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(p.len());
    for c in p.iter().rev() {
        // out := out * (u + root) + c
        let mut next = vec![Rational::zero(); out.len() + 1];
        for (k, v) in out.iter().enumerate() {
            next[k + 1] = &next[k + 1] + v;
            next[k] = &next[k] + &(v * root);
        }
        if next.is_empty() {
            next.push(Rational::zero());
        }
        next[0] = &next[0] + c;
        out = next;
    }
    out
}

/// First `k` coefficients of the power-series quotient `num/den`
/// (`den[0] != 0` required).
fn series_div_prefix(num: &[Rational], den: &[Rational], k: usize) -> Result<Vec<Rational>> {
    let lead = den.first().cloned().unwrap_or_default();
    if lead.is_zero() {
        return Err(Error::DivisionByZeroSeries);
    }
    let mut out = vec![Rational::zero(); k];
    for i in 0..k {
        let mut acc = num.get(i).cloned().unwrap_or_default();
        for j in 1..=i {
            if let Some(dj) = den.get(j) {
                acc = acc - dj * &out[i - j];
            }
        }
        out[i] = acc.checked_div(&lead)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// `1/(2-z) = -1/(z-2)`
    fn one_over_two_minus_z() -> FactoredRational {
        FactoredRational::new(
            LaurentPoly::constant(-Rational::one()),
            vec![(r(2, 1), 1)],
            0,
            Rational::one(),
        )
        .unwrap()
    }

    /// `1/(2-z) + 1/(2-1/z) = (z^2-4z+1) / (2 (z-2)(z-1/2))`
    fn two_sided_example() -> FactoredRational {
        FactoredRational::new(
            LaurentPoly::from_terms([(2, r(1, 1)), (1, r(-4, 1)), (0, r(1, 1))]),
            vec![(r(2, 1), 1), (r(1, 2), 1)],
            0,
            r(1, 2),
        )
        .unwrap()
    }

    /// `-z/(1-z) = z/(z-1)`
    fn paradox_function() -> FactoredRational {
        FactoredRational::new(
            LaurentPoly::monomial(1, Rational::one()),
            vec![(Rational::one(), 1)],
            0,
            Rational::one(),
        )
        .unwrap()
    }

    fn annulus(inner: Rational, outer: Option<Rational>) -> AnnulusSpec {
        AnnulusSpec::new(inner, outer).unwrap()
    }

    #[test]
    fn geometric_inside_disk() {
        let e = expand_in_annulus(&one_over_two_minus_z(), &annulus(r(0, 1), Some(r(2, 1))))
            .unwrap();
        for n in 0..8 {
            assert_eq!(e.coefficient(n), r(1, 1 << (n + 1)), "at exponent {n}");
        }
        for n in -5..0 {
            assert_eq!(e.coefficient(n), Rational::zero(), "at exponent {n}");
        }
    }

    #[test]
    fn geometric_outside_disk() {
        let e = expand_in_annulus(&one_over_two_minus_z(), &annulus(r(2, 1), None)).unwrap();
        assert_eq!(e.coefficient(-1), r(-1, 1));
        assert_eq!(e.coefficient(-2), r(-2, 1));
        assert_eq!(e.coefficient(-3), r(-4, 1));
        assert_eq!(e.coefficient(-4), r(-8, 1));
        for n in 0..5 {
            assert_eq!(e.coefficient(n), Rational::zero(), "at exponent {n}");
        }
    }

    #[test]
    fn three_expansions_of_the_symmetric_function() {
        let f = two_sided_example();

        // |z| < 1/2: 1/2 + (1/4 - 1) z + (1/8 - 2) z^2 + (1/16 - 4) z^3 + ...
        let inner = expand_in_annulus(&f, &annulus(r(0, 1), Some(r(1, 2)))).unwrap();
        assert_eq!(inner.coefficient(0), r(1, 2));
        assert_eq!(inner.coefficient(1), r(1, 4) - r(1, 1));
        assert_eq!(inner.coefficient(2), r(1, 8) - r(2, 1));
        assert_eq!(inner.coefficient(3), r(1, 16) - r(4, 1));
        assert_eq!(inner.coefficient(-1), Rational::zero());

        // 1/2 < |z| < 2: palindromic, ... + 1/8 z^-2 + 1/4 z^-1 + 1 + 1/4 z + 1/8 z^2 + ...
        let middle = expand_in_annulus(&f, &annulus(r(1, 2), Some(r(2, 1)))).unwrap();
        assert_eq!(middle.coefficient(0), r(1, 1));
        for n in 1..6 {
            assert_eq!(middle.coefficient(n), r(1, 1 << (n + 1)), "at exponent {n}");
            assert_eq!(middle.coefficient(-n), middle.coefficient(n), "palindrome at {n}");
        }

        // |z| > 2: the mirror of the inner expansion.
        let outer = expand_in_annulus(&f, &annulus(r(2, 1), None)).unwrap();
        assert_eq!(outer.coefficient(0), r(1, 2));
        for n in 1..6 {
            assert_eq!(outer.coefficient(-n), inner.coefficient(n), "mirror at {n}");
            assert_eq!(outer.coefficient(n), Rational::zero());
        }
    }

    #[test]
    fn paradox_constant_terms_differ_by_region() {
        let f = paradox_function();
        let small = expand_in_annulus(&f, &annulus(r(0, 1), Some(r(1, 1)))).unwrap();
        let large = expand_in_annulus(&f, &annulus(r(1, 1), None)).unwrap();
        assert_eq!(small.coefficient(0), Rational::zero());
        assert_eq!(large.coefficient(0), Rational::one());

        // For |z| < 1 the function is -z - z^2 - ...; for |z| > 1 it is
        // 1 + z^-1 + z^-2 + ...
        assert_eq!(small.coefficient(1), r(-1, 1));
        assert_eq!(small.coefficient(2), r(-1, 1));
        assert_eq!(large.coefficient(-1), r(1, 1));
        assert_eq!(large.coefficient(1), Rational::zero());
    }

    #[test]
    fn lucky_rightward_sum() {
        // The ascending reading of [z^n/(1-z)] applied to (1-z)^2 happens to
        // give the right answer: the sum g_n + g_{n+1} + ... of the
        // coefficients of (1-z)^2 equals the coefficient of z^n in z^2 - z,
        // nonzero only for n = 1 and n = 2. The bracket API still refuses
        // this reading, because the same move produces the contradiction in
        // `paradox_constant_terms_differ_by_region`.
        let g = [r(1, 1), r(-2, 1), r(1, 1)];
        let target = |n: i64| match n {
            1 => r(-1, 1),
            2 => r(1, 1),
            _ => Rational::zero(),
        };
        for n in 0..=4i64 {
            let mut tail_sum = Rational::zero();
            for (k, coeff) in g.iter().enumerate() {
                if k as i64 >= n {
                    tail_sum = tail_sum + coeff.clone();
                }
            }
            assert_eq!(tail_sum, target(n), "at n={n}");
        }
    }

    #[test]
    fn pole_strictly_inside_is_rejected() {
        let f = one_over_two_minus_z();
        let err = expand_in_annulus(&f, &annulus(r(1, 1), Some(r(3, 1))));
        assert_eq!(err.unwrap_err(), Error::PoleInAnnulus { root: r(2, 1) });
        let err = expand_in_annulus(&f, &annulus(r(1, 1), None));
        assert_eq!(err.unwrap_err(), Error::PoleInAnnulus { root: r(2, 1) });
    }

    #[test]
    fn invalid_annulus_bounds() {
        assert_eq!(
            AnnulusSpec::new(r(2, 1), Some(r(2, 1))).unwrap_err(),
            Error::InvalidAnnulus
        );
        assert_eq!(
            AnnulusSpec::new(r(3, 1), Some(r(2, 1))).unwrap_err(),
            Error::InvalidAnnulus
        );
        assert!(matches!(
            AnnulusSpec::new(r(-1, 1), None).unwrap_err(),
            Error::InvalidArgument(_)
        ));
    }

    #[test]
    fn nested_annuli_agree_when_classification_matches() {
        let f = two_sided_example();
        let wide = expand_in_annulus(&f, &annulus(r(1, 2), Some(r(2, 1)))).unwrap();
        let narrow = expand_in_annulus(&f, &annulus(r(3, 4), Some(r(3, 2)))).unwrap();
        for n in -10..=10 {
            assert_eq!(wide.coefficient(n), narrow.coefficient(n), "at exponent {n}");
        }
    }

    #[test]
    fn multiplying_back_recovers_the_numerator() {
        // Includes a double pole and a monomial shift.
        let f = FactoredRational::new(
            LaurentPoly::from_terms([(-1, r(3, 1)), (0, r(1, 1)), (2, r(-2, 1))]),
            vec![(r(1, 1), 2), (r(-3, 1), 1)],
            -2,
            r(5, 3),
        )
        .unwrap();
        let den = f.denominator_poly();
        let deg = den.max_exp().unwrap();
        let n = 12i64;
        for a in [annulus(r(3, 1), None), annulus(r(0, 1), Some(r(1, 1)))] {
            let e = expand_in_annulus(&f, &a).unwrap();
            // (expansion · denominator) must reproduce scale·z^shift·numerator
            // wherever all contributing expansion coefficients were sampled.
            for t in (deg - n)..=n {
                let mut conv = Rational::zero();
                for (j, dc) in den.iter() {
                    conv = conv + dc * &e.coefficient(t - j);
                }
                let expected = f.scale() * &f.numerator().coeff(t - f.shift());
                assert_eq!(conv, expected, "at exponent {t} in {a:?}");
            }
        }
    }

    #[test]
    fn agrees_with_series_division_when_all_poles_are_outside() {
        let f = two_sided_example();
        let e = expand_in_annulus(&f, &annulus(r(0, 1), Some(r(1, 2)))).unwrap();

        let num = f.numerator().to_lseries("z", 12).unwrap();
        let den = f.denominator_poly().to_lseries("z", 12).unwrap();
        let q = num.div(&den).unwrap().scale(f.scale());
        for n in 0..=10 {
            assert_eq!(e.coefficient(n), q.coefficient_at(n).unwrap(), "at exponent {n}");
        }
    }
}
