//! Randomized identities for bivariate brackets and monomial substitution.

use bracket_series::laurent::{LSeries, LaurentPoly};
use bracket_series::multivar::{
    bi_bracket, partial_bracket, random_graph_coeff, BiBox, BiSeries, BiVar,
};
use bracket_series::rational::{factorial, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Rational::new(n, d))
}

fn bi_poly() -> impl Strategy<Value = BiSeries> {
    proptest::collection::vec(((-3i64..=3, -3i64..=3), rational()), 0..6)
        .prop_map(|terms| BiSeries::polynomial("w", "z", terms))
}

fn uni_poly(range: core::ops::RangeInclusive<i64>) -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec((range, rational()), 0..5).prop_map(LaurentPoly::from_terms)
}

/// Bracket of two exact bivariate polynomials: pad the outer box so the
/// window check cannot fire.
fn bracket_exact(f: &BiSeries, g: &BiSeries) -> Rational {
    let fb = f.bounds();
    let padded = g.clone().pad_box(fb.max_w, fb.max_z);
    bi_bracket(f, &padded).expect("padded box covers the support")
}

proptest! {
    /// Scaling one variable moves freely across the bracket:
    /// [F] G(aw, z) = [F(aw, z)] G.
    #[test]
    fn variable_scale_moves_across(
        f in bi_poly(),
        g in bi_poly(),
        a in prop_oneof![Just(Rational::new(2, 1)), Just(Rational::new(-1, 1)), Just(Rational::new(1, 3))],
    ) {
        let one = Rational::one();
        let g_scaled = g.monomial_substitute((1, 0, 0, 1), (&a, &one)).unwrap();
        let f_scaled = f.monomial_substitute((1, 0, 0, 1), (&a, &one)).unwrap();
        prop_assert_eq!(bracket_exact(&f, &g_scaled), bracket_exact(&f_scaled, &g));
    }

    /// w -> w^m on both operands leaves the bracket unchanged.
    #[test]
    fn power_substitution_invariance(
        f in bi_poly(),
        g in bi_poly(),
        m in prop_oneof![-3i64..=-1, 1i64..=3],
    ) {
        let one = Rational::one();
        let fs = f.monomial_substitute((m, 0, 0, 1), (&one, &one)).unwrap();
        let gs = g.monomial_substitute((m, 0, 0, 1), (&one, &one)).unwrap();
        prop_assert_eq!(bracket_exact(&f, &g), bracket_exact(&fs, &gs));
    }

    /// z -> w^m z on both operands leaves the bracket unchanged.
    #[test]
    fn shear_substitution_invariance(
        f in bi_poly(),
        g in bi_poly(),
        m in prop_oneof![-3i64..=-1, 1i64..=3],
    ) {
        let one = Rational::one();
        let fs = f.monomial_substitute((1, 0, m, 1), (&one, &one)).unwrap();
        let gs = g.monomial_substitute((1, 0, m, 1), (&one, &one)).unwrap();
        prop_assert_eq!(bracket_exact(&f, &g), bracket_exact(&fs, &gs));
    }

    /// The general rule: [F(w/a·..., z/b·...)] G(a·..., b·...) = [F] G for
    /// any nonsingular exponent matrix, with reciprocal scales on the inner
    /// operand.
    #[test]
    fn general_monomial_substitution_invariance(
        f in bi_poly(),
        g in bi_poly(),
        k in -2i64..=2,
        l in -2i64..=2,
        m in -2i64..=2,
        n in -2i64..=2,
        a in prop_oneof![Just(Rational::new(2, 1)), Just(Rational::new(-1, 1)), Just(Rational::new(1, 2))],
        b in prop_oneof![Just(Rational::new(3, 1)), Just(Rational::new(-1, 2)), Just(Rational::one())],
    ) {
        prop_assume!(k * n - l * m != 0);
        let a_inv = Rational::one().checked_div(&a).unwrap();
        let b_inv = Rational::one().checked_div(&b).unwrap();
        let fs = f.monomial_substitute((k, l, m, n), (&a_inv, &b_inv)).unwrap();
        let gs = g.monomial_substitute((k, l, m, n), (&a, &b)).unwrap();
        prop_assert_eq!(bracket_exact(&f, &g), bracket_exact(&fs, &gs));
    }

    /// Subscripted brackets compose per variable:
    /// [F(w)G(z)]_{w,z} H = [G(z)]_z ([F(w)]_w H).
    #[test]
    fn partial_brackets_compose(
        f in uni_poly(-3..=3),
        g in uni_poly(-3..=3),
        h in bi_poly(),
    ) {
        let product = BiSeries::polynomial(
            "w",
            "z",
            f.iter().flat_map(|(p, cf)| {
                g.iter().map(move |(q, cg)| ((*p, *q), cf * cg))
            }),
        );
        let lhs = bracket_exact(&product, &h);

        // Pad h so both f's w-exponents and g's z-exponents are covered.
        let h_padded = h
            .clone()
            .pad_box(f.max_exp().unwrap_or(0), g.max_exp().unwrap_or(0));
        let inner = partial_bracket(&f, &h_padded, BiVar::W).unwrap();
        let rhs = bracket_series::bracket::bracket_poly(&g, &inner).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// [w^m z^n] 1/(1 - w F(z)) = [z^n] F(z)^m for F with F(0) = 0.
    #[test]
    fn geometric_kernel_collapses(
        f in proptest::collection::vec((1i64..=3, rational()), 1..4),
        m in 0i64..=4,
        n in 0i64..=8,
    ) {
        let f = LaurentPoly::from_terms(f);
        let bounds = BiBox::new(0, 4, 0, 8);
        let one = BiSeries::one("w", "z").pad_box(4, 8);
        let w_f = BiSeries::polynomial(
            "w",
            "z",
            f.iter().map(|(e, c)| ((1, *e), c.clone())),
        )
        .pad_box(4, 8);
        let den = one.sub(&w_f).unwrap();
        let expansion = one.div_unit(&den).unwrap();
        prop_assert_eq!(expansion.bounds(), bounds);

        let lhs = expansion.coefficient_at(m, n).unwrap();
        let rhs = f.pow(m as u32).coeff(n);
        prop_assert_eq!(lhs, rhs);
    }

    /// [w^m z^n] e^{w F(z)} = [z^n] F(z)^m / m!.
    #[test]
    fn exponential_kernel_collapses(
        f in proptest::collection::vec((1i64..=3, rational()), 1..4),
        m in 0i64..=4,
        n in 0i64..=8,
    ) {
        let f = LaurentPoly::from_terms(f);
        // e^{wF} = Σ_j w^j F^j / j!, truncated beyond the box.
        let mut terms = Vec::new();
        let mut power = LaurentPoly::one();
        for j in 0..=4i64 {
            let inv_fact = Rational::one().checked_div(&factorial(j as u64)).unwrap();
            for (e, c) in power.iter() {
                if *e <= 8 {
                    terms.push(((j, *e), c * &inv_fact));
                }
            }
            power = power.mul(&f);
        }
        let expansion = BiSeries::new("w", "z", terms, BiBox::new(0, 4, 0, 8)).unwrap();
        let lhs = expansion.coefficient_at(m, n).unwrap();
        let rhs = f
            .pow(m as u32)
            .coeff(n)
            .checked_div(&factorial(m as u64))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// [w^m z^n] G(w F(z)) H(z) = [z^n] F^m H · [w^m] G.
    #[test]
    fn kernel_with_carrier_splits(
        f in proptest::collection::vec((1i64..=3, rational()), 1..4),
        g in proptest::collection::vec((0i64..=4, rational()), 1..5),
        h in proptest::collection::vec((0i64..=3, rational()), 1..4),
        m in 0i64..=4,
        n in 0i64..=8,
    ) {
        let f = LaurentPoly::from_terms(f);
        let g = LaurentPoly::from_terms(g);
        let h = LaurentPoly::from_terms(h);

        // G(wF(z))·H(z) = Σ_j g_j w^j F^j H, truncated beyond the box.
        let mut terms = Vec::new();
        let mut power = LaurentPoly::one();
        for j in 0..=4i64 {
            let weighted = power.mul(&h).scale(&g.coeff(j));
            for (e, c) in weighted.iter() {
                if *e <= 11 {
                    terms.push(((j, *e), c.clone()));
                }
            }
            power = power.mul(&f);
        }
        let expansion = BiSeries::new("w", "z", terms, BiBox::new(0, 4, 0, 11)).unwrap();
        let lhs = expansion.coefficient_at(m, n).unwrap();
        let rhs = f.pow(m as u32).mul(&h).coeff(n) * g.coeff(m);
        prop_assert_eq!(lhs, rhs);
    }

    /// The single-variable change of variables
    /// [F(z)] G(z)/(1-z) = [F(1+az)] G(z/(a+z)).
    #[test]
    fn shifted_substitution_rule(
        f in proptest::collection::vec((0i64..=4, rational()), 1..5),
        g in proptest::collection::vec((1i64..=4, rational()), 1..5),
        a in prop_oneof![Just(Rational::one()), Just(Rational::new(2, 1))],
    ) {
        let f = LaurentPoly::from_terms(f);
        let g = LaurentPoly::from_terms(g);
        let order = 24;

        // Left: [F] G/(1-z).
        let one_minus_z =
            LSeries::from_terms("z", [(0, Rational::one()), (1, -Rational::one())], order)
                .unwrap();
        let g_series = g.to_lseries("z", order).unwrap();
        let lhs =
            bracket_series::bracket::bracket_poly(&f, &g_series.div(&one_minus_z).unwrap())
                .unwrap();

        // Right: F(1+az) is a finite polynomial, G(z/(a+z)) a series.
        let mut f_subst = LaurentPoly::zero();
        let shift = LaurentPoly::from_terms([(0, Rational::one()), (1, a.clone())]);
        for (e, c) in f.iter() {
            f_subst = f_subst.add(&shift.pow(*e as u32).scale(c));
        }
        let a_plus_z =
            LSeries::from_terms("z", [(0, a.clone()), (1, Rational::one())], order).unwrap();
        let inner = LSeries::monomial("z", 1, Rational::one(), order)
            .unwrap()
            .div(&a_plus_z)
            .unwrap();
        let g_subst = g.to_lseries("z", order).unwrap().compose(&inner).unwrap();
        let rhs = bracket_series::bracket::bracket_poly(&f_subst, &g_subst).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// Both routes of the two-variable-to-one-variable reduction for
/// coefficients of e^{U(wz)/w + V(wz)}: direct bivariate expansion against
/// the closed form (1/(n-m)!)[z^n] U^{n-m} e^V.
#[test]
fn random_graph_reduction_agrees_with_direct_expansion() {
    let cases = [
        (vec![(1i64, (1i64, 1i64))], vec![(1i64, (1i64, 1i64))]),
        (vec![(1, (1, 1)), (2, (1, 1))], vec![]),
        (vec![(1, (2, 1)), (3, (-1, 2))], vec![(1, (1, 3)), (2, (1, 1))]),
    ];
    for (u_terms, v_terms) in cases {
        let u = LaurentPoly::from_terms(
            u_terms.iter().map(|&(e, (n, d))| (e, Rational::new(n, d))),
        );
        let v = LaurentPoly::from_terms(
            v_terms.iter().map(|&(e, (n, d))| (e, Rational::new(n, d))),
        );
        let box_n = 6i64;

        // Integrand argument A = U(wz)/w + V(wz), an exact polynomial with
        // nonnegative w-exponents and positive z-exponents.
        let mut a_terms = Vec::new();
        for (j, c) in u.iter() {
            a_terms.push(((j - 1, *j), c.clone()));
        }
        for (j, c) in v.iter() {
            a_terms.push(((*j, *j), c.clone()));
        }
        let a = BiSeries::polynomial("w", "z", a_terms);

        // e^A = Σ_k A^k/k!; every term with k > box_n vanishes on the box
        // because A has z-valuation >= 1.
        let mut expansion = BiSeries::one("w", "z").pad_box(box_n, box_n);
        let mut power = BiSeries::one("w", "z");
        for k in 1..=box_n {
            power = power.mul_exact(&a).unwrap();
            let inv_fact = Rational::one().checked_div(&factorial(k as u64)).unwrap();
            expansion = expansion
                .add(&power.scale(&inv_fact).pad_box(box_n, box_n))
                .unwrap();
        }

        let u_series = u.to_lseries("z", box_n).unwrap();
        let v_series = v.to_lseries("z", box_n).unwrap();
        for m in 0..=3i64 {
            for n in 0..=box_n {
                let direct = expansion.coefficient_at(m, n).unwrap();
                let reduced = random_graph_coeff(&u_series, &v_series, m, n).unwrap();
                assert_eq!(direct, reduced, "mismatch at m={m}, n={n}");
            }
        }
    }
}

/// The worked instance U(z) = V(z) = z: [w z^2] e^{U(wz)/w + V(wz)} = 1,
/// matching [z^2] z e^z = 1.
#[test]
fn worked_change_of_variables_instance() {
    let u = LSeries::from_terms("z", [(1, Rational::one())], 6).unwrap();
    let v = u.clone();
    assert_eq!(random_graph_coeff(&u, &v, 1, 2).unwrap(), Rational::one());
}
