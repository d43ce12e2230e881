//! Route-equality and shape properties for the coupon collector.

use bracket_series::coupon::{
    expected_trials_bracket, expected_trials_formula, markov_oracle, CouponProblem,
};
use bracket_series::rational::Rational;
use proptest::prelude::*;

/// Random exact probability vector: positive numerators over their sum.
fn probabilities(max_len: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(1i64..=9, 1..=max_len).prop_map(|weights| {
        let total: i64 = weights.iter().sum();
        weights
            .into_iter()
            .map(|w| Rational::new(w, total))
            .collect()
    })
}

proptest! {
    /// The bracket-integral route, the subset closed form and the Markov
    /// recurrence agree exactly for every target.
    #[test]
    fn three_routes_agree(probs in probabilities(6)) {
        for n in 1..=probs.len() {
            let problem = CouponProblem::new(probs.clone(), n).unwrap();
            let formula = expected_trials_formula(&problem).unwrap();
            let bracket = expected_trials_bracket(&problem).unwrap();
            let oracle = markov_oracle(&problem).unwrap();
            prop_assert_eq!(&formula, &bracket, "formula vs bracket at n={}", n);
            prop_assert_eq!(&formula, &oracle, "formula vs oracle at n={}", n);
        }
    }

    /// Expected trials grow with the target.
    #[test]
    fn nondecreasing_in_target(probs in probabilities(6)) {
        let mut last = Rational::zero();
        for n in 1..=probs.len() {
            let problem = CouponProblem::new(probs.clone(), n).unwrap();
            let value = expected_trials_formula(&problem).unwrap();
            prop_assert!(value >= last);
            last = value;
        }
    }

    /// At least one trial is always needed, and exactly one iff n = 1 with a
    /// single guaranteed coupon draw being impossible to undershoot.
    #[test]
    fn at_least_one_trial(probs in probabilities(5)) {
        let problem = CouponProblem::new(probs, 1).unwrap();
        prop_assert_eq!(expected_trials_formula(&problem).unwrap(), Rational::one());
    }
}
