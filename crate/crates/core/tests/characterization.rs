//! Rule-implies-axioms direction on the restricted domains where the
//! weighted and equal rules are characterized.

use std::collections::BTreeSet;

use interline::axioms::{
    check_additivity, check_flights_equivalence, check_independence_other_airlines, check_null_airline,
    check_pairwise_homogeneity, check_ratio_preservation, generate_with_rng, sample_reassignment, trial_rng,
    CheckOutcome, Constraints, SizeBounds,
};
use interline::{PassengerId, Problem, RuleConfig};
use rand::seq::IndexedRandom;
use rand::Rng;

const TOL: f64 = 1e-9;
const TRIALS: u64 = 300;

fn assert_no_failure(outcome: CheckOutcome<f64>, what: &str, trial: u64) {
    assert!(!outcome.failed(), "{what} failed in trial {trial}: {:?}", outcome.witness.map(|w| (w.lhs, w.rhs)));
}

fn halves(p: &Problem, rng: &mut impl Rng) -> BTreeSet<PassengerId> {
    p.passengers.iter().map(|q| q.id).filter(|_| rng.random_bool(0.5)).collect()
}

#[test]
fn weighted_rule_on_multi_flight_itineraries() {
    let constraints = Constraints {
        min_itinerary_len: Some(2),
        ..Constraints::default()
    };
    let rule = RuleConfig::Weighted(None);
    for trial in 0..TRIALS {
        let mut rng = trial_rng(11, trial);
        let p = generate_with_rng(&mut rng, &SizeBounds::default(), &constraints).unwrap();
        assert!(p.passengers.iter().all(|q| q.itinerary.flights.len() >= 2));
        let t = halves(&p, &mut rng);
        assert_no_failure(check_additivity(&rule, &p, &t, TOL).unwrap(), "additivity", trial);
        assert_no_failure(check_null_airline(&rule, &p, TOL).unwrap(), "null airline", trial);
        let i = *p.airlines.choose(&mut rng).unwrap();
        let sigma = sample_reassignment(&mut rng, &p, i);
        assert_no_failure(
            check_independence_other_airlines(&rule, &p, &sigma, i, TOL).unwrap(),
            "independence of other airlines",
            trial,
        );
        for (x, &a) in p.airlines.iter().enumerate() {
            for &b in &p.airlines[x + 1..] {
                assert_no_failure(check_pairwise_homogeneity(&rule, &p, a, b, TOL).unwrap(), "homogeneity", trial);
                for j in &p.passengers {
                    for k in &p.passengers {
                        assert_no_failure(
                            check_ratio_preservation(&rule, &p, j.id, k.id, a, b, TOL).unwrap(),
                            "ratio preservation",
                            trial,
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn equal_rule_with_three_unused_flights() {
    let constraints = Constraints {
        min_unused_flights: Some(3),
        ..Constraints::default()
    };
    let rule = RuleConfig::Equal;
    for trial in 0..TRIALS {
        let mut rng = trial_rng(12, trial);
        let p = generate_with_rng(&mut rng, &SizeBounds::default(), &constraints).unwrap();
        assert!(p.passengers.iter().all(|q| p.flights.len() - q.itinerary.flights.len() >= 3));
        let t = halves(&p, &mut rng);
        assert_no_failure(check_additivity(&rule, &p, &t, TOL).unwrap(), "additivity", trial);
        assert_no_failure(check_flights_equivalence(&rule, &p, TOL).unwrap(), "flights equivalence", trial);
        let i = *p.airlines.choose(&mut rng).unwrap();
        let sigma = sample_reassignment(&mut rng, &p, i);
        assert_no_failure(
            check_independence_other_airlines(&rule, &p, &sigma, i, TOL).unwrap(),
            "independence of other airlines",
            trial,
        );
    }
}
