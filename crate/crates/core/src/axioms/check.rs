use std::collections::BTreeSet;

use super::{AllocationRule, AxiomId, CheckOutcome, Transformation, Witness};
use crate::error::AxiomError;
use crate::model::{
    build_index, cancel_empty_flight, reassign, restrict, AirlineId, AirlinesProblem, FlightKey, PassengerId,
    Reassignment,
};
use crate::scalar::Scalar;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Builds witnesses for one check.
struct Checker<'a, S: Scalar, R> {
    rule: &'a R,
    problem: &'a AirlinesProblem<S>,
    axiom: Option<AxiomId>,
    tol: f64,
}

impl<'a, S: Scalar, R: AllocationRule<S>> Checker<'a, S, R> {
    fn new(rule: &'a R, problem: &'a AirlinesProblem<S>, axiom: Option<AxiomId>, tol: f64) -> Self {
        Self {
            rule,
            problem,
            axiom,
            tol,
        }
    }

    fn witness(&self, transformation: Transformation, airline: AirlineId, lhs: S, rhs: S) -> Witness<S> {
        Witness {
            axiom: self.axiom,
            rule_name: self.rule.name(),
            rule: self.rule.config(),
            problem: self.problem.clone(),
            transformation,
            airline,
            lhs,
            rhs,
            tolerance: self.tol,
        }
    }

    /// Fails on the first airline whose two sides differ beyond tolerance.
    fn compare(
        &self,
        transformation: impl Fn() -> Transformation,
        sides: impl IntoIterator<Item = (AirlineId, S, S)>,
    ) -> CheckOutcome<S> {
        for (airline, lhs, rhs) in sides {
            if !lhs.approx_eq(&rhs, self.tol) {
                return CheckOutcome::fail(self.witness(transformation(), airline, lhs, rhs));
            }
        }
        CheckOutcome::pass()
    }
}

/// Efficiency within relative `tol` and every amount at least `-tol`.
pub fn check_rule_validity<S: Scalar>(
    rule: &impl AllocationRule<S>,
    problem: &AirlinesProblem<S>,
    tol: f64,
) -> Result<CheckOutcome<S>, AxiomError> {
    let c = Checker::new(rule, problem, None, tol);
    let allocation = rule.allocate(problem)?;
    let floor = -S::from_f64_lossy(tol);
    for (airline, amount) in allocation.iter() {
        if *amount < floor {
            return Ok(CheckOutcome::fail(c.witness(
                Transformation::Validity,
                airline,
                amount.clone(),
                S::zero(),
            )));
        }
    }
    let total = allocation.total();
    let paid = problem.total_payments();
    if !total.approx_eq(&paid, tol) {
        // No single airline is at fault; report the smallest id.
        let airline = allocation.airlines().next().unwrap_or(AirlineId(0));
        return Ok(CheckOutcome::fail(c.witness(Transformation::Validity, airline, total, paid)));
    }
    Ok(CheckOutcome::pass())
}

/// `R(A) = R(A|T) + R(A|M∖T)` componentwise.
pub fn check_additivity<S: Scalar>(
    rule: &impl AllocationRule<S>,
    problem: &AirlinesProblem<S>,
    subset: &BTreeSet<PassengerId>,
    tol: f64,
) -> Result<CheckOutcome<S>, AxiomError> {
    let c = Checker::new(rule, problem, Some(AxiomId::Additivity), tol);
    let complement: BTreeSet<PassengerId> = problem
        .passengers
        .iter()
        .map(|p| p.id)
        .filter(|id| !subset.contains(id))
        .collect();
    let whole = rule.allocate(problem)?;
    let part = rule.allocate(&restrict(problem, subset)?)?;
    let rest = rule.allocate(&restrict(problem, &complement)?)?;
    let sum = part.plus(&rest);
    Ok(c.compare(
        || Transformation::Restriction { subset: subset.clone() },
        whole.iter().map(|(i, s)| (i, s.clone(), sum.amount(i))),
    ))
}

/// Airlines without passengers receive nothing. Inapplicable when every
/// airline carries someone.
pub fn check_null_airline<S: Scalar>(
    rule: &impl AllocationRule<S>,
    problem: &AirlinesProblem<S>,
    tol: f64,
) -> Result<CheckOutcome<S>, AxiomError> {
    let c = Checker::new(rule, problem, Some(AxiomId::NullAirline), tol);
    let index = build_index(problem);
    let nulls: Vec<AirlineId> = problem
        .airlines
        .iter()
        .copied()
        .filter(|&i| index.is_null_airline(i))
        .collect();
    if nulls.is_empty() {
        return Ok(CheckOutcome::inapplicable());
    }
    let allocation = rule.allocate(problem)?;
    Ok(c.compare(
        || Transformation::NullAirline,
        nulls.into_iter().map(|i| (i, allocation.amount(i), S::zero())),
    ))
}

/// Canceling an empty flight leaves every remaining airline's amount unchanged.
pub fn check_independence_empty_flights<S: Scalar>(
    rule: &impl AllocationRule<S>,
    problem: &AirlinesProblem<S>,
    flight: &FlightKey,
    tol: f64,
) -> Result<CheckOutcome<S>, AxiomError> {
    let c = Checker::new(rule, problem, Some(AxiomId::IndEmptyFlights), tol);
    let reduced = cancel_empty_flight(problem, flight)?;
    let before = rule.allocate(problem)?;
    let after = rule.allocate(&reduced)?;
    Ok(c.compare(
        || Transformation::Cancellation { flight: flight.clone() },
        reduced.airlines.iter().map(|&i| (i, before.amount(i), after.amount(i))),
    ))
}

/// Airlines with the same number of flights for every passenger receive the
/// same. Inapplicable when no two airlines share a count profile.
pub fn check_flights_equivalence<S: Scalar>(
    rule: &impl AllocationRule<S>,
    problem: &AirlinesProblem<S>,
    tol: f64,
) -> Result<CheckOutcome<S>, AxiomError> {
    let c = Checker::new(rule, problem, Some(AxiomId::FlightsEquivalence), tol);
    let index = build_index(problem);
    let profile = |i: AirlineId| -> Vec<usize> {
        (0..problem.passengers.len())
            .map(|j| index.flights_of(j, i).len())
            .collect()
    };
    let airlines = &problem.airlines;
    let mut pairs = Vec::new();
    for (a, &i) in airlines.iter().enumerate() {
        for &k in &airlines[a + 1..] {
            if profile(i) == profile(k) {
                pairs.push((i, k));
            }
        }
    }
    if pairs.is_empty() {
        return Ok(CheckOutcome::inapplicable());
    }
    let allocation = rule.allocate(problem)?;
    for (i, k) in pairs {
        let outcome = c.compare(
            || Transformation::FlightsEquivalence { other: k },
            [(i, allocation.amount(i), allocation.amount(k))],
        );
        if outcome.failed() {
            return Ok(outcome);
        }
    }
    Ok(CheckOutcome::pass())
}

fn other_airlines_precondition<S: Scalar>(
    problem: &AirlinesProblem<S>,
    sigma: &Reassignment,
    airline: AirlineId,
) -> Result<(), AxiomError> {
    if !problem.airlines.contains(&airline) {
        return Err(AxiomError::Precondition(format!("airline {airline} is not in the problem")));
    }
    for f in &problem.flights {
        let target = sigma.get(f);
        let ok = if f.airline == airline {
            target == Some(airline)
        } else {
            target.is_some_and(|t| t != airline)
        };
        if !ok {
            return Err(AxiomError::Precondition(format!(
                "reassignment must keep exactly the flights of airline {airline}; {f} violates this"
            )));
        }
    }
    Ok(())
}

/// Reassigning other airlines' flights leaves `airline`'s amount unchanged.
pub fn check_independence_other_airlines<S: Scalar>(
    rule: &impl AllocationRule<S>,
    problem: &AirlinesProblem<S>,
    sigma: &Reassignment,
    airline: AirlineId,
    tol: f64,
) -> Result<CheckOutcome<S>, AxiomError> {
    other_airlines_precondition(problem, sigma, airline)?;
    let c = Checker::new(rule, problem, Some(AxiomId::IndOtherAirlines), tol);
    let moved = reassign(problem, sigma)?;
    let before = rule.allocate(problem)?.amount(airline);
    let after = rule.allocate(&moved)?.amount(airline);
    Ok(c.compare(
        || Transformation::Reassignment { sigma: sigma.clone() },
        [(airline, before, after)],
    ))
}

/// Two airlines flying the same flights for passengers `j` and `j'` keep the
/// same ratio of amounts in both single-passenger problems. Compared in
/// cross-multiplied form. Inapplicable when the premise does not hold.
pub fn check_ratio_preservation<S: Scalar>(
    rule: &impl AllocationRule<S>,
    problem: &AirlinesProblem<S>,
    j: PassengerId,
    j_prime: PassengerId,
    i: AirlineId,
    i_prime: AirlineId,
    tol: f64,
) -> Result<CheckOutcome<S>, AxiomError> {
    let index = build_index(problem);
    let (Some(pj), Some(pk)) = (index.position_of(j), index.position_of(j_prime)) else {
        return Ok(CheckOutcome::inapplicable());
    };
    let same_flights = |a: AirlineId| {
        let x = index.flights_of(pj, a);
        let y = index.flights_of(pk, a);
        !x.is_empty() && x.iter().collect::<BTreeSet<_>>() == y.iter().collect::<BTreeSet<_>>()
    };
    if !same_flights(i) || !same_flights(i_prime) {
        return Ok(CheckOutcome::inapplicable());
    }
    let c = Checker::new(rule, problem, Some(AxiomId::RatioPreservation), tol);
    let first = rule.allocate(&restrict(problem, &BTreeSet::from([j]))?)?;
    let second = rule.allocate(&restrict(problem, &BTreeSet::from([j_prime]))?)?;
    let lhs = first.amount(i) * second.amount(i_prime);
    let rhs = second.amount(i) * first.amount(i_prime);
    Ok(c.compare(
        || Transformation::RatioPair {
            passengers: (j, j_prime),
            other: i_prime,
        },
        [(i, lhs, rhs)],
    ))
}

/// The factor `λ` with `weight_i^j = λ · weight_i'^j` for every passenger,
/// where `weight_k^j` is the weight airline `k` operates in itinerary `j`.
///
/// `Ok(Some(λ))`: a unique factor exists. `Ok(None)`: neither airline flies
/// anyone, so every `λ > 0` qualifies. `Err(())`: no factor exists.
#[allow(clippy::result_unit_err)]
pub fn homogeneity_factor<S: Scalar>(
    problem: &AirlinesProblem<S>,
    i: AirlineId,
    i_prime: AirlineId,
) -> Result<Option<S>, ()> {
    let weights = problem.weights.as_ref().ok_or(())?;
    let index = build_index(problem);
    let operated = |j: usize, a: AirlineId| -> Result<S, ()> {
        index
            .flights_of(j, a)
            .iter()
            .map(|f| weights.get(&f.edge).cloned().ok_or(()))
            .try_fold(S::zero(), |acc, w| Ok(acc + w?))
    };
    let mut lambda: Option<S> = None;
    for j in 0..problem.passengers.len() {
        let (a, b) = (operated(j, i)?, operated(j, i_prime)?);
        match (a.is_zero(), b.is_zero()) {
            (true, true) => continue,
            (false, false) => {}
            _ => return Err(()),
        }
        match &lambda {
            None => lambda = Some(a / b),
            Some(l) => {
                if !a.approx_eq(&(l.clone() * b), DEFAULT_TOLERANCE) {
                    return Err(());
                }
            }
        }
    }
    Ok(lambda)
}

/// If airline `i` always operates `λ` times the weight of airline `i'`, it
/// receives `λ` times as much. Requires a weight system on the problem.
pub fn check_pairwise_homogeneity<S: Scalar>(
    rule: &impl AllocationRule<S>,
    problem: &AirlinesProblem<S>,
    i: AirlineId,
    i_prime: AirlineId,
    tol: f64,
) -> Result<CheckOutcome<S>, AxiomError> {
    if problem.weights.is_none() {
        return Ok(CheckOutcome::inapplicable());
    }
    let lambda = if i == i_prime {
        Some(S::one())
    } else {
        match homogeneity_factor(problem, i, i_prime) {
            Ok(l) => l,
            Err(()) => return Ok(CheckOutcome::inapplicable()),
        }
    };
    let c = Checker::new(rule, problem, Some(AxiomId::PairwiseHomogeneity), tol);
    let allocation = rule.allocate(problem)?;
    let (ri, rk) = (allocation.amount(i), allocation.amount(i_prime));
    let transformation = || Transformation::Homogeneity {
        other: i_prime,
        lambda: lambda.as_ref().map(Scalar::to_f64_lossy),
    };
    Ok(match &lambda {
        Some(l) => c.compare(transformation, [(i, ri, l.clone() * rk)]),
        // Every λ qualifies, which only both amounts being zero satisfies.
        None => c.compare(transformation, [(i, ri, S::zero()), (i_prime, rk, S::zero())]),
    })
}
