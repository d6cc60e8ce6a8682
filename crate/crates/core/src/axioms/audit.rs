//! Rule × axiom audits over seeded random problems.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::check::{
    check_additivity, check_flights_equivalence, check_independence_empty_flights,
    check_independence_other_airlines, check_null_airline, check_pairwise_homogeneity, check_ratio_preservation,
};
use super::generate::{generate_with_rng, sample_reassignment, trial_rng, Constraints, TrialConfig};
use super::{AxiomId, CheckOutcome, Verdict, Witness};
use crate::error::{AxiomError, GenerationError};
use crate::model::{build_index, AirlineId, AirlinesProblem, PassengerId, WeightSystem};
use crate::rules::{PassengerWeights, RuleKind, RuleConfig};
use crate::scalar::Scalar;

/// What the published analysis says about a (rule, axiom) cell.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Satisfies,
    Fails,
    /// No claim is made either way.
    Unstated,
}

pub fn expectation(rule: RuleKind, axiom: AxiomId) -> Expectation {
    use AxiomId::*;
    use Expectation::*;
    let (satisfies, fails): (&[AxiomId], &[AxiomId]) = match rule {
        RuleKind::Weighted => (
            &[Additivity, NullAirline, IndEmptyFlights, IndOtherAirlines, RatioPreservation, PairwiseHomogeneity],
            &[FlightsEquivalence],
        ),
        RuleKind::Equal => (
            &[Additivity, NullAirline, IndEmptyFlights, FlightsEquivalence, IndOtherAirlines, RatioPreservation],
            &[PairwiseHomogeneity],
        ),
        RuleKind::R1 => (
            &[NullAirline, IndEmptyFlights, IndOtherAirlines, RatioPreservation, PairwiseHomogeneity],
            &[Additivity],
        ),
        RuleKind::R2 => (
            &[Additivity, IndOtherAirlines, RatioPreservation, PairwiseHomogeneity],
            &[NullAirline, IndEmptyFlights],
        ),
        RuleKind::R3 => (
            &[Additivity, NullAirline, IndEmptyFlights, RatioPreservation, FlightsEquivalence],
            &[IndOtherAirlines],
        ),
        RuleKind::R4 => (&[Additivity, NullAirline, IndEmptyFlights, IndOtherAirlines], &[RatioPreservation]),
        RuleKind::R5 => (&[FlightsEquivalence, IndOtherAirlines], &[Additivity]),
    };
    if satisfies.contains(&axiom) {
        Satisfies
    } else if fails.contains(&axiom) {
        Fails
    } else {
        Unstated
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport<S> {
    pub rule: RuleKind,
    pub axiom: AxiomId,
    pub trials: u64,
    /// Trials with at least one passing check and no failing one.
    pub passes: u64,
    pub failures: u64,
    /// Trials where no drawn check applied.
    pub inapplicable: u64,
    pub expected: Expectation,
    pub first_witness: Option<Witness<S>>,
    pub first_failing_trial: Option<u64>,
}

impl<S: Scalar> AuditReport<S> {
    /// A failure in a cell that is claimed to hold.
    pub fn defect(&self) -> bool {
        self.expected == Expectation::Satisfies && self.failures > 0
    }

    /// Whether the outcome agrees with the claim.
    pub fn confirmed(&self) -> bool {
        match self.expected {
            Expectation::Satisfies => self.failures == 0,
            Expectation::Fails => self.failures > 0,
            Expectation::Unstated => true,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rule": self.rule.name(),
            "axiom": self.axiom.name(),
            "trials": self.trials,
            "passes": self.passes,
            "failures": self.failures,
            "inapplicable": self.inapplicable,
            "expected": self.expected,
            "first_failing_trial": self.first_failing_trial,
            "witness": self.first_witness.as_ref().map(Witness::to_json),
        })
    }
}

/// The rule of kind `kind` as audited on `problem`. R4 gets per-passenger
/// weights: the problem's weights, each scaled by a random integer in 1..=5.
pub fn trial_rule<S: Scalar>(kind: RuleKind, problem: &AirlinesProblem<S>, rng: &mut impl Rng) -> RuleConfig<S> {
    match kind {
        RuleKind::R4 => {
            let base = problem.weights.clone().unwrap_or_default();
            let per_passenger: PassengerWeights<S> = problem
                .passengers
                .iter()
                .map(|p| {
                    let w: WeightSystem<S> = base
                        .iter()
                        .map(|(e, w)| (e.clone(), w.clone() * S::from_count(rng.random_range(1..=5))))
                        .collect();
                    (p.id, w)
                })
                .collect();
            RuleConfig::R4(per_passenger)
        }
        k => RuleConfig::from_kind(k),
    }
}

fn generate<S: Scalar>(rng: &mut ChaCha8Rng, config: &TrialConfig) -> Result<AirlinesProblem<S>, GenerationError> {
    let p = generate_with_rng(rng, &config.bounds, &Constraints::default())?;
    Ok(p.map_scalar(|&x| S::from_f64_lossy(x)))
}

fn generation_error(e: GenerationError) -> AxiomError {
    AxiomError::Precondition(format!("problem generation failed: {e}"))
}

/// Quadruples `(j, j', i, i')` meeting the premise of ratio preservation.
fn ratio_candidates<S: Scalar>(problem: &AirlinesProblem<S>) -> Vec<(PassengerId, PassengerId, AirlineId, AirlineId)> {
    let index = build_index(problem);
    let n = problem.passengers.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let shared: Vec<AirlineId> = index
                .segments_of(a)
                .iter()
                .filter(|(i, fa)| {
                    let fb = index.flights_of(b, **i);
                    fb.iter().collect::<BTreeSet<_>>() == fa.iter().collect::<BTreeSet<_>>()
                })
                .map(|(i, _)| *i)
                .collect();
            for (x, &i) in shared.iter().enumerate() {
                for &k in &shared[x + 1..] {
                    out.push((problem.passengers[a].id, problem.passengers[b].id, i, k));
                }
            }
        }
    }
    out
}

/// Checks drawn for one trial of `axiom`.
fn trial_checks<S: Scalar>(
    rule: &RuleConfig<S>,
    axiom: AxiomId,
    problem: &AirlinesProblem<S>,
    rng: &mut ChaCha8Rng,
    tol: f64,
) -> Result<Vec<CheckOutcome<S>>, AxiomError> {
    Ok(match axiom {
        AxiomId::Additivity => {
            let subset: BTreeSet<PassengerId> =
                problem.passengers.iter().map(|p| p.id).filter(|_| rng.random_bool(0.5)).collect();
            vec![check_additivity(rule, problem, &subset, tol)?]
        }
        AxiomId::NullAirline => vec![check_null_airline(rule, problem, tol)?],
        AxiomId::IndEmptyFlights => problem
            .empty_flights()
            .iter()
            .map(|f| check_independence_empty_flights(rule, problem, f, tol))
            .collect::<Result<_, _>>()?,
        AxiomId::FlightsEquivalence => vec![check_flights_equivalence(rule, problem, tol)?],
        AxiomId::IndOtherAirlines => {
            let i = *problem.airlines.choose(rng).expect("generated problems have airlines");
            let sigma = sample_reassignment(rng, problem, i);
            vec![check_independence_other_airlines(rule, problem, &sigma, i, tol)?]
        }
        AxiomId::RatioPreservation => ratio_candidates(problem)
            .into_iter()
            .map(|(j, k, i, l)| check_ratio_preservation(rule, problem, j, k, i, l, tol))
            .collect::<Result<_, _>>()?,
        AxiomId::PairwiseHomogeneity => {
            let n = &problem.airlines;
            let mut out = Vec::new();
            for (x, &i) in n.iter().enumerate() {
                for &k in &n[x + 1..] {
                    out.push(check_pairwise_homogeneity(rule, problem, i, k, tol)?);
                }
            }
            out
        }
    })
}

/// Runs `config.trials` seeded trials of `axiom` against rule `kind`.
pub fn audit<S: Scalar>(kind: RuleKind, axiom: AxiomId, config: &TrialConfig) -> Result<AuditReport<S>, AxiomError> {
    let mut report = AuditReport {
        rule: kind,
        axiom,
        trials: config.trials,
        passes: 0,
        failures: 0,
        inapplicable: 0,
        expected: expectation(kind, axiom),
        first_witness: None,
        first_failing_trial: None,
    };
    for trial in 0..config.trials {
        let mut rng = trial_rng(config.seed, trial);
        let problem = generate::<S>(&mut rng, config).map_err(generation_error)?;
        let rule = trial_rule(kind, &problem, &mut rng);
        let outcomes = trial_checks(&rule, axiom, &problem, &mut rng, config.tolerance)?;
        if let Some(failed) = outcomes.into_iter().reduce(|acc, o| match (acc.verdict, o.verdict) {
            (Verdict::Fail, _) => acc,
            (_, Verdict::Fail) | (Verdict::Inapplicable, _) => o,
            _ => acc,
        }) {
            match failed.verdict {
                Verdict::Fail => {
                    report.failures += 1;
                    if report.first_witness.is_none() {
                        report.first_witness = failed.witness;
                        report.first_failing_trial = Some(trial);
                    }
                }
                Verdict::Pass => report.passes += 1,
                Verdict::Inapplicable => report.inapplicable += 1,
            }
        } else {
            report.inapplicable += 1;
        }
    }
    Ok(report)
}

/// Every rule against every axiom, rules outermost.
pub fn audit_matrix<S: Scalar>(config: &TrialConfig) -> Result<Vec<AuditReport<S>>, AxiomError> {
    let mut out = Vec::with_capacity(RuleKind::ALL.len() * AxiomId::ALL.len());
    for kind in RuleKind::ALL {
        for axiom in AxiomId::ALL {
            out.push(audit(kind, axiom, config)?);
        }
    }
    Ok(out)
}

/// Result of testing that independence of empty flights implies null airline.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ImplicationOutcome {
    pub trials: u64,
    /// (rule, problem) pairs where every empty-flight check passed.
    pub premise_held: u64,
    /// Of those, pairs that also had a null airline to check.
    pub with_null_airline: u64,
    /// (rule, trial) pairs passing every empty-flight check but failing null airline.
    pub counterexamples: Vec<(RuleKind, u64)>,
}

/// For each trial and each of `rules`: if the rule passes the empty-flight
/// check on every empty flight, it must pass the null-airline check too.
pub fn implication_trial<S: Scalar>(
    rules: &[RuleKind],
    config: &TrialConfig,
) -> Result<ImplicationOutcome, AxiomError> {
    let mut out = ImplicationOutcome {
        trials: config.trials,
        ..ImplicationOutcome::default()
    };
    for trial in 0..config.trials {
        let mut rng = trial_rng(config.seed, trial);
        let problem = generate::<S>(&mut rng, config).map_err(generation_error)?;
        for &kind in rules {
            let rule = trial_rule(kind, &problem, &mut rng);
            let checks = trial_checks(&rule, AxiomId::IndEmptyFlights, &problem, &mut rng, config.tolerance)?;
            if checks.iter().any(CheckOutcome::failed) {
                continue;
            }
            out.premise_held += 1;
            let null = check_null_airline(&rule, &problem, config.tolerance)?;
            match null.verdict {
                Verdict::Inapplicable => {}
                Verdict::Pass => out.with_null_airline += 1,
                Verdict::Fail => {
                    out.with_null_airline += 1;
                    out.counterexamples.push((kind, trial));
                }
            }
        }
    }
    Ok(out)
}
