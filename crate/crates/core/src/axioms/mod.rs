//! Fairness axioms as executable checks.
//!
//! Every checker evaluates a rule on a problem and on a transformed version
//! of it, and compares the two sides of the axiom's identity up to a
//! relative tolerance. A failing check carries a [`Witness`] holding
//! everything needed to rerun it.

mod audit;
mod check;
mod generate;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{AxiomError, RuleError};
use crate::model::{AirlineId, AirlinesProblem, FlightKey, PassengerId, ProblemFile, Reassignment, WeightRecord};
use crate::rules::{allocate, Allocation, RuleConfig};
use crate::scalar::Scalar;

pub use audit::{
    audit, audit_matrix, expectation, implication_trial, trial_rule, AuditReport, Expectation, ImplicationOutcome,
};
pub use check::{
    check_additivity, check_flights_equivalence, check_independence_empty_flights,
    check_independence_other_airlines, check_null_airline, check_pairwise_homogeneity, check_ratio_preservation,
    check_rule_validity, homogeneity_factor, DEFAULT_TOLERANCE,
};
pub use generate::{
    generate_problem, generate_with_rng, sample_reassignment, trial_rng, Constraints, SizeBounds, TrialConfig,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomId {
    Additivity,
    NullAirline,
    IndEmptyFlights,
    FlightsEquivalence,
    IndOtherAirlines,
    RatioPreservation,
    PairwiseHomogeneity,
}

impl AxiomId {
    pub const ALL: [AxiomId; 7] = [
        AxiomId::Additivity,
        AxiomId::NullAirline,
        AxiomId::IndEmptyFlights,
        AxiomId::FlightsEquivalence,
        AxiomId::IndOtherAirlines,
        AxiomId::RatioPreservation,
        AxiomId::PairwiseHomogeneity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Additivity => "additivity",
            Self::NullAirline => "null_airline",
            Self::IndEmptyFlights => "ind_empty_flights",
            Self::FlightsEquivalence => "flights_equivalence",
            Self::IndOtherAirlines => "ind_other_airlines",
            Self::RatioPreservation => "ratio_preservation",
            Self::PairwiseHomogeneity => "pairwise_homogeneity",
        }
    }

    /// Row label for the summary table.
    pub fn label(self) -> &'static str {
        match self {
            Self::Additivity => "Additivity",
            Self::NullAirline => "Null airline",
            Self::IndEmptyFlights => "Ind. empty flights",
            Self::FlightsEquivalence => "Flights equiv.",
            Self::IndOtherAirlines => "Ind. other airlines",
            Self::RatioPreservation => "Ratio preserv.",
            Self::PairwiseHomogeneity => "Pairwise hom.",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

/// Anything that maps a problem to an allocation.
pub trait AllocationRule<S: Scalar> {
    fn allocate(&self, problem: &AirlinesProblem<S>) -> Result<Allocation<S>, RuleError>;

    /// The rule as data, so that witnesses can be replayed on their own.
    fn config(&self) -> Option<RuleConfig<S>> {
        None
    }

    fn name(&self) -> String {
        self.config().map_or_else(|| "custom".to_owned(), |s| s.kind().to_string())
    }
}

impl<S: Scalar> AllocationRule<S> for RuleConfig<S> {
    fn allocate(&self, problem: &AirlinesProblem<S>) -> Result<Allocation<S>, RuleError> {
        allocate(problem, self)
    }

    fn config(&self) -> Option<RuleConfig<S>> {
        Some(self.clone())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

/// The check that failed and its arguments.
#[derive(Clone, Debug, PartialEq)]
pub enum Transformation {
    /// Efficiency and nonnegativity of the allocation itself.
    Validity,
    NullAirline,
    Restriction { subset: BTreeSet<PassengerId> },
    Cancellation { flight: FlightKey },
    FlightsEquivalence { other: AirlineId },
    Reassignment { sigma: Reassignment },
    RatioPair { passengers: (PassengerId, PassengerId), other: AirlineId },
    Homogeneity { other: AirlineId, lambda: Option<f64> },
}

/// Self-contained record of a failed check.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<S> {
    pub axiom: Option<AxiomId>,
    pub rule_name: String,
    pub rule: Option<RuleConfig<S>>,
    pub problem: AirlinesProblem<S>,
    pub transformation: Transformation,
    /// Airline whose two sides disagree.
    pub airline: AirlineId,
    pub lhs: S,
    pub rhs: S,
    pub tolerance: f64,
}

impl<S: Scalar> Witness<S> {
    pub fn difference(&self) -> S {
        self.lhs.clone() - self.rhs.clone()
    }

    /// Reruns the failed check with the recorded rule.
    pub fn replay(&self) -> Result<CheckOutcome<S>, AxiomError> {
        let rule = self
            .rule
            .clone()
            .ok_or_else(|| AxiomError::Precondition("witness carries no replayable rule".into()))?;
        self.replay_with(&rule)
    }

    pub fn replay_with(&self, rule: &impl AllocationRule<S>) -> Result<CheckOutcome<S>, AxiomError> {
        let p = &self.problem;
        let tol = self.tolerance;
        match &self.transformation {
            Transformation::Validity => check_rule_validity(rule, p, tol),
            Transformation::NullAirline => check_null_airline(rule, p, tol),
            Transformation::Restriction { subset } => check_additivity(rule, p, subset, tol),
            Transformation::Cancellation { flight } => check_independence_empty_flights(rule, p, flight, tol),
            Transformation::FlightsEquivalence { .. } => check_flights_equivalence(rule, p, tol),
            Transformation::Reassignment { sigma } => check_independence_other_airlines(rule, p, sigma, self.airline, tol),
            Transformation::RatioPair { passengers, other } => {
                check_ratio_preservation(rule, p, passengers.0, passengers.1, self.airline, *other, tol)
            }
            Transformation::Homogeneity { other, .. } => check_pairwise_homogeneity(rule, p, self.airline, *other, tol),
        }
    }

    fn transformation_json(&self) -> Value {
        match &self.transformation {
            Transformation::Validity => json!({"kind": "validity"}),
            Transformation::NullAirline => json!({"kind": "null_airline"}),
            Transformation::Restriction { subset } => {
                json!({"kind": "restriction", "subset": subset.iter().map(|p| p.0).collect::<Vec<_>>()})
            }
            Transformation::Cancellation { flight } => json!({
                "kind": "cancellation",
                "flight": {"from": flight.edge.origin.as_str(), "to": flight.edge.destination.as_str(), "airline": flight.airline.0},
            }),
            Transformation::FlightsEquivalence { other } => json!({"kind": "flights_equivalence", "other": other.0}),
            Transformation::Reassignment { sigma } => json!({
                "kind": "reassignment",
                "sigma": sigma.iter().map(|(f, a)| json!({
                    "from": f.edge.origin.as_str(), "to": f.edge.destination.as_str(),
                    "airline": f.airline.0, "new_airline": a.0,
                })).collect::<Vec<_>>(),
            }),
            Transformation::RatioPair { passengers, other } => json!({
                "kind": "ratio_pair",
                "passengers": [passengers.0 .0, passengers.1 .0],
                "other": other.0,
            }),
            Transformation::Homogeneity { other, lambda } => {
                json!({"kind": "homogeneity", "other": other.0, "lambda": lambda})
            }
        }
    }

    fn rule_json(&self) -> Value {
        let mut out = json!({"name": self.rule_name});
        let weights = match &self.rule {
            Some(RuleConfig::Weighted(Some(w)) | RuleConfig::R1(Some(w)) | RuleConfig::R2(Some(w))) => {
                Some(serde_json::to_value(WeightRecord::records(w)).expect("weights serialize"))
            }
            _ => None,
        };
        if let Some(w) = weights {
            out["weights"] = w;
        }
        if let Some(RuleConfig::R4(per_passenger)) = &self.rule {
            out["passenger_weights"] = per_passenger
                .iter()
                .map(|(id, w)| json!({"id": id.0, "weights": WeightRecord::records(w)}))
                .collect();
        }
        out
    }

    /// JSON rendering: problem file, transformation descriptor and the two sides.
    pub fn to_json(&self) -> Value {
        json!({
            "axiom": self.axiom.map(AxiomId::name),
            "rule": self.rule_json(),
            "problem": serde_json::to_value(ProblemFile::from_problem(&self.problem)).expect("problem serializes"),
            "transformation": self.transformation_json(),
            "airline": self.airline.0,
            "lhs": self.lhs.to_f64_lossy(),
            "rhs": self.rhs.to_f64_lossy(),
            "difference": self.difference().to_f64_lossy(),
            "tolerance": self.tolerance,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome<S> {
    pub verdict: Verdict,
    pub witness: Option<Witness<S>>,
}

impl<S> CheckOutcome<S> {
    pub fn pass() -> Self {
        Self {
            verdict: Verdict::Pass,
            witness: None,
        }
    }

    pub fn inapplicable() -> Self {
        Self {
            verdict: Verdict::Inapplicable,
            witness: None,
        }
    }

    pub fn fail(witness: Witness<S>) -> Self {
        Self {
            verdict: Verdict::Fail,
            witness: Some(witness),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}
