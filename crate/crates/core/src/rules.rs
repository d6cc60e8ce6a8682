//! Allocation rules.
//!
//! The weighted flights rule `W^w` and the equal flights rule `E` split each
//! passenger's price among the airlines of that passenger's journey. The
//! rules `R1`..`R5` are the comparison rules that each break exactly one of
//! the fairness axioms:
//!
//! | rule | split |
//! |------|-------|
//! | `R1` | all revenue pooled, proportional to operated weight over all passengers |
//! | `R2` | each price split equally among the airlines the passenger did *not* use (or by `W` when it used them all) |
//! | `R3` | each price split equally among the airlines the passenger used |
//! | `R4` | `W` with a weight system chosen per passenger |
//! | `R5` | all revenue pooled, proportional to flights operated over all passengers |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::RuleError;
use crate::model::{build_index, AirlineId, AirlinesProblem, FlightKey, Index, PassengerId, WeightSystem};
use crate::scalar::{self, Scalar};

/// Amount per airline, in ascending airline order.
#[derive(Clone, Debug, PartialEq)]
pub struct Allocation<S> {
    amounts: BTreeMap<AirlineId, S>,
}

impl<S: Scalar> Allocation<S> {
    pub fn zeros(airlines: impl IntoIterator<Item = AirlineId>) -> Self {
        airlines.into_iter().map(|i| (i, S::zero())).collect()
    }

    pub fn get(&self, airline: AirlineId) -> Option<&S> {
        self.amounts.get(&airline)
    }

    /// Amount of `airline`, zero when it is not in the domain.
    pub fn amount(&self, airline: AirlineId) -> S {
        self.amounts.get(&airline).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (AirlineId, &S)> {
        self.amounts.iter().map(|(&i, s)| (i, s))
    }

    pub fn airlines(&self) -> impl Iterator<Item = AirlineId> + '_ {
        self.amounts.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.amounts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amounts.is_empty()
    }

    pub fn total(&self) -> S {
        scalar::sum(self.amounts.values().cloned())
    }

    /// Adds `amount` to an airline already in the domain; other airlines are ignored.
    fn credit(&mut self, airline: AirlineId, amount: S) {
        if let Some(slot) = self.amounts.get_mut(&airline) {
            *slot = slot.clone() + amount;
        }
    }

    /// Componentwise sum over the union of both domains.
    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, s) in other.iter() {
            let slot = out.amounts.entry(i).or_insert_with(S::zero);
            *slot = slot.clone() + s.clone();
        }
        out
    }

    /// Same domain and every amount within `tol` (relative, see [`Scalar::approx_eq`]).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.amounts.len() == other.amounts.len()
            && self
                .amounts
                .iter()
                .zip(&other.amounts)
                .all(|((i, a), (k, b))| i == k && a.approx_eq(b, tol))
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Allocation<T> {
        self.amounts.iter().map(|(&i, s)| (i, f(s))).collect()
    }

    /// Airlines with the largest amount.
    pub fn argmax(&self) -> Vec<AirlineId> {
        let Some(best) = self
            .amounts
            .values()
            .cloned()
            .reduce(|a, b| if b > a { b } else { a })
        else {
            return Vec::new();
        };
        self.amounts
            .iter()
            .filter(|(_, s)| **s == best)
            .map(|(&i, _)| i)
            .collect()
    }
}

impl<S> FromIterator<(AirlineId, S)> for Allocation<S> {
    fn from_iter<I: IntoIterator<Item = (AirlineId, S)>>(iter: I) -> Self {
        Self {
            amounts: iter.into_iter().collect(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Weighted,
    Equal,
    R1,
    R2,
    R3,
    R4,
    R5,
}

impl RuleKind {
    pub const ALL: [RuleKind; 7] = [
        RuleKind::Weighted,
        RuleKind::Equal,
        RuleKind::R1,
        RuleKind::R2,
        RuleKind::R3,
        RuleKind::R4,
        RuleKind::R5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Weighted => "weighted",
            Self::Equal => "equal",
            Self::R1 => "r1",
            Self::R2 => "r2",
            Self::R3 => "r3",
            Self::R4 => "r4",
            Self::R5 => "r5",
        }
    }

    /// Whether the rule reads edge weights.
    pub fn uses_weights(self) -> bool {
        matches!(self, Self::Weighted | Self::R1 | Self::R2 | Self::R4)
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}` (expected weighted, equal, r1, r2, r3, r4 or r5)"))
    }
}

/// One weight system per passenger, for `R4`.
pub type PassengerWeights<S> = BTreeMap<PassengerId, WeightSystem<S>>;

/// A rule together with its data. `None` weights mean "use the weight
/// system attached to the problem".
#[derive(Clone, Debug, PartialEq)]
pub enum RuleConfig<S> {
    Weighted(Option<WeightSystem<S>>),
    Equal,
    R1(Option<WeightSystem<S>>),
    R2(Option<WeightSystem<S>>),
    R3,
    R4(PassengerWeights<S>),
    R5,
}

impl<S: Scalar> RuleConfig<S> {
    /// The rule reading the problem's own weights (and, for `R4`, no
    /// per-passenger weights yet).
    pub fn from_kind(kind: RuleKind) -> Self {
        match kind {
            RuleKind::Weighted => Self::Weighted(None),
            RuleKind::Equal => Self::Equal,
            RuleKind::R1 => Self::R1(None),
            RuleKind::R2 => Self::R2(None),
            RuleKind::R3 => Self::R3,
            RuleKind::R4 => Self::R4(BTreeMap::new()),
            RuleKind::R5 => Self::R5,
        }
    }

    pub fn kind(&self) -> RuleKind {
        match self {
            Self::Weighted(_) => RuleKind::Weighted,
            Self::Equal => RuleKind::Equal,
            Self::R1(_) => RuleKind::R1,
            Self::R2(_) => RuleKind::R2,
            Self::R3 => RuleKind::R3,
            Self::R4(_) => RuleKind::R4,
            Self::R5 => RuleKind::R5,
        }
    }
}

fn resolve_weights<'a, S: Scalar>(
    explicit: &'a Option<WeightSystem<S>>,
    problem: &'a AirlinesProblem<S>,
    kind: RuleKind,
) -> Result<&'a WeightSystem<S>, RuleError> {
    explicit
        .as_ref()
        .or(problem.weights.as_ref())
        .ok_or(RuleError::MissingWeightSystem(kind.name()))
}

/// Evaluates `rule` on `problem`. The problem is expected to be valid.
pub fn allocate<S: Scalar>(problem: &AirlinesProblem<S>, rule: &RuleConfig<S>) -> Result<Allocation<S>, RuleError> {
    let kind = rule.kind();
    match rule {
        RuleConfig::Weighted(w) => weighted_flights(problem, resolve_weights(w, problem, kind)?),
        RuleConfig::Equal => Ok(equal_flights(problem)),
        RuleConfig::R1(w) => rule_r1(problem, resolve_weights(w, problem, kind)?),
        RuleConfig::R2(w) => rule_r2(problem, resolve_weights(w, problem, kind)?),
        RuleConfig::R3 => Ok(rule_r3(problem)),
        RuleConfig::R4(pw) => rule_r4(problem, pw),
        RuleConfig::R5 => Ok(rule_r5(problem)),
    }
}

fn weight_of<S: Scalar>(w: &WeightSystem<S>, flight: &FlightKey) -> Result<S, RuleError> {
    w.get(&flight.edge)
        .cloned()
        .ok_or_else(|| RuleError::MissingWeight(flight.edge.clone()))
}

/// Operated weight per airline for one passenger, and the itinerary total.
fn passenger_weights<S: Scalar>(
    index: &Index,
    position: usize,
    w: &WeightSystem<S>,
) -> Result<(Vec<(AirlineId, S)>, S), RuleError> {
    let mut per_airline = Vec::new();
    let mut total = S::zero();
    for (&airline, flights) in index.segments_of(position) {
        let mut sum = S::zero();
        for f in flights {
            sum = sum + weight_of(w, f)?;
        }
        total = total + sum.clone();
        per_airline.push((airline, sum));
    }
    Ok((per_airline, total))
}

/// Splits one price proportionally to per-airline shares into `out`.
fn split_proportionally<S: Scalar>(out: &mut Allocation<S>, shares: Vec<(AirlineId, S)>, total: &S, price: &S) {
    if total.is_zero() {
        return;
    }
    for (airline, share) in shares {
        out.credit(airline, share * price.clone() / total.clone());
    }
}

/// Weighted flights rule: each price is split in proportion to the weight
/// of the flights each airline operates in that itinerary.
pub fn weighted_flights<S: Scalar>(problem: &AirlinesProblem<S>, w: &WeightSystem<S>) -> Result<Allocation<S>, RuleError> {
    let index = build_index(problem);
    let mut out = Allocation::zeros(problem.airlines.iter().copied());
    for (j, p) in problem.passengers.iter().enumerate() {
        let (shares, total) = passenger_weights(&index, j, w)?;
        split_proportionally(&mut out, shares, &total, &p.itinerary.price);
    }
    Ok(out)
}

/// Equal flights rule: each price is split in proportion to the number of
/// flights each airline operates in that itinerary.
pub fn equal_flights<S: Scalar>(problem: &AirlinesProblem<S>) -> Allocation<S> {
    let index = build_index(problem);
    let mut out = Allocation::zeros(problem.airlines.iter().copied());
    for (j, p) in problem.passengers.iter().enumerate() {
        let shares: Vec<(AirlineId, S)> = index
            .segments_of(j)
            .iter()
            .map(|(&i, f)| (i, S::from_count(f.len())))
            .collect();
        let total = S::from_count(p.itinerary.flights.len());
        split_proportionally(&mut out, shares, &total, &p.itinerary.price);
    }
    out
}

/// Splits the pooled revenue in proportion to `score` per airline.
fn pooled<S: Scalar>(problem: &AirlinesProblem<S>, score: BTreeMap<AirlineId, S>) -> Allocation<S> {
    let mut out = Allocation::zeros(problem.airlines.iter().copied());
    let denominator = scalar::sum(score.values().cloned());
    split_proportionally(&mut out, score.into_iter().collect(), &denominator, &problem.total_payments());
    out
}

/// `R1`: total revenue pooled and split by operated weight over all passengers.
pub fn rule_r1<S: Scalar>(problem: &AirlinesProblem<S>, w: &WeightSystem<S>) -> Result<Allocation<S>, RuleError> {
    let index = build_index(problem);
    let mut score: BTreeMap<AirlineId, S> = BTreeMap::new();
    for j in 0..problem.passengers.len() {
        let (shares, _) = passenger_weights(&index, j, w)?;
        for (i, s) in shares {
            let slot = score.entry(i).or_insert_with(S::zero);
            *slot = slot.clone() + s;
        }
    }
    Ok(pooled(problem, score))
}

/// `R2`: each price split equally among the airlines the passenger did not
/// use; a passenger using every airline is settled by the weighted rule.
pub fn rule_r2<S: Scalar>(problem: &AirlinesProblem<S>, w: &WeightSystem<S>) -> Result<Allocation<S>, RuleError> {
    let index = build_index(problem);
    let all: BTreeSet<AirlineId> = problem.airlines.iter().copied().collect();
    let mut out = Allocation::zeros(all.iter().copied());
    for (j, p) in problem.passengers.iter().enumerate() {
        let used = index.airline_set_of(j);
        let unused: Vec<AirlineId> = all.difference(&used).copied().collect();
        if unused.is_empty() {
            let (shares, total) = passenger_weights(&index, j, w)?;
            split_proportionally(&mut out, shares, &total, &p.itinerary.price);
        } else {
            let each = p.itinerary.price.clone() / S::from_count(unused.len());
            for i in unused {
                out.credit(i, each.clone());
            }
        }
    }
    Ok(out)
}

/// `R3`: each price split equally among the airlines the passenger used.
pub fn rule_r3<S: Scalar>(problem: &AirlinesProblem<S>) -> Allocation<S> {
    let index = build_index(problem);
    let mut out = Allocation::zeros(problem.airlines.iter().copied());
    for (j, p) in problem.passengers.iter().enumerate() {
        let used = index.segments_of(j);
        if used.is_empty() {
            continue;
        }
        let each = p.itinerary.price.clone() / S::from_count(used.len());
        for &i in used.keys() {
            out.credit(i, each.clone());
        }
    }
    out
}

/// `R4`: the weighted rule with a separate weight system per passenger.
pub fn rule_r4<S: Scalar>(
    problem: &AirlinesProblem<S>,
    per_passenger: &PassengerWeights<S>,
) -> Result<Allocation<S>, RuleError> {
    let index = build_index(problem);
    let mut out = Allocation::zeros(problem.airlines.iter().copied());
    for (j, p) in problem.passengers.iter().enumerate() {
        let w = per_passenger
            .get(&p.id)
            .ok_or(RuleError::MissingPassengerWeights(p.id))?;
        let (shares, total) = passenger_weights(&index, j, w)?;
        split_proportionally(&mut out, shares, &total, &p.itinerary.price);
    }
    Ok(out)
}

/// `R5`: total revenue pooled and split by number of flights flown over all passengers.
pub fn rule_r5<S: Scalar>(problem: &AirlinesProblem<S>) -> Allocation<S> {
    let index = build_index(problem);
    let mut score: BTreeMap<AirlineId, S> = BTreeMap::new();
    for j in 0..problem.passengers.len() {
        for (&i, f) in index.segments_of(j) {
            let slot = score.entry(i).or_insert_with(S::zero);
            *slot = slot.clone() + S::from_count(f.len());
        }
    }
    pooled(problem, score)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::six_airport_network;
    use crate::model::{restrict, Edge};
    use num_rational::Rational64;

    fn amounts(a: &Allocation<f64>) -> Vec<f64> {
        a.iter().map(|(_, s)| *s).collect()
    }

    fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert!((a - e).abs() <= tol, "{actual:?} vs {expected:?}");
        }
    }

    #[test]
    fn weighted_rule_on_fixture() {
        let a = allocate(&six_airport_network(), &RuleConfig::Weighted(None)).unwrap();
        assert_close(&amounts(&a), &[0.0, 14.6636, 18.2308, 17.9447, 30.1609], 5e-4);
    }

    #[test]
    fn equal_rule_on_fixture_is_exact_in_rationals() {
        let p = six_airport_network().map_scalar(|&x| Rational64::from_integer(x as i64));
        let e = equal_flights(&p);
        let expected: Vec<Rational64> = [0, 43, 31, 28, 60].iter().map(|&n| Rational64::new(n, 2)).collect();
        assert_eq!(e.iter().map(|(_, s)| *s).collect::<Vec<_>>(), expected);
    }

    #[test]
    fn weighted_single_passenger_share() {
        let p = restrict(&six_airport_network(), &BTreeSet::from([PassengerId(1)])).unwrap();
        let w = allocate(&p, &RuleConfig::Weighted(None)).unwrap();
        assert!((w.amount(AirlineId(5)) - 20.0 / 42.0 * 12.0).abs() < 1e-12);
    }

    #[test]
    fn sole_operator_takes_everything() {
        let mut p = six_airport_network();
        p.passengers.truncate(1);
        p.passengers[0].itinerary.flights = vec![FlightKey::new("a", "b", 2)];
        for rule in [RuleConfig::Weighted(None), RuleConfig::Equal, RuleConfig::R3] {
            let a = allocate(&p, &rule).unwrap();
            assert_eq!(a.amount(AirlineId(2)), 12.0);
            assert_eq!(a.total(), 12.0);
        }
    }

    #[test]
    fn constant_weights_reproduce_equal_rule() {
        let p = six_airport_network();
        let sevens = WeightSystem::uniform(&p.edges(), 7.0);
        let w = weighted_flights(&p, &sevens).unwrap();
        assert!(w.approx_eq(&equal_flights(&p), 1e-12));
    }

    #[test]
    fn airline_flying_whole_itinerary_gets_price() {
        let mut p = six_airport_network();
        p.passengers.truncate(1);
        p.passengers[0].itinerary.flights = vec![FlightKey::new("d", "b", 2), FlightKey::new("b", "a", 2)];
        assert_eq!(equal_flights(&p).amount(AirlineId(2)), 12.0);
    }

    #[test]
    fn zero_passengers_give_zeros() {
        let mut p = six_airport_network();
        p.passengers.clear();
        let mut pw = PassengerWeights::new();
        pw.insert(PassengerId(1), p.weights.clone().unwrap());
        for kind in RuleKind::ALL {
            let rule = match kind {
                RuleKind::R4 => RuleConfig::R4(pw.clone()),
                k => RuleConfig::from_kind(k),
            };
            let a = allocate(&p, &rule).unwrap();
            assert_eq!(a.len(), 5);
            assert!(a.iter().all(|(_, s)| *s == 0.0), "{kind}");
        }
    }

    #[test]
    fn missing_weights_are_configuration_errors() {
        let p = six_airport_network().with_weights(None);
        assert_eq!(
            allocate(&p, &RuleConfig::Weighted(None)),
            Err(RuleError::MissingWeightSystem("weighted"))
        );
        let mut partial = six_airport_network().weights.unwrap();
        partial.remove(&Edge::new("e", "c"));
        assert_eq!(
            weighted_flights(&p, &partial),
            Err(RuleError::MissingWeight(Edge::new("e", "c")))
        );
        assert_eq!(
            rule_r4(&p, &PassengerWeights::new()),
            Err(RuleError::MissingPassengerWeights(PassengerId(1)))
        );
    }

    #[test]
    fn r1_null_airline_gets_nothing() {
        let a = allocate(&six_airport_network(), &RuleConfig::R1(None)).unwrap();
        assert_eq!(a.amount(AirlineId(1)), 0.0);
        assert!((a.total() - 81.0).abs() < 1e-12);
    }

    #[test]
    fn r2_first_passenger_goes_to_unused_airlines() {
        let p = restrict(&six_airport_network(), &BTreeSet::from([PassengerId(1)])).unwrap();
        let a = rule_r2(&p, p.weights.as_ref().unwrap()).unwrap();
        assert_eq!(amounts(&a), vec![6.0, 0.0, 6.0, 0.0, 0.0]);
    }

    #[test]
    fn r2_falls_back_to_weighted_when_every_airline_is_used() {
        let mut p = restrict(&six_airport_network(), &BTreeSet::from([PassengerId(1)])).unwrap();
        p.airlines = vec![AirlineId(2), AirlineId(4), AirlineId(5)];
        let w = p.weights.clone().unwrap();
        assert_eq!(rule_r2(&p, &w).unwrap(), weighted_flights(&p, &w).unwrap());
    }

    #[test]
    fn r3_on_fixture() {
        let a = rule_r3(&six_airport_network());
        assert!((a.amount(AirlineId(5)) - 26.0).abs() < 1e-12);
        assert_eq!(a.amount(AirlineId(1)), 0.0);
    }

    #[test]
    fn r4_with_identical_weights_is_weighted_rule() {
        let p = six_airport_network();
        let w = p.weights.clone().unwrap();
        let pw: PassengerWeights<f64> = p.passengers.iter().map(|q| (q.id, w.clone())).collect();
        assert!(rule_r4(&p, &pw).unwrap().approx_eq(&weighted_flights(&p, &w).unwrap(), 1e-12));
    }

    #[test]
    fn r5_pools_eleven_flights() {
        let p = six_airport_network();
        let a = rule_r5(&p);
        // airline 5 flies 1 + 1 + 2 of the 11 flights.
        assert!((a.amount(AirlineId(5)) - 4.0 / 11.0 * 81.0).abs() < 1e-12);
        assert_eq!(a.amount(AirlineId(1)), 0.0);
    }

    #[test]
    fn rule_names_parse() {
        for k in RuleKind::ALL {
            assert_eq!(k.name().parse::<RuleKind>().unwrap(), k);
        }
        assert!("w".parse::<RuleKind>().is_err());
    }
}
