use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::{AirlinesProblem, AirportCode, FlightKey};
use crate::scalar::Scalar;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    EmptyAirportCode,
    DuplicateAirport,
    InvalidAirlineId,
    DuplicateAirline,
    SelfLoopFlight,
    DuplicateFlight,
    FlightAirlineUnknown,
    FlightAirportUnknown,
    AirlineWithoutFlights,
    DuplicatePassenger,
    EmptyItinerary,
    ItineraryFlightNotInF,
    ItineraryNotPath,
    ItineraryRepeatsFlight,
    NonPositivePrice,
    AirportsNotConnected,
    MissingWeight,
    NonPositiveWeight,
}

impl ViolationKind {
    pub fn description(self) -> &'static str {
        match self {
            Self::EmptyAirportCode => "airport code is empty",
            Self::DuplicateAirport => "airport listed twice",
            Self::InvalidAirlineId => "airline id must be positive",
            Self::DuplicateAirline => "airline listed twice",
            Self::SelfLoopFlight => "flight origin equals destination",
            Self::DuplicateFlight => "airline operates the same edge twice",
            Self::FlightAirlineUnknown => "flight airline not in airline set",
            Self::FlightAirportUnknown => "flight airport not in airport set",
            Self::AirlineWithoutFlights => "airline operates no flight",
            Self::DuplicatePassenger => "passenger id listed twice",
            Self::EmptyItinerary => "itinerary has no flights",
            Self::ItineraryFlightNotInF => "itinerary flight not in F",
            Self::ItineraryNotPath => "itinerary not a path",
            Self::ItineraryRepeatsFlight => "itinerary repeats a flight",
            Self::NonPositivePrice => "price must be positive",
            Self::AirportsNotConnected => "airports not connected",
            Self::MissingWeight => "edge has no weight",
            Self::NonPositiveWeight => "weight must be positive",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.description())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// The offending element, rendered for humans.
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    /// Everything except connectivity holds.
    pub fn ok_ignoring_connectivity(&self) -> bool {
        self.violations.iter().all(|v| v.kind == ViolationKind::AirportsNotConnected)
    }
}

/// Checks every structural assumption of an airlines problem and reports
/// all violations found. Never fails.
// Positivity checks are written negated so that NaN is rejected.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn validate<S: Scalar>(problem: &AirlinesProblem<S>) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |kind: ViolationKind, detail: String| out.push(Violation { kind, detail });

    let mut airports = BTreeSet::new();
    for a in &problem.airports {
        if a.as_str().is_empty() {
            push(ViolationKind::EmptyAirportCode, "\"\"".into());
        }
        if !airports.insert(a) {
            push(ViolationKind::DuplicateAirport, a.to_string());
        }
    }

    let mut airlines = BTreeSet::new();
    for &i in &problem.airlines {
        if i.0 == 0 {
            push(ViolationKind::InvalidAirlineId, i.to_string());
        }
        if !airlines.insert(i) {
            push(ViolationKind::DuplicateAirline, i.to_string());
        }
    }

    let mut flights = BTreeSet::new();
    let mut operating = BTreeSet::new();
    for f in &problem.flights {
        if f.edge.origin == f.edge.destination {
            push(ViolationKind::SelfLoopFlight, f.to_string());
        }
        if !flights.insert(f) {
            push(ViolationKind::DuplicateFlight, f.to_string());
        }
        if !airlines.contains(&f.airline) {
            push(ViolationKind::FlightAirlineUnknown, f.to_string());
        }
        if f.airline.0 == 0 {
            push(ViolationKind::InvalidAirlineId, f.to_string());
        }
        for end in [&f.edge.origin, &f.edge.destination] {
            if !airports.contains(end) {
                push(ViolationKind::FlightAirportUnknown, format!("{end} in {f}"));
            }
        }
        operating.insert(f.airline);
    }
    for i in &airlines {
        if !operating.contains(i) {
            push(ViolationKind::AirlineWithoutFlights, i.to_string());
        }
    }

    let mut passenger_ids = BTreeSet::new();
    for p in &problem.passengers {
        let who = format!("passenger {}", p.id);
        if !passenger_ids.insert(p.id) {
            push(ViolationKind::DuplicatePassenger, who.clone());
        }
        let it = &p.itinerary;
        if it.flights.is_empty() {
            push(ViolationKind::EmptyItinerary, who.clone());
        }
        if !(it.price > S::zero()) {
            push(ViolationKind::NonPositivePrice, format!("{who}: {:?}", it.price));
        }
        let mut seen = BTreeSet::new();
        for f in &it.flights {
            if !flights.contains(f) {
                push(ViolationKind::ItineraryFlightNotInF, format!("{who}: {f}"));
            }
            if !seen.insert(f) {
                push(ViolationKind::ItineraryRepeatsFlight, format!("{who}: {f}"));
            }
        }
        for pair in it.flights.windows(2) {
            if pair[0].edge.destination != pair[1].edge.origin {
                push(
                    ViolationKind::ItineraryNotPath,
                    format!("{who}: {} does not continue {}", pair[1], pair[0]),
                );
            }
        }
    }

    if let Some(weights) = &problem.weights {
        for e in problem.edges() {
            match weights.get(&e) {
                None => push(ViolationKind::MissingWeight, e.to_string()),
                Some(w) if !(*w > S::zero()) => push(ViolationKind::NonPositiveWeight, format!("{e}: {w:?}")),
                Some(_) => {}
            }
        }
    }

    for (a, b) in unreachable_pairs(&problem.airports, &problem.flights) {
        push(ViolationKind::AirportsNotConnected, format!("no path from {a} to {b}"));
    }

    ValidationReport::from_violations(out)
}

/// Ordered pairs `(a, b)`, `a != b`, with no directed path from `a` to `b`.
pub(crate) fn unreachable_pairs(airports: &[AirportCode], flights: &[FlightKey]) -> Vec<(AirportCode, AirportCode)> {
    let nodes: BTreeSet<&AirportCode> = airports.iter().collect();
    let mut adjacency: BTreeMap<&AirportCode, BTreeSet<&AirportCode>> = BTreeMap::new();
    for f in flights {
        adjacency.entry(&f.edge.origin).or_default().insert(&f.edge.destination);
    }
    let mut missing = Vec::new();
    for &start in &nodes {
        let mut reached = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            for &next in adjacency.get(node).into_iter().flatten() {
                if reached.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        for &target in &nodes {
            if target != start && !reached.contains(target) {
                missing.push((start.clone(), target.clone()));
            }
        }
    }
    missing
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::six_airport_network;
    use crate::model::{Edge, FlightKey, PassengerId};

    #[test]
    fn fixture_is_valid() {
        let report = validate(&six_airport_network());
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn itinerary_flight_missing_from_flight_set() {
        let mut p = six_airport_network();
        let ec5 = FlightKey::new("e", "c", 5);
        p.flights.retain(|f| *f != ec5);
        let report = validate(&p);
        assert!(!report.ok);
        assert!(report.has(ViolationKind::ItineraryFlightNotInF));
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::ItineraryFlightNotInF && v.detail.contains("passenger 1")));
    }

    #[test]
    fn reordered_itinerary_is_not_a_path() {
        let mut p = six_airport_network();
        p.passengers[0].itinerary.flights = vec![
            FlightKey::new("b", "e", 4),
            FlightKey::new("a", "b", 2),
            FlightKey::new("e", "c", 5),
        ];
        let report = validate(&p);
        assert!(report.has(ViolationKind::ItineraryNotPath));
        assert_eq!(report.violations.len(), 2, "{:?}", report.violations);
    }

    #[test]
    fn reports_each_broken_assumption() {
        let mut p = six_airport_network();
        p.airlines.push(crate::model::AirlineId(9));
        p.flights.push(FlightKey::new("a", "a", 2));
        p.flights.push(FlightKey::new("a", "b", 2));
        p.passengers[1].id = PassengerId(1);
        p.passengers[2].itinerary.price = -1.0;
        p.passengers[3].itinerary.flights.clear();
        p.weights.as_mut().unwrap().insert(Edge::new("a", "b"), 0.0);
        let report = validate(&p);
        for kind in [
            ViolationKind::AirlineWithoutFlights,
            ViolationKind::SelfLoopFlight,
            ViolationKind::DuplicateFlight,
            ViolationKind::DuplicatePassenger,
            ViolationKind::NonPositivePrice,
            ViolationKind::EmptyItinerary,
            ViolationKind::NonPositiveWeight,
            ViolationKind::MissingWeight,
        ] {
            assert!(report.has(kind), "missing {kind:?} in {:?}", report.violations);
        }
        assert!(!report.ok);
    }

    #[test]
    fn disconnected_graph_is_reported() {
        let mut p = six_airport_network();
        // f is only reachable through (d,f) and (e,f); drop both.
        p.flights.retain(|f| f.edge.destination.as_str() != "f");
        p.airlines.retain(|i| i.0 != 1);
        p.passengers.remove(1);
        let report = validate(&p);
        assert!(report.has(ViolationKind::AirportsNotConnected));
        assert!(report.ok_ignoring_connectivity(), "{:?}", report.violations);
    }

    #[test]
    fn zero_passenger_problem_is_valid() {
        let mut p = six_airport_network();
        p.passengers.clear();
        assert!(validate(&p).ok);
    }
}
