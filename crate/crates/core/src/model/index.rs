use std::collections::{BTreeMap, BTreeSet};

use super::{AirlineId, AirlinesProblem, Edge, FlightKey, PassengerId};
use crate::scalar::Scalar;

/// What one airline offers and whom it carries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AirlineView {
    /// Edges the airline operates (E_i).
    pub edges: BTreeSet<Edge>,
    /// Flights the airline offers (f_i).
    pub flights: BTreeSet<FlightKey>,
    /// Passengers with at least one flight on the airline (M_i).
    pub passengers: BTreeSet<PassengerId>,
}

/// Derived sets of a problem. Passengers are addressed by their position in
/// `problem.passengers`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Index {
    airlines: BTreeMap<AirlineId, AirlineView>,
    passenger_ids: Vec<PassengerId>,
    /// f_i^j, grouped by airline, per passenger position.
    segments: Vec<BTreeMap<AirlineId, Vec<FlightKey>>>,
}

static NO_FLIGHTS: Vec<FlightKey> = Vec::new();

impl Index {
    pub fn airline(&self, airline: AirlineId) -> Option<&AirlineView> {
        self.airlines.get(&airline)
    }

    pub fn airlines(&self) -> impl Iterator<Item = (&AirlineId, &AirlineView)> {
        self.airlines.iter()
    }

    /// An airline with no passengers (M_i empty).
    pub fn is_null_airline(&self, airline: AirlineId) -> bool {
        self.airline(airline).is_none_or(|v| v.passengers.is_empty())
    }

    pub fn passenger_count(&self) -> usize {
        self.passenger_ids.len()
    }

    pub fn position_of(&self, id: PassengerId) -> Option<usize> {
        self.passenger_ids.iter().position(|&p| p == id)
    }

    /// N^j: airlines operating at least one flight of the passenger.
    pub fn airlines_of(&self, position: usize) -> impl Iterator<Item = AirlineId> + '_ {
        self.segments[position].keys().copied()
    }

    pub fn airline_set_of(&self, position: usize) -> BTreeSet<AirlineId> {
        self.airlines_of(position).collect()
    }

    /// f_i^j in itinerary order; empty when the airline does not fly the passenger.
    pub fn flights_of(&self, position: usize, airline: AirlineId) -> &[FlightKey] {
        self.segments[position].get(&airline).unwrap_or(&NO_FLIGHTS)
    }

    pub fn segments_of(&self, position: usize) -> &BTreeMap<AirlineId, Vec<FlightKey>> {
        &self.segments[position]
    }
}

/// Computes E_i, f_i, M_i, N^j and f_i^j for every airline and passenger.
pub fn build_index<S: Scalar>(problem: &AirlinesProblem<S>) -> Index {
    let mut airlines: BTreeMap<AirlineId, AirlineView> =
        problem.airlines.iter().map(|&i| (i, AirlineView::default())).collect();
    for f in &problem.flights {
        let view = airlines.entry(f.airline).or_default();
        view.edges.insert(f.edge.clone());
        view.flights.insert(f.clone());
    }
    let mut segments = Vec::with_capacity(problem.passengers.len());
    for p in &problem.passengers {
        let mut by_airline: BTreeMap<AirlineId, Vec<FlightKey>> = BTreeMap::new();
        for f in &p.itinerary.flights {
            by_airline.entry(f.airline).or_default().push(f.clone());
            airlines.entry(f.airline).or_default().passengers.insert(p.id);
        }
        segments.push(by_airline);
    }
    Index {
        airlines,
        passenger_ids: problem.passenger_ids(),
        segments,
    }
}
