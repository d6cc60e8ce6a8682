//! Airlines problems: airports, flights, passengers and edge weights.
//!
//! A problem is plain data. Nothing here enforces the structural
//! assumptions at construction time; [`validate`] reports every broken
//! assumption instead, so that parsed input and transformed problems can be
//! inspected as they are.

mod file;
mod index;
mod transform;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{self, Scalar};

pub use file::{FileFormatError, FlightRecord, PassengerRecord, ProblemFile, WeightRecord};
pub use index::{build_index, AirlineView, Index};
pub use transform::{cancel_empty_flight, reassign, restrict, Reassignment};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AirportCode(String);

impl AirportCode {
    pub fn new(code: impl Into<String>) -> Self {
        Self(code.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for AirportCode {
    fn from(code: &str) -> Self {
        Self::new(code)
    }
}

impl fmt::Display for AirportCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Airline identifier. Valid ids are positive.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AirlineId(pub u32);

impl fmt::Display for AirlineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PassengerId(pub u64);

impl fmt::Display for PassengerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Directed airport pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub origin: AirportCode,
    pub destination: AirportCode,
}

impl Edge {
    pub fn new(origin: impl Into<AirportCode>, destination: impl Into<AirportCode>) -> Self {
        Self {
            origin: origin.into(),
            destination: destination.into(),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.origin, self.destination)
    }
}

/// A flight: an edge together with the airline operating it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlightKey {
    pub edge: Edge,
    pub airline: AirlineId,
}

impl FlightKey {
    pub fn new(origin: impl Into<AirportCode>, destination: impl Into<AirportCode>, airline: u32) -> Self {
        Self {
            edge: Edge::new(origin, destination),
            airline: AirlineId(airline),
        }
    }
}

impl fmt::Display for FlightKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.edge, self.airline)
    }
}

/// Ordered flights of one journey and the price paid for it.
#[derive(Clone, Debug, PartialEq)]
pub struct Itinerary<S> {
    pub flights: Vec<FlightKey>,
    pub price: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Passenger<S> {
    pub id: PassengerId,
    pub itinerary: Itinerary<S>,
}

/// Positive weight per edge. Weights never depend on the operating airline.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSystem<S> {
    weights: BTreeMap<Edge, S>,
}

impl<S: Scalar> WeightSystem<S> {
    pub fn new() -> Self {
        Self {
            weights: BTreeMap::new(),
        }
    }

    /// The same weight on every listed edge.
    pub fn uniform<'a>(edges: impl IntoIterator<Item = &'a Edge>, weight: S) -> Self {
        edges.into_iter().map(|e| (e.clone(), weight.clone())).collect()
    }

    pub fn get(&self, edge: &Edge) -> Option<&S> {
        self.weights.get(edge)
    }

    pub fn insert(&mut self, edge: Edge, weight: S) -> Option<S> {
        self.weights.insert(edge, weight)
    }

    pub fn remove(&mut self, edge: &Edge) -> Option<S> {
        self.weights.remove(edge)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, &S)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Every weight multiplied by `factor`.
    pub fn scaled(&self, factor: &S) -> Self {
        self.weights
            .iter()
            .map(|(e, w)| (e.clone(), w.clone() * factor.clone()))
            .collect()
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> WeightSystem<T> {
        self.weights.iter().map(|(e, w)| (e.clone(), f(w))).collect()
    }
}

impl<S: Scalar> Default for WeightSystem<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S> FromIterator<(Edge, S)> for WeightSystem<S> {
    fn from_iter<I: IntoIterator<Item = (Edge, S)>>(iter: I) -> Self {
        Self {
            weights: iter.into_iter().collect(),
        }
    }
}

/// An airlines problem over a fixed airport graph.
#[derive(Clone, Debug, PartialEq)]
pub struct AirlinesProblem<S> {
    pub airports: Vec<AirportCode>,
    pub airlines: Vec<AirlineId>,
    pub flights: Vec<FlightKey>,
    pub passengers: Vec<Passenger<S>>,
    pub weights: Option<WeightSystem<S>>,
}

impl<S: Scalar> AirlinesProblem<S> {
    /// Sum of all prices paid.
    pub fn total_payments(&self) -> S {
        scalar::sum(self.passengers.iter().map(|p| p.itinerary.price.clone()))
    }

    pub fn passenger(&self, id: PassengerId) -> Option<&Passenger<S>> {
        self.passengers.iter().find(|p| p.id == id)
    }

    pub fn passenger_ids(&self) -> Vec<PassengerId> {
        self.passengers.iter().map(|p| p.id).collect()
    }

    /// Distinct edges carried by at least one flight.
    pub fn edges(&self) -> BTreeSet<Edge> {
        self.flights.iter().map(|f| f.edge.clone()).collect()
    }

    /// Flights of F that no itinerary uses.
    pub fn empty_flights(&self) -> Vec<FlightKey> {
        let used: BTreeSet<&FlightKey> = self
            .passengers
            .iter()
            .flat_map(|p| p.itinerary.flights.iter())
            .collect();
        self.flights.iter().filter(|f| !used.contains(f)).cloned().collect()
    }

    pub fn with_weights(mut self, weights: Option<WeightSystem<S>>) -> Self {
        self.weights = weights;
        self
    }

    /// Converts prices and weights to another scalar type.
    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AirlinesProblem<T> {
        AirlinesProblem {
            airports: self.airports.clone(),
            airlines: self.airlines.clone(),
            flights: self.flights.clone(),
            passengers: self
                .passengers
                .iter()
                .map(|p| Passenger {
                    id: p.id,
                    itinerary: Itinerary {
                        flights: p.itinerary.flights.clone(),
                        price: f(&p.itinerary.price),
                    },
                })
                .collect(),
            weights: self.weights.as_ref().map(|w| w.map_scalar(&f)),
        }
    }
}
