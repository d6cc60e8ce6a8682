//! The three problem transformations the axioms are stated over.

use std::collections::{BTreeMap, BTreeSet};

use super::{AirlineId, AirlinesProblem, FlightKey, Itinerary, Passenger, PassengerId};
use crate::error::ModelError;
use crate::scalar::Scalar;

/// Keeps only the passengers in `keep`, in their original order.
pub fn restrict<S: Scalar>(
    problem: &AirlinesProblem<S>,
    keep: &BTreeSet<PassengerId>,
) -> Result<AirlinesProblem<S>, ModelError> {
    let known: BTreeSet<PassengerId> = problem.passengers.iter().map(|p| p.id).collect();
    if let Some(&missing) = keep.difference(&known).next() {
        return Err(ModelError::UnknownPassenger(missing));
    }
    Ok(AirlinesProblem {
        passengers: problem
            .passengers
            .iter()
            .filter(|p| keep.contains(&p.id))
            .cloned()
            .collect(),
        ..problem.clone()
    })
}

/// Removes an empty flight. Its airline leaves the problem if that was its
/// only flight; the edge weight is dropped once no airline flies the edge.
pub fn cancel_empty_flight<S: Scalar>(
    problem: &AirlinesProblem<S>,
    flight: &FlightKey,
) -> Result<AirlinesProblem<S>, ModelError> {
    if !problem.flights.contains(flight) {
        return Err(ModelError::UnknownFlight(flight.clone()));
    }
    if let Some(p) = problem.passengers.iter().find(|p| p.itinerary.flights.contains(flight)) {
        return Err(ModelError::FlightNotEmpty {
            flight: flight.clone(),
            passenger: p.id,
        });
    }
    let flights: Vec<FlightKey> = problem.flights.iter().filter(|f| *f != flight).cloned().collect();
    let still_operates = flights.iter().any(|f| f.airline == flight.airline);
    let airlines = problem
        .airlines
        .iter()
        .copied()
        .filter(|&i| i != flight.airline || still_operates)
        .collect();
    let weights = problem.weights.as_ref().map(|w| {
        let mut w = w.clone();
        if !flights.iter().any(|f| f.edge == flight.edge) {
            w.remove(&flight.edge);
        }
        w
    });
    Ok(AirlinesProblem {
        airports: problem.airports.clone(),
        airlines,
        flights,
        passengers: problem.passengers.clone(),
        weights,
    })
}

/// A map sending each flight to the airline that operates it afterwards.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reassignment {
    map: BTreeMap<FlightKey, AirlineId>,
}

impl Reassignment {
    pub fn identity<S>(problem: &AirlinesProblem<S>) -> Self {
        problem.flights.iter().map(|f| (f.clone(), f.airline)).collect()
    }

    pub fn get(&self, flight: &FlightKey) -> Option<AirlineId> {
        self.map.get(flight).copied()
    }

    pub fn set(&mut self, flight: FlightKey, airline: AirlineId) {
        self.map.insert(flight, airline);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FlightKey, &AirlineId)> {
        self.map.iter()
    }

    fn apply(&self, flight: &FlightKey) -> Result<FlightKey, ModelError> {
        let airline = self
            .get(flight)
            .ok_or_else(|| ModelError::PartialReassignment(flight.clone()))?;
        Ok(FlightKey {
            edge: flight.edge.clone(),
            airline,
        })
    }
}

impl FromIterator<(FlightKey, AirlineId)> for Reassignment {
    fn from_iter<I: IntoIterator<Item = (FlightKey, AirlineId)>>(iter: I) -> Self {
        Self {
            map: iter.into_iter().collect(),
        }
    }
}

/// Rewrites every flight `(e, i)` as `(e, sigma(e, i))`.
///
/// Airlines keep their original order; airlines that appear only after the
/// reassignment follow in ascending id order.
pub fn reassign<S: Scalar>(
    problem: &AirlinesProblem<S>,
    sigma: &Reassignment,
) -> Result<AirlinesProblem<S>, ModelError> {
    let mut flights = Vec::with_capacity(problem.flights.len());
    let mut seen = BTreeSet::new();
    for f in &problem.flights {
        let mapped = sigma.apply(f)?;
        if mapped.airline.0 == 0 {
            return Err(ModelError::ZeroAirline);
        }
        if !seen.insert(mapped.clone()) {
            return Err(ModelError::DuplicateAfterReassignment(mapped));
        }
        flights.push(mapped);
    }
    let operating: BTreeSet<AirlineId> = flights.iter().map(|f| f.airline).collect();
    let mut airlines: Vec<AirlineId> = problem
        .airlines
        .iter()
        .copied()
        .filter(|i| operating.contains(i))
        .collect();
    let kept: BTreeSet<AirlineId> = airlines.iter().copied().collect();
    airlines.extend(operating.difference(&kept).copied());

    let passengers = problem
        .passengers
        .iter()
        .map(|p| {
            let flights = p
                .itinerary
                .flights
                .iter()
                .map(|f| sigma.apply(f))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Passenger {
                id: p.id,
                itinerary: Itinerary {
                    flights,
                    price: p.itinerary.price.clone(),
                },
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;

    Ok(AirlinesProblem {
        airports: problem.airports.clone(),
        airlines,
        flights,
        passengers,
        weights: problem.weights.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::six_airport_network;
    use crate::model::{validate, Edge};

    fn ids(ids: &[u64]) -> BTreeSet<PassengerId> {
        ids.iter().map(|&i| PassengerId(i)).collect()
    }

    #[test]
    fn restrict_to_everyone_is_identity() {
        let p = six_airport_network();
        assert_eq!(restrict(&p, &ids(&[1, 2, 3, 4])).unwrap(), p);
    }

    #[test]
    fn restrict_to_nobody_keeps_network() {
        let p = six_airport_network();
        let r = restrict(&p, &BTreeSet::new()).unwrap();
        assert!(r.passengers.is_empty());
        assert_eq!(r.flights, p.flights);
        assert_eq!(r.airlines, p.airlines);
        assert_eq!(r.weights, p.weights);
    }

    #[test]
    fn restrict_to_single_passenger() {
        let r = restrict(&six_airport_network(), &ids(&[1])).unwrap();
        assert_eq!(r.passenger_ids(), vec![PassengerId(1)]);
        assert_eq!(r.total_payments(), 12.0);
    }

    #[test]
    fn restrict_rejects_unknown_passenger() {
        let err = restrict(&six_airport_network(), &ids(&[1, 7])).unwrap_err();
        assert_eq!(err, ModelError::UnknownPassenger(PassengerId(7)));
    }

    #[test]
    fn cancel_empty_flight_of_multi_flight_airline() {
        let p = six_airport_network();
        let c = cancel_empty_flight(&p, &FlightKey::new("b", "a", 2)).unwrap();
        assert_eq!(c.airlines, p.airlines);
        assert_eq!(c.flights.len(), p.flights.len() - 1);
        // (b,a) is flown by nobody else, so its weight goes too.
        assert!(c.weights.as_ref().unwrap().get(&Edge::new("b", "a")).is_none());
        assert_eq!(c.passengers, p.passengers);
    }

    #[test]
    fn cancel_only_flight_removes_airline() {
        let p = six_airport_network();
        let c = cancel_empty_flight(&p, &FlightKey::new("d", "f", 1)).unwrap();
        assert!(!c.airlines.contains(&AirlineId(1)));
        assert_eq!(c.airlines.len(), 4);
    }

    #[test]
    fn cancel_used_flight_is_rejected() {
        let err = cancel_empty_flight(&six_airport_network(), &FlightKey::new("a", "b", 2)).unwrap_err();
        assert!(matches!(err, ModelError::FlightNotEmpty { passenger: PassengerId(1), .. }));
    }

    #[test]
    fn cancel_unknown_flight_is_rejected() {
        let err = cancel_empty_flight(&six_airport_network(), &FlightKey::new("a", "c", 2)).unwrap_err();
        assert!(matches!(err, ModelError::UnknownFlight(_)));
    }

    #[test]
    fn cancel_keeps_weight_of_edge_still_flown() {
        let mut p = six_airport_network();
        // Make (b,e) by airline 2 empty by rerouting passenger 2 onto airline 4.
        p.passengers[1].itinerary.flights[0] = FlightKey::new("b", "e", 4);
        let c = cancel_empty_flight(&p, &FlightKey::new("b", "e", 2)).unwrap();
        assert_eq!(c.weights.as_ref().unwrap().get(&Edge::new("b", "e")), Some(&12.0));
    }

    #[test]
    fn identity_reassignment() {
        let p = six_airport_network();
        assert_eq!(reassign(&p, &Reassignment::identity(&p)).unwrap(), p);
    }

    #[test]
    fn one_fresh_airline_per_flight() {
        let p = six_airport_network();
        let sigma: Reassignment = p
            .flights
            .iter()
            .enumerate()
            .map(|(k, f)| (f.clone(), AirlineId(100 + k as u32)))
            .collect();
        let r = reassign(&p, &sigma).unwrap();
        assert_eq!(r.airlines.len(), 12);
        assert_eq!(r.flights.len(), 12);
        assert!(validate(&r).ok);
    }

    #[test]
    fn swap_within_an_edge() {
        let p = six_airport_network();
        let mut sigma = Reassignment::identity(&p);
        sigma.set(FlightKey::new("b", "e", 2), AirlineId(4));
        sigma.set(FlightKey::new("b", "e", 4), AirlineId(2));
        let r = reassign(&p, &sigma).unwrap();
        assert_eq!(r.passengers[0].itinerary.flights[1], FlightKey::new("b", "e", 2));
        assert!(validate(&r).ok);
    }

    #[test]
    fn partial_and_colliding_reassignments_fail() {
        let p = six_airport_network();
        let mut partial = Reassignment::identity(&p);
        partial.map.remove(&FlightKey::new("d", "f", 1));
        assert!(matches!(reassign(&p, &partial), Err(ModelError::PartialReassignment(_))));

        let mut colliding = Reassignment::identity(&p);
        colliding.set(FlightKey::new("b", "e", 2), AirlineId(4));
        assert!(matches!(
            reassign(&p, &colliding),
            Err(ModelError::DuplicateAfterReassignment(_))
        ));
    }
}
