//! JSON problem file format.
//!
//! ```json
//! {"airports":["a","b"], "airlines":[1],
//!  "flights":[{"from":"a","to":"b","airline":1}],
//!  "weights":[{"from":"a","to":"b","w":3.5}],
//!  "passengers":[{"id":1,"price":10,"itinerary":[{"from":"a","to":"b","airline":1}]}]}
//! ```
//!
//! `weights` is optional. Numbers are read as `f64`; conversion into other
//! scalar types happens after parsing.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AirlineId, AirlinesProblem, Edge, FlightKey, Itinerary, Passenger, PassengerId, WeightSystem};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum FileFormatError {
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlightRecord {
    pub from: String,
    pub to: String,
    pub airline: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightRecord {
    pub from: String,
    pub to: String,
    pub w: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PassengerRecord {
    pub id: u64,
    pub price: f64,
    pub itinerary: Vec<FlightRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub airports: Vec<String>,
    pub airlines: Vec<u32>,
    pub flights: Vec<FlightRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightRecord>>,
    pub passengers: Vec<PassengerRecord>,
}

impl FlightRecord {
    pub fn to_key(&self) -> FlightKey {
        FlightKey::new(self.from.as_str(), self.to.as_str(), self.airline)
    }

    pub fn from_key(key: &FlightKey) -> Self {
        Self {
            from: key.edge.origin.as_str().to_owned(),
            to: key.edge.destination.as_str().to_owned(),
            airline: key.airline.0,
        }
    }
}

impl WeightRecord {
    pub fn records<S: Scalar>(weights: &WeightSystem<S>) -> Vec<Self> {
        weights
            .iter()
            .map(|(e, w)| Self {
                from: e.origin.as_str().to_owned(),
                to: e.destination.as_str().to_owned(),
                w: w.to_f64_lossy(),
            })
            .collect()
    }

    pub fn into_system<S: Scalar>(records: &[Self]) -> WeightSystem<S> {
        records
            .iter()
            .map(|r| (Edge::new(r.from.as_str(), r.to.as_str()), S::from_f64_lossy(r.w)))
            .collect()
    }
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, FileFormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serializes")
    }

    pub fn from_problem<S: Scalar>(problem: &AirlinesProblem<S>) -> Self {
        Self {
            airports: problem.airports.iter().map(|a| a.as_str().to_owned()).collect(),
            airlines: problem.airlines.iter().map(|a| a.0).collect(),
            flights: problem.flights.iter().map(FlightRecord::from_key).collect(),
            weights: problem.weights.as_ref().map(WeightRecord::records),
            passengers: problem
                .passengers
                .iter()
                .map(|p| PassengerRecord {
                    id: p.id.0,
                    price: p.itinerary.price.to_f64_lossy(),
                    itinerary: p.itinerary.flights.iter().map(FlightRecord::from_key).collect(),
                })
                .collect(),
        }
    }

    pub fn into_problem(self) -> AirlinesProblem<f64> {
        self.to_problem()
    }

    /// Builds the in-memory problem in any scalar type.
    pub fn to_problem<S: Scalar>(&self) -> AirlinesProblem<S> {
        AirlinesProblem {
            airports: self.airports.iter().map(|a| a.as_str().into()).collect(),
            airlines: self.airlines.iter().map(|&a| AirlineId(a)).collect(),
            flights: self.flights.iter().map(FlightRecord::to_key).collect(),
            passengers: self
                .passengers
                .iter()
                .map(|p| Passenger {
                    id: PassengerId(p.id),
                    itinerary: Itinerary {
                        flights: p.itinerary.iter().map(FlightRecord::to_key).collect(),
                        price: S::from_f64_lossy(p.price),
                    },
                })
                .collect(),
            weights: self.weights.as_deref().map(WeightRecord::into_system),
        }
    }
}
