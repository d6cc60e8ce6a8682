use thiserror::Error;

use crate::model::{AirlineId, Edge, FlightKey, PassengerId};

/// Invalid arguments to a problem transformation.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown passenger {0}")]
    UnknownPassenger(PassengerId),
    #[error("flight {0} is not in the flight set")]
    UnknownFlight(FlightKey),
    #[error("flight {flight} is not empty: passenger {passenger} uses it")]
    FlightNotEmpty { flight: FlightKey, passenger: PassengerId },
    #[error("reassignment does not cover flight {0}")]
    PartialReassignment(FlightKey),
    #[error("reassignment makes airline {} operate edge {} twice", .0.airline, .0.edge)]
    DuplicateAfterReassignment(FlightKey),
    #[error("airline id 0 is not valid")]
    ZeroAirline,
}

/// A rule was asked to run without the data it needs.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule {0} needs a weight system and none was given")]
    MissingWeightSystem(&'static str),
    #[error("no weight for edge {0}")]
    MissingWeight(Edge),
    #[error("no weight system for passenger {0}")]
    MissingPassengerWeights(PassengerId),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("infeasible generator bounds: {0}")]
    InfeasibleBounds(String),
    #[error("no instance satisfying the constraints after {attempts} attempts")]
    Exhausted { attempts: usize },
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum IataError {
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("airport {0} has no region")]
    MissingRegion(String),
    #[error("no regional factor for {from} -> {to}")]
    MissingFactor { from: String, to: String },
    #[error("all proration factors are zero")]
    DegenerateFactors,
    #[error("itinerary has no segments")]
    NoSegments,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("{players} players exceed the limit of {limit} for this computation")]
    TooManyPlayers { players: usize, limit: usize },
    #[error("allocation has no amount for airline {0}")]
    MissingPlayer(AirlineId),
}
