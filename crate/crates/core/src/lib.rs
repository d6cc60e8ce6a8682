//! Revenue allocation for passenger itineraries flown by several airlines.
//!
//! * [`model`]: airlines problems, validation and the problem transformations.
//! * [`rules`]: the weighted and equal flights rules and the comparison rules `R1`..`R5`.
//! * [`axioms`]: executable fairness axioms, seeded instance generation and audits.
//! * [`iata`]: mileage-based proration with regional factors and rounded SPFs.
//! * [`game`]: the pessimistic cooperative game, its Shapley value, convexity and core checks.
//!
//! All routines except the IATA pipeline are generic over [`Scalar`], so the
//! same code runs in `f64`, `f32` or exact rational arithmetic. The aliases
//! below fix the common choices.

pub mod axioms;
pub mod error;
pub mod game;
pub mod iata;
pub mod model;
pub mod rules;
pub mod scalar;

pub use error::{AxiomError, GameError, GenerationError, IataError, ModelError, RuleError};
pub use model::{
    AirlineId, AirlinesProblem, AirportCode, Edge, FlightKey, Itinerary, Passenger, PassengerId, WeightSystem,
};
pub use rules::{Allocation, RuleKind, RuleConfig};
pub use scalar::Scalar;

pub use num_rational::{BigRational, Rational64};

/// Problem with `f64` prices and weights, the format files are read into.
pub type Problem = AirlinesProblem<f64>;
pub type Problem32 = AirlinesProblem<f32>;
/// Problem in exact rational arithmetic.
pub type ExactProblem = AirlinesProblem<Rational64>;
pub type BigExactProblem = AirlinesProblem<BigRational>;

pub type Weights = WeightSystem<f64>;
pub type ExactWeights = WeightSystem<Rational64>;

pub type AllocationF64 = Allocation<f64>;
pub type AllocationF32 = Allocation<f32>;
pub type ExactAllocation = Allocation<Rational64>;
pub type BigExactAllocation = Allocation<BigRational>;

pub type Rule = RuleConfig<f64>;
pub type ExactRule = RuleConfig<Rational64>;

pub type Game = game::CharacteristicFunction<f64>;
pub type ExactGame = game::CharacteristicFunction<Rational64>;
pub type BigExactGame = game::CharacteristicFunction<BigRational>;
