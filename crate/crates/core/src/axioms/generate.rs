//! Seeded random airlines problems.
//!
//! Each trial draws from its own ChaCha stream, `trial_rng(seed, trial)`, so
//! trials can be generated in any order or in parallel with the same result.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GenerationError;
use crate::model::{
    validate, AirlineId, AirlinesProblem, AirportCode, Edge, FlightKey, Itinerary, Passenger, PassengerId,
    Reassignment, WeightSystem,
};

const MAX_ATTEMPTS: usize = 200;
const SECOND_AIRLINE_PROBABILITY: f64 = 0.3;
const SHARED_PREFIX_PROBABILITY: f64 = 0.5;
const MAX_WEIGHT: u32 = 30;
const MAX_PRICE: u32 = 100;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeBounds {
    pub max_airports: usize,
    /// Directed edges, counting the ones of the spanning cycle.
    pub max_edges: usize,
    pub max_airlines: u32,
    pub max_passengers: usize,
    pub max_itinerary_len: usize,
}

impl Default for SizeBounds {
    fn default() -> Self {
        Self {
            max_airports: 6,
            max_edges: 8,
            max_airlines: 6,
            max_passengers: 5,
            max_itinerary_len: 4,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: u64,
    pub bounds: SizeBounds,
    pub tolerance: f64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 1000,
            bounds: SizeBounds::default(),
            tolerance: super::DEFAULT_TOLERANCE,
        }
    }
}

/// Optional domain restrictions on generated problems.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraints {
    /// Every itinerary has at least this many flights.
    pub min_itinerary_len: Option<usize>,
    /// Every itinerary leaves at least this many flights of `F` unused.
    pub min_unused_flights: Option<usize>,
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Problem for trial number `trial` of `config`.
pub fn generate_problem(
    config: &TrialConfig,
    trial: u64,
    constraints: &Constraints,
) -> Result<AirlinesProblem<f64>, GenerationError> {
    generate_with_rng(&mut trial_rng(config.seed, trial), &config.bounds, constraints)
}

fn check_bounds(bounds: &SizeBounds, constraints: &Constraints) -> Result<(), GenerationError> {
    let infeasible = |msg: String| Err(GenerationError::InfeasibleBounds(msg));
    if bounds.max_airports < 2 || bounds.max_airports > 26 {
        return infeasible(format!("max_airports must be in 2..=26, got {}", bounds.max_airports));
    }
    if bounds.max_edges < 2 {
        return infeasible(format!("max_edges must be at least 2, got {}", bounds.max_edges));
    }
    if bounds.max_airlines == 0 || bounds.max_passengers == 0 || bounds.max_itinerary_len == 0 {
        return infeasible("airline, passenger and itinerary bounds must be positive".into());
    }
    let min_len = constraints.min_itinerary_len.unwrap_or(1);
    if min_len > bounds.max_itinerary_len || min_len > bounds.max_edges {
        return infeasible(format!(
            "min itinerary length {min_len} exceeds max itinerary length {} or max edges {}",
            bounds.max_itinerary_len, bounds.max_edges
        ));
    }
    let unused = constraints.min_unused_flights.unwrap_or(0);
    let most_flights = bounds.max_edges * bounds.max_airlines.min(2) as usize;
    if min_len + unused > most_flights {
        return infeasible(format!("{min_len} used plus {unused} unused flights exceed {most_flights} flights"));
    }
    Ok(())
}

fn airport_name(k: usize) -> AirportCode {
    AirportCode::new(((b'a' + k as u8) as char).to_string())
}

/// Strongly connected random network with one or two airlines per edge.
fn random_network(rng: &mut ChaCha8Rng, bounds: &SizeBounds) -> (Vec<AirportCode>, Vec<FlightKey>) {
    let n = rng.random_range(2..=bounds.max_airports.min(bounds.max_edges));
    let airports: Vec<AirportCode> = (0..n).map(airport_name).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|k| (order[k], order[(k + 1) % n])).collect();
    let mut spare: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && !edges.contains(&(a, b)))
        .collect();
    spare.shuffle(rng);
    let target = rng.random_range(edges.len()..=bounds.max_edges.max(edges.len()));
    edges.extend(spare.into_iter().take(target - edges.len()));

    let mut flights = Vec::new();
    for (a, b) in edges {
        let operators = if bounds.max_airlines > 1 && rng.random_bool(SECOND_AIRLINE_PROBABILITY) {
            2
        } else {
            1
        };
        let mut ids: Vec<u32> = (1..=bounds.max_airlines).collect();
        ids.shuffle(rng);
        for &id in &ids[..operators] {
            flights.push(FlightKey::new(airports[a].clone(), airports[b].clone(), id));
        }
    }
    (airports, flights)
}

/// Random walk through `flights` extending `start`, never reusing an edge.
fn walk(rng: &mut ChaCha8Rng, flights: &[FlightKey], start: Vec<FlightKey>, len: usize) -> Vec<FlightKey> {
    let mut path = start;
    let mut used: BTreeSet<Edge> = path.iter().map(|f| f.edge.clone()).collect();
    while path.len() < len {
        let options: Vec<&FlightKey> = flights
            .iter()
            .filter(|f| !used.contains(&f.edge))
            .filter(|f| path.last().is_none_or(|last| last.edge.destination == f.edge.origin))
            .collect();
        let Some(next) = options.choose(rng) else {
            break;
        };
        used.insert(next.edge.clone());
        path.push((*next).clone());
    }
    path
}

fn attempt(
    rng: &mut ChaCha8Rng,
    bounds: &SizeBounds,
    constraints: &Constraints,
) -> Option<AirlinesProblem<f64>> {
    let (airports, flights) = random_network(rng, bounds);
    let min_len = constraints.min_itinerary_len.unwrap_or(1);
    let max_used = flights.len().checked_sub(constraints.min_unused_flights.unwrap_or(0))?;
    let max_len = bounds.max_itinerary_len.min(max_used);
    if max_len < min_len {
        return None;
    }

    let count = rng.random_range(1..=bounds.max_passengers);
    let mut itineraries: Vec<Vec<FlightKey>> = Vec::with_capacity(count);
    for _ in 0..count {
        let len = rng.random_range(min_len..=max_len);
        let start = match itineraries.choose(rng) {
            Some(earlier) if rng.random_bool(SHARED_PREFIX_PROBABILITY) => {
                let keep = rng.random_range(1..=earlier.len().min(len));
                earlier[..keep].to_vec()
            }
            _ => Vec::new(),
        };
        let path = walk(rng, &flights, start, len);
        if path.len() < min_len {
            return None;
        }
        itineraries.push(path);
    }

    let airlines: Vec<AirlineId> = flights
        .iter()
        .map(|f| f.airline)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let weights: WeightSystem<f64> = flights
        .iter()
        .map(|f| f.edge.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|e| (e, f64::from(rng.random_range(1..=MAX_WEIGHT))))
        .collect();
    let passengers = itineraries
        .into_iter()
        .enumerate()
        .map(|(k, flights)| Passenger {
            id: PassengerId(k as u64 + 1),
            itinerary: Itinerary {
                flights,
                price: f64::from(rng.random_range(1..=MAX_PRICE)),
            },
        })
        .collect();
    let problem = AirlinesProblem {
        airports,
        airlines,
        flights,
        passengers,
        weights: Some(weights),
    };
    validate(&problem).ok.then_some(problem)
}

/// Problem drawn from `rng`. Prices and weights are small positive integers
/// so the problem converts exactly into rational arithmetic.
pub fn generate_with_rng(
    rng: &mut ChaCha8Rng,
    bounds: &SizeBounds,
    constraints: &Constraints,
) -> Result<AirlinesProblem<f64>, GenerationError> {
    check_bounds(bounds, constraints)?;
    for _ in 0..MAX_ATTEMPTS {
        if let Some(problem) = attempt(rng, bounds, constraints) {
            return Ok(problem);
        }
    }
    Err(GenerationError::Exhausted { attempts: MAX_ATTEMPTS })
}

/// Random `σ` that keeps exactly `airline`'s flights with `airline`. Other
/// flights stay, move to another existing airline or move to a new one.
pub fn sample_reassignment<S>(rng: &mut impl Rng, problem: &AirlinesProblem<S>, airline: AirlineId) -> Reassignment {
    let others: Vec<AirlineId> = problem.airlines.iter().copied().filter(|&a| a != airline).collect();
    let mut next_fresh = problem.airlines.iter().map(|a| a.0).max().unwrap_or(0) + 1;
    let fresh_pool: Vec<AirlineId> = (0..2).map(|k| AirlineId(next_fresh + k)).collect();
    next_fresh += fresh_pool.len() as u32;

    let mut taken: BTreeSet<(Edge, AirlineId)> = BTreeSet::new();
    let mut sigma = Reassignment::default();
    for f in problem.flights.iter().filter(|f| f.airline == airline) {
        taken.insert((f.edge.clone(), airline));
        sigma.set(f.clone(), airline);
    }
    for f in problem.flights.iter().filter(|f| f.airline != airline) {
        let roll: f64 = rng.random();
        let wanted = if roll < 0.4 {
            f.airline
        } else if roll < 0.7 && !others.is_empty() {
            *others.choose(rng).expect("nonempty")
        } else {
            *fresh_pool.choose(rng).expect("nonempty")
        };
        let target = [wanted, f.airline]
            .into_iter()
            .find(|&a| !taken.contains(&(f.edge.clone(), a)))
            .unwrap_or_else(|| {
                next_fresh += 1;
                AirlineId(next_fresh - 1)
            });
        taken.insert((f.edge.clone(), target));
        sigma.set(f.clone(), target);
    }
    sigma
}
