//! The pessimistic cooperative game among airlines.
//!
//! A coalition secures the price of every passenger whose whole itinerary it
//! operates: `v(S) = sum of p^j over passengers j with N^j ⊆ S`. The game is
//! stored as a dense table indexed by coalition bitmask.

use std::collections::BTreeMap;

use crate::error::GameError;
use crate::model::{build_index, AirlineId, AirlinesProblem};
use crate::rules::Allocation;
use crate::scalar::Scalar;

/// Largest player count for which the coalition table is materialized.
pub const TABLE_LIMIT: usize = 20;
/// Largest player count for exact Shapley values and exhaustive convexity checks.
pub const EXACT_LIMIT: usize = 12;

/// Subset of players, bit `k` standing for the `k`-th player of the game.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(pub u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn grand(players: usize) -> Self {
        Coalition(((1u64 << players) - 1) as u32)
    }

    pub fn singleton(k: usize) -> Self {
        Coalition(1 << k)
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 & (1 << k) != 0
    }

    pub fn with(self, k: usize) -> Self {
        Coalition(self.0 | (1 << k))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }
}

fn check_size(players: usize, limit: usize) -> Result<(), GameError> {
    if players > limit {
        return Err(GameError::TooManyPlayers { players, limit });
    }
    Ok(())
}

/// Coalition values over an ordered player list.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicFunction<S> {
    players: Vec<AirlineId>,
    values: Vec<S>,
}

impl<S: Scalar> CharacteristicFunction<S> {
    /// Builds a game by evaluating `value` on every coalition.
    pub fn from_fn(players: Vec<AirlineId>, mut value: impl FnMut(Coalition) -> S) -> Result<Self, GameError> {
        check_size(players.len(), TABLE_LIMIT)?;
        let values = (0..1u32 << players.len()).map(|m| value(Coalition(m))).collect();
        Ok(Self { players, values })
    }

    /// Builds a game from explicit values listed by coalition bitmask.
    ///
    /// # Panics
    /// If `values.len()` is not `2^players.len()`.
    pub fn from_table(players: Vec<AirlineId>, values: Vec<S>) -> Result<Self, GameError> {
        check_size(players.len(), TABLE_LIMIT)?;
        assert_eq!(values.len(), 1 << players.len(), "one value per coalition");
        Ok(Self { players, values })
    }

    pub fn players(&self) -> &[AirlineId] {
        &self.players
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn value(&self, coalition: Coalition) -> &S {
        &self.values[coalition.0 as usize]
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::grand(self.players.len())
    }

    /// Coalition made of the given airlines; `None` if one is not a player.
    pub fn coalition_of(&self, airlines: &[AirlineId]) -> Option<Coalition> {
        airlines.iter().try_fold(Coalition::EMPTY, |c, a| {
            self.players.iter().position(|p| p == a).map(|k| c.with(k))
        })
    }

    pub fn members(&self, coalition: Coalition) -> Vec<AirlineId> {
        (0..self.players.len())
            .filter(|&k| coalition.contains(k))
            .map(|k| self.players[k])
            .collect()
    }

    fn coalitions(&self) -> impl Iterator<Item = Coalition> {
        (0..self.values.len() as u32).map(Coalition)
    }

    /// `S ⊆ T` implies `v(S) <= v(T)`; checked on single-player extensions.
    pub fn is_monotone(&self) -> bool {
        let n = self.players.len();
        self.coalitions().all(|s| {
            (0..n)
                .filter(|&k| !s.contains(k))
                .all(|k| self.value(s) <= self.value(s.with(k)))
        })
    }

    /// `v(S ∪ T) >= v(S) + v(T)` for disjoint `S`, `T`.
    pub fn is_superadditive(&self, tol: f64) -> bool {
        let grand = self.grand_coalition().0;
        self.coalitions().all(|s| {
            let rest = grand & !s.0;
            submasks(rest).all(|t| {
                let joint = self.value(Coalition(s.0 | t)).clone();
                let parts = self.value(s).clone() + self.value(Coalition(t)).clone();
                joint >= parts.clone() || joint.approx_eq(&parts, tol)
            })
        })
    }
}

/// All submasks of `mask`, including `mask` and 0.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 { None } else { Some((current - 1) & mask) };
        Some(current)
    })
}

/// Builds the pessimistic game of a problem. Players are the airlines of
/// `N` in problem order.
pub fn pessimistic_game<S: Scalar>(problem: &AirlinesProblem<S>) -> Result<CharacteristicFunction<S>, GameError> {
    let players = problem.airlines.clone();
    let n = players.len();
    check_size(n, TABLE_LIMIT)?;
    let position: BTreeMap<AirlineId, usize> = players.iter().enumerate().map(|(k, &a)| (a, k)).collect();
    let index = build_index(problem);

    // Price mass per exact airline set, then summed over subsets.
    let mut values = vec![S::zero(); 1 << n];
    'passengers: for (j, p) in problem.passengers.iter().enumerate() {
        let mut mask = Coalition::EMPTY;
        for airline in index.airlines_of(j) {
            match position.get(&airline) {
                Some(&k) => mask = mask.with(k),
                None => continue 'passengers,
            }
        }
        if mask.is_empty() {
            continue;
        }
        let slot = &mut values[mask.0 as usize];
        *slot = slot.clone() + p.itinerary.price.clone();
    }
    for k in 0..n {
        let bit = 1usize << k;
        for m in 0..values.len() {
            if m & bit != 0 {
                let lower = values[m ^ bit].clone();
                values[m] = values[m].clone() + lower;
            }
        }
    }
    Ok(CharacteristicFunction { players, values })
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Exact Shapley value by the subset formula
/// `phi_i = sum over S ∌ i of |S|!(n-|S|-1)!/n! * (v(S ∪ {i}) - v(S))`.
pub fn shapley<S: Scalar>(game: &CharacteristicFunction<S>) -> Result<Allocation<S>, GameError> {
    let n = game.player_count();
    check_size(n, EXACT_LIMIT)?;
    if n == 0 {
        return Ok(Allocation::zeros([]));
    }
    let n_fact = S::from_u64(factorial(n)).expect("factorial fits");
    let weights: Vec<S> = (0..n)
        .map(|s| {
            let num = factorial(s) * factorial(n - s - 1);
            S::from_u64(num).expect("factorial fits") / n_fact.clone()
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut phi = S::zero();
        for s in game.coalitions().filter(|s| !s.contains(i)) {
            let marginal = game.value(s.with(i)).clone() - game.value(s).clone();
            if !marginal.is_zero() {
                phi = phi + weights[s.len()].clone() * marginal;
            }
        }
        out.push((game.players[i], phi));
    }
    Ok(out.into_iter().collect())
}

/// A triple showing a marginal contribution that shrinks as the coalition grows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityWitness {
    pub player: AirlineId,
    pub smaller: Vec<AirlineId>,
    pub larger: Vec<AirlineId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityReport {
    pub convex: bool,
    pub witness: Option<ConvexityWitness>,
}

/// Exhaustive check of `v(S ∪ {i}) - v(S) <= v(T ∪ {i}) - v(T)` for all
/// `S ⊆ T ⊆ N \ {i}`, up to relative tolerance `tol`.
pub fn convexity_check<S: Scalar>(game: &CharacteristicFunction<S>, tol: f64) -> Result<ConvexityReport, GameError> {
    let n = game.player_count();
    check_size(n, EXACT_LIMIT)?;
    let grand = game.grand_coalition().0;
    for i in 0..n {
        let rest = grand & !(1 << i);
        let marginal = |m: u32| game.value(Coalition(m).with(i)).clone() - game.value(Coalition(m)).clone();
        for t in submasks(rest) {
            let large = marginal(t);
            for s in submasks(t) {
                let small = marginal(s);
                if small > large && !small.approx_eq(&large, tol) {
                    return Ok(ConvexityReport {
                        convex: false,
                        witness: Some(ConvexityWitness {
                            player: game.players[i],
                            smaller: game.members(Coalition(s)),
                            larger: game.members(Coalition(t)),
                        }),
                    });
                }
            }
        }
    }
    Ok(ConvexityReport {
        convex: true,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreReport {
    pub in_core: bool,
    pub efficient: bool,
    /// Smallest coalition receiving less than it secures on its own.
    pub violated_coalition: Option<Coalition>,
}

/// Whether `x` is efficient and no coalition can secure more than `x` gives it.
pub fn core_check<S: Scalar>(
    game: &CharacteristicFunction<S>,
    x: &Allocation<S>,
    tol: f64,
) -> Result<CoreReport, GameError> {
    let n = game.player_count();
    check_size(n, TABLE_LIMIT)?;
    let payoff: Vec<S> = game
        .players
        .iter()
        .map(|&a| x.get(a).cloned().ok_or(GameError::MissingPlayer(a)))
        .collect::<Result<_, _>>()?;

    let mut sums = vec![S::zero(); 1 << n];
    let mut violated: Option<Coalition> = None;
    for m in 1..sums.len() {
        let low = m.trailing_zeros() as usize;
        sums[m] = sums[m & (m - 1)].clone() + payoff[low].clone();
        let v = game.value(Coalition(m as u32));
        if sums[m] < *v && !sums[m].approx_eq(v, tol) {
            let c = Coalition(m as u32);
            if violated.is_none_or(|old| c.len() < old.len()) {
                violated = Some(c);
            }
        }
    }
    let grand = game.grand_coalition();
    let efficient = sums[grand.0 as usize].approx_eq(game.value(grand), tol);
    Ok(CoreReport {
        in_core: efficient && violated.is_none(),
        efficient,
        violated_coalition: violated,
    })
}
