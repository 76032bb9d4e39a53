//! Exact utilities for the six preference models and the induced preference relation.
//!
//! Every utility is defined only for coalitions containing the evaluating player.
//! `n` is always the size of the whole game, never of the coalition.
//!
//! | tag | utility of `i` in `C` |
//! |-----|-----------------------|
//! | FO  | `n·|C∩F_i| − |C∩E_i|` |
//! | EO  | `|C∩F_i| − n·|C∩E_i|` |
//! | FR  | `Σ_{j∈C} v_i(j)`, optionally divided by `|C|` |
//! | SF  | `n⁵·FO_i(C) + avg{FO_j(C) : j ∈ C∩F_i}` |
//! | EQ  | `avg{FO_j(C) : j ∈ (C∩F_i) ∪ {i}}` |
//! | AL  | `FO_i(C) + n⁵·avg{FO_j(C) : j ∈ C∩F_i}` |
//!
//! The average of an empty multiset is taken to be zero.

use std::cmp::Ordering;

use thiserror::Error;

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::game::{Aggregation, Game, PreferenceModel};
use crate::rational::{Rational, Utility};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreferenceError {
    #[error("player {player} is not a member of coalition {coalition:?}")]
    NotAMember { player: usize, coalition: Coalition },
    #[error("player {player} needs valuations but the game has none")]
    MissingValuations { player: usize },
}

/// Outcome of comparing two coalitions from one player's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PreferenceOrdering {
    StrictlyPrefers,
    Indifferent,
    StrictlyDispreferred,
}

impl From<Ordering> for PreferenceOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Greater => PreferenceOrdering::StrictlyPrefers,
            Ordering::Equal => PreferenceOrdering::Indifferent,
            Ordering::Less => PreferenceOrdering::StrictlyDispreferred,
        }
    }
}

impl PreferenceOrdering {
    /// `C ≽ D`
    pub fn weakly_prefers(self) -> bool {
        self != PreferenceOrdering::StrictlyDispreferred
    }
}

/// Friend-oriented score from cardinalities: `n·friends − enemies`.
pub fn fo_score(n: usize, friends: usize, enemies: usize) -> i64 {
    n as i64 * friends as i64 - enemies as i64
}

/// Enemy-oriented score from cardinalities: `friends − n·enemies`.
pub fn eo_score(n: usize, friends: usize, enemies: usize) -> i64 {
    friends as i64 - n as i64 * enemies as i64
}

fn n_pow5(n: usize) -> Rational {
    Rational::integer((n as i128).pow(5))
}

/// FO utilities of every member of one coalition.
///
/// The altruistic models all read friends' FO scores in the same coalition; computing
/// the vector once lets a caller evaluate every member without recomputation.
#[derive(Clone)]
pub struct FoVector {
    coalition: Coalition,
    values: [i64; MAX_PLAYERS],
}

impl FoVector {
    pub fn new(game: &Game, coalition: Coalition) -> Self {
        let n = game.n();
        let mut values = [0i64; MAX_PLAYERS];
        for j in coalition.members() {
            values[j] = fo_score(
                n,
                coalition.intersection(game.friends(j)).len(),
                coalition.intersection(game.enemies(j)).len(),
            );
        }
        FoVector { coalition, values }
    }

    pub fn coalition(&self) -> Coalition {
        self.coalition
    }

    /// FO utility of member `j`.
    pub fn get(&self, j: usize) -> i64 {
        debug_assert!(self.coalition.contains(j));
        self.values[j]
    }

    fn friend_average(&self, game: &Game, i: usize) -> Rational {
        Rational::mean(
            self.coalition
                .intersection(game.friends(i))
                .members()
                .map(|j| Rational::from(self.values[j])),
        )
    }
}

/// Utility of member `i` of `fo.coalition()` under `model`. `i` must be a member and
/// fractional models need valuations; both are checked by the public entry points.
pub(crate) fn evaluate(game: &Game, i: usize, model: PreferenceModel, fo: &FoVector) -> Utility {
    let c = fo.coalition();
    let n = game.n();
    match model {
        PreferenceModel::FriendOriented => Rational::from(fo.get(i)),
        PreferenceModel::EnemyOriented => Rational::from(eo_score(
            n,
            c.intersection(game.friends(i)).len(),
            c.intersection(game.enemies(i)).len(),
        )),
        PreferenceModel::Fractional(aggregation) => {
            let v = game
                .valuations()
                .expect("fractional model validated to have valuations");
            let total: Rational = c.members().map(|j| v.get(i, j)).sum();
            match aggregation {
                Aggregation::Sum => total,
                Aggregation::Mean => total / Rational::integer(c.len() as i128),
            }
        }
        PreferenceModel::SelfishFirst => {
            n_pow5(n) * Rational::from(fo.get(i)) + fo.friend_average(game, i)
        }
        PreferenceModel::EqualTreatment => Rational::mean(
            c.intersection(game.friends(i))
                .with(i)
                .members()
                .map(|j| Rational::from(fo.get(j))),
        ),
        PreferenceModel::TrulyAltruistic => {
            Rational::from(fo.get(i)) + n_pow5(n) * fo.friend_average(game, i)
        }
    }
}

fn check(
    game: &Game,
    i: usize,
    c: Coalition,
    model: PreferenceModel,
) -> Result<(), PreferenceError> {
    if i >= game.n() || !c.contains(i) || !c.is_subset(game.grand_coalition()) {
        return Err(PreferenceError::NotAMember {
            player: i,
            coalition: c,
        });
    }
    if model.is_fractional() && game.valuations().is_none() {
        return Err(PreferenceError::MissingValuations { player: i });
    }
    Ok(())
}

fn utility_under(
    game: &Game,
    i: usize,
    c: Coalition,
    model: PreferenceModel,
) -> Result<Utility, PreferenceError> {
    check(game, i, c, model)?;
    Ok(evaluate(game, i, model, &FoVector::new(game, c)))
}

/// Friend-oriented utility `n·|C∩F_i| − |C∩E_i|`.
pub fn utility_fo(game: &Game, i: usize, c: Coalition) -> Result<Utility, PreferenceError> {
    utility_under(game, i, c, PreferenceModel::FriendOriented)
}

/// Enemy-oriented utility `|C∩F_i| − n·|C∩E_i|`.
pub fn utility_eo(game: &Game, i: usize, c: Coalition) -> Result<Utility, PreferenceError> {
    utility_under(game, i, c, PreferenceModel::EnemyOriented)
}

/// Fractional utility: the valuation sum over `C`, or its mean over `|C|`.
pub fn utility_fr(
    game: &Game,
    i: usize,
    c: Coalition,
    aggregation: Aggregation,
) -> Result<Utility, PreferenceError> {
    utility_under(game, i, c, PreferenceModel::Fractional(aggregation))
}

/// Selfish-first altruistic utility.
pub fn utility_sf(game: &Game, i: usize, c: Coalition) -> Result<Utility, PreferenceError> {
    utility_under(game, i, c, PreferenceModel::SelfishFirst)
}

/// Equal-treatment altruistic utility.
pub fn utility_eq(game: &Game, i: usize, c: Coalition) -> Result<Utility, PreferenceError> {
    utility_under(game, i, c, PreferenceModel::EqualTreatment)
}

/// Truly altruistic utility.
pub fn utility_al(game: &Game, i: usize, c: Coalition) -> Result<Utility, PreferenceError> {
    utility_under(game, i, c, PreferenceModel::TrulyAltruistic)
}

/// Utility of `i` in `C` under the player's own model.
pub fn utility(game: &Game, i: usize, c: Coalition) -> Result<Utility, PreferenceError> {
    let model = game
        .models()
        .get(i)
        .copied()
        .ok_or(PreferenceError::NotAMember {
            player: i,
            coalition: c,
        })?;
    utility_under(game, i, c, model)
}

/// How player `i` ranks `C` against `D`.
pub fn compare(
    game: &Game,
    i: usize,
    c: Coalition,
    d: Coalition,
) -> Result<PreferenceOrdering, PreferenceError> {
    let uc = utility(game, i, c)?;
    let ud = utility(game, i, d)?;
    Ok(uc.cmp(&ud).into())
}

/// Largest game for which a full [`UtilityTable`] may be built.
pub const TABLE_CAP: usize = 16;

/// Every player's utility in every coalition containing them, indexed by bitmask.
///
/// A pure cache over [`utility`]: building it never changes any answer.
pub struct UtilityTable {
    n: usize,
    values: Vec<Utility>,
}

impl UtilityTable {
    pub fn build(game: &Game) -> Self {
        let n = game.n();
        assert!(
            n <= TABLE_CAP,
            "utility table limited to {TABLE_CAP} players"
        );
        let mut values = vec![Rational::ZERO; (1usize << n) * n];
        for bits in 1..(1u64 << n) {
            let c = Coalition::from_bits(bits);
            let fo = FoVector::new(game, c);
            let base = bits as usize * n;
            for i in c.members() {
                values[base + i] = evaluate(game, i, game.model(i), &fo);
            }
        }
        UtilityTable { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Utility of member `i` in `c`; meaningless when `i ∉ c`.
    pub fn get(&self, c: Coalition, i: usize) -> Utility {
        self.values[c.bits() as usize * self.n + i]
    }
}
