//! Blocking-coalition search and stability certification.
//!
//! Core stability follows the blocking definition: a nonempty `C` blocks `Γ` when every
//! member strictly prefers `C` to their current block. Individual rationality, Nash
//! stability and individual stability are the usual single-player deviation notions and
//! are reported as auxiliary.
//!
//! All witnesses are deterministic: the least bitmask for coalitions, the least player
//! index and then the least target bitmask for deviations.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::coalition::{Coalition, Partition};
use crate::game::Game;
use crate::preference::{compare, evaluate, FoVector, PreferenceOrdering};
use crate::rational::Utility;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StabilityNotion {
    Core,
    IndividualRationality,
    Nash,
    Individual,
}

impl StabilityNotion {
    pub const ALL: [StabilityNotion; 4] = [
        StabilityNotion::Core,
        StabilityNotion::IndividualRationality,
        StabilityNotion::Nash,
        StabilityNotion::Individual,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StabilityNotion::Core => "core",
            StabilityNotion::IndividualRationality => "individual-rationality",
            StabilityNotion::Nash => "nash",
            StabilityNotion::Individual => "individual-stability",
        }
    }

    /// Everything except the core is a standard auxiliary notion.
    pub fn is_auxiliary(self) -> bool {
        self != StabilityNotion::Core
    }
}

impl fmt::Display for StabilityNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StabilityNotion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "core" => Ok(StabilityNotion::Core),
            "ir" | "individual-rationality" => Ok(StabilityNotion::IndividualRationality),
            "nash" | "ns" => Ok(StabilityNotion::Nash),
            "is" | "individual" | "individual-stability" => Ok(StabilityNotion::Individual),
            other => Err(format!(
                "unknown stability notion `{other}` (expected core, ir, nash, is)"
            )),
        }
    }
}

/// Evidence that a partition is unstable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Witness {
    /// A blocking coalition.
    Coalition(Coalition),
    /// A player who strictly prefers being alone.
    Player(usize),
    /// A player who profits by joining `target` (the empty target means going alone).
    Deviation { player: usize, target: Coalition },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Stable,
    Unstable(Witness),
}

impl Verdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, Verdict::Stable)
    }

    pub fn witness(&self) -> Option<Witness> {
        match self {
            Verdict::Stable => None,
            Verdict::Unstable(w) => Some(*w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotionVerdict {
    pub notion: StabilityNotion,
    pub verdict: Verdict,
}

/// One verdict per requested notion, in request order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub verdicts: Vec<NotionVerdict>,
}

impl StabilityReport {
    pub fn all_stable(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict.is_stable())
    }

    pub fn get(&self, notion: StabilityNotion) -> Option<Verdict> {
        self.verdicts
            .iter()
            .find(|v| v.notion == notion)
            .map(|v| v.verdict)
    }
}

fn assert_valid(game: &Game, partition: &Partition) {
    assert_eq!(
        game.n(),
        partition.n(),
        "partition is over {} players but the game has {}",
        partition.n(),
        game.n()
    );
}

/// Each player's utility in their current block.
fn current_utilities(game: &Game, partition: &Partition) -> Vec<Utility> {
    let mut current = vec![Utility::ZERO; game.n()];
    for &block in partition.blocks() {
        let fo = FoVector::new(game, block);
        for i in block.members() {
            current[i] = evaluate(game, i, game.model(i), &fo);
        }
    }
    current
}

fn blocks(game: &Game, c: Coalition, current: &[Utility]) -> bool {
    let fo = FoVector::new(game, c);
    c.members()
        .all(|i| evaluate(game, i, game.model(i), &fo) > current[i])
}

fn first_blocker_in(game: &Game, current: &[Utility], lo: u64, hi: u64) -> Option<Coalition> {
    (lo..=hi)
        .map(Coalition::from_bits)
        .find(|&c| blocks(game, c, current))
}

/// The blocking coalition with the least bitmask, if any.
///
/// Sweeps all `2^n − 1` nonempty coalitions, so it is only practical for small games.
pub fn find_blocking_coalition(game: &Game, partition: &Partition) -> Option<Coalition> {
    assert_valid(game, partition);
    let current = current_utilities(game, partition);
    first_blocker_in(game, &current, 1, game.grand_coalition().bits())
}

/// [`find_blocking_coalition`] with the subset sweep split across `workers` threads.
/// Returns the same witness as the sequential search.
pub fn find_blocking_coalition_parallel(
    game: &Game,
    partition: &Partition,
    workers: usize,
) -> Option<Coalition> {
    assert_valid(game, partition);
    let current = current_utilities(game, partition);
    let last = game.grand_coalition().bits();
    let chunks = (workers.max(1) as u64 * 4).min(last);
    let step = last.div_ceil(chunks);
    let ranges: Vec<(u64, u64)> = (0..chunks)
        .map(|k| (1 + k * step, ((k + 1) * step).min(last)))
        .filter(|(lo, hi)| lo <= hi)
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        ranges
            .par_iter()
            .map(|&(lo, hi)| first_blocker_in(game, &current, lo, hi))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .min()
}

pub fn is_core_stable(game: &Game, partition: &Partition) -> bool {
    find_blocking_coalition(game, partition).is_none()
}

/// Stable iff every player weakly prefers their block to being alone.
pub fn is_individually_rational(game: &Game, partition: &Partition) -> Verdict {
    assert_valid(game, partition);
    let current = current_utilities(game, partition);
    (0..game.n())
        .find(|&i| {
            let alone = FoVector::new(game, Coalition::singleton(i));
            evaluate(game, i, game.model(i), &alone) > current[i]
        })
        .map_or(Verdict::Stable, |i| Verdict::Unstable(Witness::Player(i)))
}

/// Candidate targets for `i`: the empty set and every other block, by ascending bitmask.
fn targets(partition: &Partition, i: usize) -> Vec<Coalition> {
    let own = partition.coalition_of(i);
    let mut out: Vec<Coalition> = std::iter::once(Coalition::EMPTY)
        .chain(partition.blocks().iter().copied().filter(|&b| b != own))
        .collect();
    out.sort();
    out
}

fn first_deviation(game: &Game, partition: &Partition, welcome_required: bool) -> Option<Witness> {
    let current = current_utilities(game, partition);
    for i in 0..game.n() {
        for target in targets(partition, i) {
            let joined = target.with(i);
            let fo = FoVector::new(game, joined);
            if evaluate(game, i, game.model(i), &fo) <= current[i] {
                continue;
            }
            if welcome_required
                && !target
                    .members()
                    .all(|j| evaluate(game, j, game.model(j), &fo) >= current[j])
            {
                continue;
            }
            return Some(Witness::Deviation { player: i, target });
        }
    }
    None
}

/// Stable iff no player strictly gains by moving to another block or going alone.
pub fn is_nash_stable(game: &Game, partition: &Partition) -> Verdict {
    assert_valid(game, partition);
    first_deviation(game, partition, false).map_or(Verdict::Stable, Verdict::Unstable)
}

/// Like Nash stability, but a move only counts if every member of the receiving block
/// weakly prefers having the mover.
pub fn is_individually_stable(game: &Game, partition: &Partition) -> Verdict {
    assert_valid(game, partition);
    first_deviation(game, partition, true).map_or(Verdict::Stable, Verdict::Unstable)
}

pub fn verdict(game: &Game, partition: &Partition, notion: StabilityNotion) -> Verdict {
    match notion {
        StabilityNotion::Core => find_blocking_coalition(game, partition)
            .map_or(Verdict::Stable, |c| {
                Verdict::Unstable(Witness::Coalition(c))
            }),
        StabilityNotion::IndividualRationality => is_individually_rational(game, partition),
        StabilityNotion::Nash => is_nash_stable(game, partition),
        StabilityNotion::Individual => is_individually_stable(game, partition),
    }
}

/// Re-checks a witness through [`compare`] alone.
pub fn verify_witness(
    game: &Game,
    partition: &Partition,
    notion: StabilityNotion,
    witness: Witness,
) -> bool {
    let prefers = |i: usize, c: Coalition, d: Coalition| {
        compare(game, i, c, d).map(|o| o == PreferenceOrdering::StrictlyPrefers)
    };
    let check = || -> Result<bool, crate::preference::PreferenceError> {
        match (notion, witness) {
            (StabilityNotion::Core, Witness::Coalition(c)) => {
                if c.is_empty() || !c.is_subset(game.grand_coalition()) {
                    return Ok(false);
                }
                for i in c.members() {
                    if !prefers(i, c, partition.coalition_of(i))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (StabilityNotion::IndividualRationality, Witness::Player(i)) => {
                Ok(i < game.n() && prefers(i, Coalition::singleton(i), partition.coalition_of(i))?)
            }
            (
                StabilityNotion::Nash | StabilityNotion::Individual,
                Witness::Deviation { player, target },
            ) => {
                if player >= game.n() {
                    return Ok(false);
                }
                let own = partition.coalition_of(player);
                let admissible =
                    target.is_empty() || (target != own && partition.blocks().contains(&target));
                if !admissible || !prefers(player, target.with(player), own)? {
                    return Ok(false);
                }
                if notion == StabilityNotion::Individual {
                    for j in target.members() {
                        if !compare(game, j, target.with(player), target)?.weakly_prefers() {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    };
    check().unwrap_or(false)
}

/// Verdicts for each requested notion. Every witness is re-verified before it is returned.
pub fn certify(game: &Game, partition: &Partition, notions: &[StabilityNotion]) -> StabilityReport {
    let verdicts = notions
        .iter()
        .map(|&notion| {
            let verdict = verdict(game, partition, notion);
            if let Verdict::Unstable(w) = verdict {
                assert!(
                    verify_witness(game, partition, notion, w),
                    "{notion} witness {w:?} failed re-verification"
                );
            }
            NotionVerdict { notion, verdict }
        })
        .collect();
    StabilityReport { verdicts }
}
