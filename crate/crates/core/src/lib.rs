//! Hedonic coalition-formation games on friendship graphs.
//!
//! Players are dense indices `0..n`; coalitions are bitmasks ([`Coalition`]); a
//! [`Partition`] is a canonical coalition structure. Utilities for the friend-oriented,
//! enemy-oriented, fractional and three altruistic models are exact rationals, so
//! preference comparisons never depend on rounding.
//!
//! ```
//! use hedonic_core::{fixtures, preference, Coalition, PreferenceModel, PreferenceOrdering};
//!
//! let game = fixtures::story(PreferenceModel::TrulyAltruistic);
//! let clique = Coalition::from_members([0, 1, 2, 3]);
//! let everyone = game.grand_coalition();
//! assert_eq!(
//!     preference::compare(&game, 0, clique, everyone).unwrap(),
//!     PreferenceOrdering::StrictlyPrefers,
//! );
//! ```

pub mod coalition;
pub mod doc;
pub mod fixtures;
pub mod game;
pub mod preference;
pub mod rational;
pub mod search;
pub mod stability;
pub mod wire;

pub use coalition::{
    canonicalize, coalition_of, Coalition, Partition, PartitionError, MAX_PLAYERS,
};
pub use doc::{parse_game, parse_partition, serialize_game, serialize_partition, DocError};
pub use game::{
    Aggregation, FriendshipGraph, Game, GameError, ModelAssignment, PreferenceModel,
    ValuationMatrix,
};
pub use preference::{compare, utility, PreferenceError, PreferenceOrdering};
pub use rational::{Rational, Utility};
pub use search::{
    compute_core, enumerate_graphs, enumerate_partitions, find_core_partition, hunt_empty_core,
    CoreResult, HuntReport, SearchError, PARTITION_CAP, SWEEP_CAP,
};
pub use stability::{
    certify, find_blocking_coalition, is_core_stable, StabilityNotion, StabilityReport, Verdict,
    Witness,
};
