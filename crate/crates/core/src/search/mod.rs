//! Exhaustive search over coalition structures and friendship graphs.

mod core;
mod graphs;
mod hunt;
mod partitions;

pub use self::core::{compute_core, compute_core_until, find_core_partition, CoreResult};
pub use graphs::{edge_pairs, enumerate_graphs, graph_from_mask, GraphStream};
pub use hunt::{
    hunt_empty_core, Checkpoint, CheckpointError, Counterexample, HuntConfig, HuntReport,
    RangeRecord,
};
pub use partitions::{enumerate_partitions, PartitionStream};

use thiserror::Error;

/// Largest player count for partition enumeration (Bell(12) = 4,213,597).
pub const PARTITION_CAP: usize = 12;

/// Largest player count for full friendship-graph sweeps.
pub const SWEEP_CAP: usize = 7;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("{n} players exceeds the partition enumeration cap of {PARTITION_CAP} (Bell({n}) partitions)")]
    PartitionCap { n: usize },
    #[error("{n} players exceeds the graph sweep cap of {SWEEP_CAP}")]
    SweepCap { n: usize },
    #[error("time budget exhausted after scanning {scanned} partitions")]
    Timeout { scanned: u64 },
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
}
