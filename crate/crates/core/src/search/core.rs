use std::time::Instant;

use crate::coalition::{Coalition, Partition};
use crate::game::Game;
use crate::preference::UtilityTable;
use crate::rational::Utility;

use super::partitions::enumerate_partitions;
use super::{SearchError, PARTITION_CAP};

/// The core of a game, computed by exhaustion over all partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreResult {
    /// Core-stable partitions in canonical stream order.
    pub partitions: Vec<Partition>,
    /// True when every partition was scanned, so `partitions` is exactly the core.
    pub exhaustive: bool,
    pub scanned: u64,
    /// Number of scanned partitions that admit a blocking coalition.
    pub blocked: u64,
}

impl CoreResult {
    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }
}

/// Table-driven blocking check; shares nothing with the analyzer beyond the utilities.
struct BlockingOracle {
    table: UtilityTable,
    full: u64,
    current: Vec<Utility>,
}

impl BlockingOracle {
    fn new(game: &Game) -> Self {
        BlockingOracle {
            table: UtilityTable::build(game),
            full: game.grand_coalition().bits(),
            current: vec![Utility::ZERO; game.n()],
        }
    }

    fn first_blocker(&mut self, partition: &Partition) -> Option<Coalition> {
        for &block in partition.blocks() {
            for i in block.members() {
                self.current[i] = self.table.get(block, i);
            }
        }
        (1..=self.full)
            .map(Coalition::from_bits)
            .find(|&c| c.members().all(|i| self.table.get(c, i) > self.current[i]))
    }
}

fn check_cap(game: &Game) -> Result<(), SearchError> {
    if game.n() > PARTITION_CAP {
        Err(SearchError::PartitionCap { n: game.n() })
    } else {
        Ok(())
    }
}

/// Every core-stable partition of `game`.
pub fn compute_core(game: &Game) -> Result<CoreResult, SearchError> {
    compute_core_until(game, None)
}

/// [`compute_core`] that gives up with [`SearchError::Timeout`] once `deadline` passes.
pub fn compute_core_until(
    game: &Game,
    deadline: Option<Instant>,
) -> Result<CoreResult, SearchError> {
    check_cap(game)?;
    let mut oracle = BlockingOracle::new(game);
    let mut result = CoreResult {
        partitions: Vec::new(),
        exhaustive: true,
        scanned: 0,
        blocked: 0,
    };
    for partition in enumerate_partitions(game.n())? {
        if let Some(deadline) = deadline {
            if result.scanned.is_multiple_of(256) && Instant::now() >= deadline {
                return Err(SearchError::Timeout {
                    scanned: result.scanned,
                });
            }
        }
        result.scanned += 1;
        match oracle.first_blocker(&partition) {
            Some(_) => result.blocked += 1,
            None => result.partitions.push(partition),
        }
    }
    Ok(result)
}

/// The first core-stable partition in stream order, or `None` when the core is empty.
pub fn find_core_partition(game: &Game) -> Result<Option<Partition>, SearchError> {
    check_cap(game)?;
    let mut oracle = BlockingOracle::new(game);
    Ok(enumerate_partitions(game.n())?.find(|p| oracle.first_blocker(p).is_none()))
}
