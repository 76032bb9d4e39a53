use crate::coalition::{Coalition, Partition};

use super::{SearchError, PARTITION_CAP};

/// All set partitions of `{0, .., n-1}` in restricted-growth-string order.
///
/// `rgs[i]` is the block of player `i`; `rgs[0] = 0` and each entry is at most one more
/// than the maximum of the entries before it. Blocks are numbered by first appearance,
/// so every yielded partition is already canonical. Iteration starts at the grand
/// coalition and ends at all singletons.
#[derive(Debug, Clone)]
pub struct PartitionStream {
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

/// Streams all Bell(n) partitions; `n = 0` yields the single empty partition.
pub fn enumerate_partitions(n: usize) -> Result<PartitionStream, SearchError> {
    if n > PARTITION_CAP {
        return Err(SearchError::PartitionCap { n });
    }
    Ok(PartitionStream {
        rgs: vec![0; n],
        prefix_max: vec![0; n],
        done: false,
    })
}

impl PartitionStream {
    fn current(&self) -> Partition {
        let n = self.rgs.len();
        let k = self.prefix_max.last().map_or(0, |m| m + 1);
        let mut blocks = vec![Coalition::EMPTY; k];
        for (p, &b) in self.rgs.iter().enumerate() {
            blocks[b] = blocks[b].with(p);
        }
        Partition::from_canonical_blocks(n, blocks)
    }

    fn advance(&mut self) {
        let n = self.rgs.len();
        // rightmost position that can still grow
        let Some(i) = (1..n)
            .rev()
            .find(|&i| self.rgs[i] <= self.prefix_max[i - 1])
        else {
            self.done = true;
            return;
        };
        self.rgs[i] += 1;
        self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
        for j in i + 1..n {
            self.rgs[j] = 0;
            self.prefix_max[j] = self.prefix_max[i];
        }
    }
}

impl Iterator for PartitionStream {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}
