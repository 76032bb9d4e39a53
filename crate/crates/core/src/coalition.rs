//! Coalitions as player bitmasks, and partitions (coalition structures) of the player set.

use std::fmt;

use thiserror::Error;

/// Largest player count representable by a [`Coalition`] bitmask.
pub const MAX_PLAYERS: usize = 64;

/// A set of players encoded as a bitmask; bit `i` is player `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn from_bits(bits: u64) -> Self {
        Coalition(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(player: usize) -> Self {
        debug_assert!(player < MAX_PLAYERS);
        Coalition(1 << player)
    }

    /// The grand coalition `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_PLAYERS);
        if n == MAX_PLAYERS {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << n) - 1)
        }
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        members
            .into_iter()
            .fold(Coalition::EMPTY, |acc, p| acc.with(p))
    }

    pub fn contains(self, player: usize) -> bool {
        player < MAX_PLAYERS && self.0 >> player & 1 == 1
    }

    #[must_use]
    pub fn with(self, player: usize) -> Self {
        Coalition(self.0 | 1 << player)
    }

    #[must_use]
    pub fn without(self, player: usize) -> Self {
        Coalition(self.0 & !(1 << player))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: Coalition) -> Coalition {
        Coalition(self.0 & other.0)
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    pub fn is_subset(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn least_member(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending index order.
    pub fn members(self) -> Members {
        Members(self.0)
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

impl FromIterator<usize> for Coalition {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Coalition::from_members(iter)
    }
}

#[derive(Clone)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("player {0} appears in more than one block")]
    Overlap(usize),
    #[error("player {0} is not covered by any block")]
    MissingPlayer(usize),
    #[error("partition contains an empty block")]
    EmptyBlock,
    #[error("player index {player} out of range for {n} players")]
    UnknownPlayer { player: usize, n: usize },
}

/// A coalition structure: disjoint nonempty blocks covering `{0, .., n-1}`.
///
/// Always held in canonical form: blocks ordered by least member. Members are
/// ascending by construction of [`Coalition`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Coalition>,
    owner: Vec<u8>,
}

impl Partition {
    /// Validates and canonicalizes a list of bitmask blocks over `n` players.
    pub fn new(n: usize, blocks: Vec<Coalition>) -> Result<Self, PartitionError> {
        assert!(n <= MAX_PLAYERS);
        let mut seen = Coalition::EMPTY;
        for &block in &blocks {
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            if let Some(p) = block.members().find(|&p| p >= n) {
                return Err(PartitionError::UnknownPlayer { player: p, n });
            }
            if let Some(p) = block.intersection(seen).least_member() {
                return Err(PartitionError::Overlap(p));
            }
            seen = seen.union(block);
        }
        if let Some(p) = (0..n).find(|&p| !seen.contains(p)) {
            return Err(PartitionError::MissingPlayer(p));
        }
        Ok(Self::from_canonical_blocks(n, sorted(blocks)))
    }

    /// Builds from blocks already known to be a valid, canonically ordered cover.
    pub(crate) fn from_canonical_blocks(n: usize, blocks: Vec<Coalition>) -> Self {
        let mut owner = vec![0u8; n];
        for (k, block) in blocks.iter().enumerate() {
            for p in block.members() {
                owner[p] = k as u8;
            }
        }
        Partition { n, blocks, owner }
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_canonical_blocks(n, (0..n).map(Coalition::singleton).collect())
    }

    /// The partition `{N}`; for `n = 0` this is the empty partition.
    pub fn grand(n: usize) -> Self {
        let blocks = if n == 0 {
            vec![]
        } else {
            vec![Coalition::full(n)]
        };
        Self::from_canonical_blocks(n, blocks)
    }

    /// Builds from a restricted-growth string: `rgs[i]` is the block index of player `i`.
    pub fn from_rgs(rgs: &[usize]) -> Result<Self, PartitionError> {
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Coalition::EMPTY; k];
        for (p, &b) in rgs.iter().enumerate() {
            blocks[b] = blocks[b].with(p);
        }
        Self::new(rgs.len(), blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The block containing `player`, written Γ(i).
    pub fn coalition_of(&self, player: usize) -> Coalition {
        self.blocks[self.owner[player] as usize]
    }

    pub fn block_index_of(&self, player: usize) -> usize {
        self.owner[player] as usize
    }

    /// Block lists with ascending members, in canonical order.
    pub fn to_index_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.members().collect()).collect()
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.blocks.iter()).finish()
    }
}

fn sorted(mut blocks: Vec<Coalition>) -> Vec<Coalition> {
    blocks.sort_by_key(|b| b.least_member());
    blocks
}

/// Validates index-list blocks over `n` players and returns the canonical partition.
pub fn canonicalize(n: usize, blocks: &[Vec<usize>]) -> Result<Partition, PartitionError> {
    let mut masks = Vec::with_capacity(blocks.len());
    for block in blocks {
        if block.is_empty() {
            return Err(PartitionError::EmptyBlock);
        }
        let mut mask = Coalition::EMPTY;
        for &p in block {
            if p >= n {
                return Err(PartitionError::UnknownPlayer { player: p, n });
            }
            if mask.contains(p) {
                return Err(PartitionError::Overlap(p));
            }
            mask = mask.with(p);
        }
        masks.push(mask);
    }
    Partition::new(n, masks)
}

/// Γ(i) for a valid partition.
pub fn coalition_of(partition: &Partition, player: usize) -> Coalition {
    partition.coalition_of(player)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;

    #[test]
    fn coalition_of_lookups() {
        let gamma = canonicalize(3, &[vec![A, B], vec![C]]).unwrap();
        assert_eq!(gamma.coalition_of(C), Coalition::singleton(C));
        assert_eq!(coalition_of(&gamma, A), Coalition::from_members([A, B]));
        let grand = Partition::grand(3);
        for i in 0..3 {
            assert_eq!(grand.coalition_of(i), Coalition::full(3));
        }
    }

    #[test]
    fn canonicalize_orders_blocks_and_members() {
        let gamma = canonicalize(3, &[vec![C], vec![A, B]]).unwrap();
        assert_eq!(gamma.to_index_lists(), vec![vec![A, B], vec![C]]);
        let gamma = canonicalize(2, &[vec![B, A]]).unwrap();
        assert_eq!(gamma.to_index_lists(), vec![vec![A, B]]);
    }

    #[test]
    fn canonicalize_errors() {
        assert_eq!(
            canonicalize(2, &[vec![A], vec![A, B]]),
            Err(PartitionError::Overlap(A))
        );
        assert_eq!(
            canonicalize(3, &[vec![A, B]]),
            Err(PartitionError::MissingPlayer(C))
        );
        assert_eq!(
            canonicalize(2, &[vec![A, B], vec![]]),
            Err(PartitionError::EmptyBlock)
        );
        assert_eq!(
            canonicalize(2, &[vec![A, 5]]),
            Err(PartitionError::UnknownPlayer { player: 5, n: 2 })
        );
        assert_eq!(
            canonicalize(2, &[vec![A, A, B]]),
            Err(PartitionError::Overlap(A))
        );
    }

    #[test]
    fn members_iterate_ascending() {
        let c = Coalition::from_members([5, 1, 3]);
        assert_eq!(c.members().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(c.len(), 3);
        assert_eq!(c.least_member(), Some(1));
        assert_eq!(Coalition::full(64).len(), 64);
        assert_eq!(format!("{:?}", c), "{1, 3, 5}");
    }

    fn rgs_strategy() -> impl Strategy<Value = Vec<usize>> {
        (1usize..10).prop_flat_map(|n| prop::collection::vec(0usize..n, n))
    }

    proptest! {
        #[test]
        fn canonicalize_is_order_insensitive_and_idempotent(
            labels in rgs_strategy(),
            seed in any::<u64>(),
        ) {
            let n = labels.len();
            let k = labels.iter().max().unwrap() + 1;
            let mut blocks: Vec<Vec<usize>> = (0..k)
                .map(|b| (0..n).filter(|&p| labels[p] == b).collect())
                .filter(|b: &Vec<usize>| !b.is_empty())
                .collect();
            let canonical = canonicalize(n, &blocks).unwrap();

            // deterministic shuffle of blocks and of members inside blocks
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) as usize };
            for i in (1..blocks.len()).rev() {
                let j = next() % (i + 1);
                blocks.swap(i, j);
            }
            for block in &mut blocks {
                block.reverse();
            }
            let shuffled = canonicalize(n, &blocks).unwrap();
            prop_assert_eq!(&canonical, &shuffled);
            let again = canonicalize(n, &canonical.to_index_lists()).unwrap();
            prop_assert_eq!(&canonical, &again);
            for p in 0..n {
                prop_assert!(canonical.coalition_of(p).contains(p));
            }
        }
    }
}
