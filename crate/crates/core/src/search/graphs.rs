use crate::game::FriendshipGraph;

/// Unordered pairs `(i, j)`, `i < j`, in lexicographic order; bit `k` of an edge mask
/// refers to `edge_pairs(n)[k]`.
pub fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

pub fn graph_from_mask(n: usize, mask: u64) -> FriendshipGraph {
    let mut g = FriendshipGraph::empty(n);
    for (k, &(i, j)) in edge_pairs(n).iter().enumerate() {
        if mask >> k & 1 == 1 {
            g.add_edge(i, j);
        }
    }
    g
}

/// Labeled graphs on `n` vertices in edge-mask order, each paired with its mask.
pub struct GraphStream {
    n: usize,
    pairs: Vec<(usize, usize)>,
    next: u64,
    end: u64,
    connected_only: bool,
}

/// Streams all `2^(n(n−1)/2)` labeled graphs, optionally only the connected ones.
///
/// # Panics
/// If `n > 11`, where edge masks no longer fit in 64 bits.
pub fn enumerate_graphs(n: usize, connected_only: bool) -> GraphStream {
    GraphStream::range(n, connected_only, 0, None)
}

impl GraphStream {
    /// Masks in `[lo, hi)`; `hi = None` means up to the last mask.
    pub fn range(n: usize, connected_only: bool, lo: u64, hi: Option<u64>) -> Self {
        let pairs = edge_pairs(n);
        assert!(
            pairs.len() < 64,
            "edge masks for {n} vertices exceed 64 bits"
        );
        let total = 1u64 << pairs.len();
        GraphStream {
            n,
            pairs,
            next: lo,
            end: hi.unwrap_or(total).min(total),
            connected_only,
        }
    }

    fn build(&self, mask: u64) -> FriendshipGraph {
        let mut g = FriendshipGraph::empty(self.n);
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                g.add_edge(i, j);
            }
        }
        g
    }
}

impl Iterator for GraphStream {
    type Item = (u64, FriendshipGraph);

    fn next(&mut self) -> Option<Self::Item> {
        while self.next < self.end {
            let mask = self.next;
            self.next += 1;
            let g = self.build(mask);
            if !self.connected_only || g.is_connected() {
                return Some((mask, g));
            }
        }
        None
    }
}
