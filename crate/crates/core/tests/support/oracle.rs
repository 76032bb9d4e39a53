//! Brute-force reference implementation for cross-checking the engine.
//!
//! Works on plain vectors of player indices and its own fraction type; the only thing
//! it reads from the engine is the game data (edges, valuations, model tags).

#![allow(dead_code)]

use std::cmp::Ordering;

use hedonic_core::{Aggregation, Game, Partition, PreferenceModel};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Clone, Copy, Debug)]
pub struct Frac {
    pub num: i128,
    pub den: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Frac {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0);
        let s = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Frac {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn int(v: i128) -> Self {
        Frac::new(v, 1)
    }

    pub fn add(self, o: Frac) -> Frac {
        Frac::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    pub fn scale(self, k: i128) -> Frac {
        Frac::new(self.num * k, self.den)
    }

    pub fn div_int(self, k: i128) -> Frac {
        Frac::new(self.num, self.den * k)
    }

    pub fn cmp(self, o: Frac) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }
}

impl std::fmt::Display for Frac {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A game re-expressed as adjacency matrix, valuations table and model tags.
pub struct RefGame {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
    pub vals: Option<Vec<Vec<Frac>>>,
    pub tags: Vec<&'static str>,
    pub sum: Vec<bool>,
}

impl RefGame {
    pub fn from_game(game: &Game) -> Self {
        let n = game.n();
        let adj = (0..n)
            .map(|i| (0..n).map(|j| game.graph().has_edge(i, j)).collect())
            .collect();
        let vals = game.valuations().map(|v| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| Frac::new(v.get(i, j).numer(), v.get(i, j).denom()))
                        .collect()
                })
                .collect()
        });
        RefGame {
            n,
            adj,
            vals,
            tags: game.models().iter().map(|m| m.tag()).collect(),
            sum: game
                .models()
                .iter()
                .map(|m| *m == PreferenceModel::Fractional(Aggregation::Sum))
                .collect(),
        }
    }

    pub fn friends_in(&self, i: usize, set: &[usize]) -> usize {
        set.iter().filter(|&&j| self.adj[i][j]).count()
    }

    pub fn enemies_in(&self, i: usize, set: &[usize]) -> usize {
        set.iter().filter(|&&j| j != i && !self.adj[i][j]).count()
    }

    pub fn fo(&self, i: usize, set: &[usize]) -> i128 {
        (self.n * self.friends_in(i, set)) as i128 - self.enemies_in(i, set) as i128
    }

    pub fn eo(&self, i: usize, set: &[usize]) -> i128 {
        self.friends_in(i, set) as i128 - (self.n * self.enemies_in(i, set)) as i128
    }

    fn avg(values: &[i128]) -> Frac {
        if values.is_empty() {
            return Frac::int(0);
        }
        Frac::new(values.iter().sum(), values.len() as i128)
    }

    fn friend_fos(&self, i: usize, set: &[usize]) -> Vec<i128> {
        set.iter()
            .filter(|&&j| self.adj[i][j])
            .map(|&j| self.fo(j, set))
            .collect()
    }

    pub fn utility(&self, i: usize, set: &[usize]) -> Frac {
        assert!(set.contains(&i));
        let n5 = (self.n as i128).pow(5);
        match self.tags[i] {
            "FO" => Frac::int(self.fo(i, set)),
            "EO" => Frac::int(self.eo(i, set)),
            "FR" => {
                let v = self.vals.as_ref().unwrap();
                let total = set.iter().fold(Frac::int(0), |acc, &j| acc.add(v[i][j]));
                if self.sum[i] {
                    total
                } else {
                    total.div_int(set.len() as i128)
                }
            }
            "SF" => Frac::int(n5 * self.fo(i, set)).add(Self::avg(&self.friend_fos(i, set))),
            "EQ" => {
                let mut vals = self.friend_fos(i, set);
                vals.push(self.fo(i, set));
                Self::avg(&vals)
            }
            "AL" => Frac::int(self.fo(i, set)).add(Self::avg(&self.friend_fos(i, set)).scale(n5)),
            other => panic!("unknown tag {other}"),
        }
    }

    fn all_subsets(&self) -> Vec<Vec<usize>> {
        // recursive include/exclude, deliberately not bitmask-driven
        fn go(k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == n {
                if !cur.is_empty() {
                    out.push(cur.clone());
                }
                return;
            }
            go(k + 1, n, cur, out);
            cur.push(k);
            go(k + 1, n, cur, out);
            cur.pop();
        }
        let mut out = Vec::new();
        go(0, self.n, &mut Vec::new(), &mut out);
        out
    }

    /// Every blocking coalition of `blocks` (lists of player indices).
    pub fn blockers(&self, blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let own = |i: usize| blocks.iter().find(|b| b.contains(&i)).unwrap();
        self.all_subsets()
            .into_iter()
            .filter(|c| {
                c.iter()
                    .all(|&i| self.utility(i, c).cmp(self.utility(i, own(i))) == Ordering::Greater)
            })
            .collect()
    }

    pub fn has_blocker(&self, blocks: &[Vec<usize>]) -> bool {
        !self.blockers(blocks).is_empty()
    }
}

/// Bell numbers from the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// Counts labeled graphs on `n` vertices, total and connected, by brute force.
pub fn labeled_graph_counts(n: usize) -> (u64, u64) {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut total = 0;
    let mut connected = 0;
    for mask in 0u64..(1 << pairs.len()) {
        total += 1;
        let mut adj = vec![vec![false; n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        if n > 0 {
            seen[0] = true;
        }
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if adj[v][w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            connected += 1;
        }
    }
    (total, connected)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_edges(rng: &mut StdRng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Random game with `n` players all using `model`; fractional games get random
/// rational valuations in [-2, 2] with small denominators.
pub fn random_game(rng: &mut StdRng, n: usize, model: PreferenceModel) -> Game {
    let p = rng.random_range(0.2..0.8);
    let edges = random_edges(rng, n, p);
    let valuations = model.is_fractional().then(|| {
        (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        hedonic_core::Rational::new(
                            rng.random_range(-4..=4),
                            rng.random_range(1..=3),
                        )
                    })
                    .collect()
            })
            .collect()
    });
    Game::build(
        hedonic_core::game::default_labels(n),
        &edges,
        valuations,
        hedonic_core::ModelAssignment::Uniform(model),
    )
    .unwrap()
}

pub fn random_partition(rng: &mut StdRng, n: usize) -> Partition {
    let k = rng.random_range(1..=n);
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    let blocks: Vec<Vec<usize>> = (0..k)
        .map(|b| (0..n).filter(|&p| labels[p] == b).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect();
    hedonic_core::canonicalize(n, &blocks).unwrap()
}

pub const MODELS: [PreferenceModel; 7] = [
    PreferenceModel::FriendOriented,
    PreferenceModel::EnemyOriented,
    PreferenceModel::Fractional(Aggregation::Mean),
    PreferenceModel::Fractional(Aggregation::Sum),
    PreferenceModel::SelfishFirst,
    PreferenceModel::EqualTreatment,
    PreferenceModel::TrulyAltruistic,
];
