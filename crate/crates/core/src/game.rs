//! Players, friendship graphs, valuations, preference models and the validated [`Game`].

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("a game needs at least one player")]
    NoPlayers,
    #[error("{0} players exceeds the supported maximum of {MAX_PLAYERS}")]
    TooManyPlayers(usize),
    #[error("player labels must be nonempty")]
    EmptyLabel,
    #[error("duplicate player label `{0}`")]
    DuplicateLabel(String),
    #[error("self-loop edge on player `{0}`")]
    SelfLoop(String),
    #[error("edge endpoint {0} is not a player")]
    UnknownPlayer(usize),
    #[error("player `{0}` uses the fractional model but the game has no valuations")]
    MissingValuations(String),
    #[error("valuation matrix must be {n}x{n}")]
    ValuationShape { n: usize },
    #[error("expected {expected} per-player models, got {got}")]
    ModelCount { expected: usize, got: usize },
}

/// Undirected, loop-free friendship relation over `n` players.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FriendshipGraph {
    n: usize,
    adjacency: Vec<Coalition>,
}

impl FriendshipGraph {
    /// The graph with no edges.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_PLAYERS);
        FriendshipGraph {
            n,
            adjacency: vec![Coalition::EMPTY; n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            g.adjacency[i] = Coalition::full(n).without(i);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GameError> {
        if n > MAX_PLAYERS {
            return Err(GameError::TooManyPlayers(n));
        }
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n {
                return Err(GameError::UnknownPlayer(i));
            }
            if j >= n {
                return Err(GameError::UnknownPlayer(j));
            }
            if i == j {
                return Err(GameError::SelfLoop(format!("#{i}")));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    /// Adds the undirected edge `{i, j}`. Panics on a self-loop.
    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert_ne!(i, j, "self-loops are not allowed");
        self.adjacency[i] = self.adjacency[i].with(j);
        self.adjacency[j] = self.adjacency[j].with(i);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    /// F_i, the neighbours of `i`.
    pub fn friends(&self, i: usize) -> Coalition {
        self.adjacency[i]
    }

    /// E_i = N \ ({i} ∪ F_i).
    pub fn enemies(&self, i: usize) -> Coalition {
        Coalition::full(self.n)
            .without(i)
            .intersection(Coalition::from_bits(!self.adjacency[i].bits()))
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.adjacency[i]
                .members()
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// True iff every pair of distinct members is adjacent.
    pub fn is_clique(&self, c: Coalition) -> bool {
        c.members()
            .all(|i| c.without(i).is_subset(self.adjacency[i]))
    }

    /// Connectivity of the whole graph; graphs with at most one player are connected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut reached = Coalition::singleton(0);
        let mut frontier = reached;
        while !frontier.is_empty() {
            let mut next = Coalition::EMPTY;
            for i in frontier.members() {
                next = next.union(self.adjacency[i]);
            }
            frontier = Coalition::from_bits(next.bits() & !reached.bits());
            reached = reached.union(frontier);
        }
        reached == Coalition::full(self.n)
    }
}

impl fmt::Debug for FriendshipGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FriendshipGraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// The n×n table v_i(j) of a fractional game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationMatrix {
    n: usize,
    values: Vec<Rational>,
}

impl ValuationMatrix {
    /// Builds from rows, forcing the diagonal to zero. Returns the matrix and the
    /// players whose self-valuation had to be reset.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<(Self, Vec<usize>), GameError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GameError::ValuationShape { n });
        }
        let mut coerced = Vec::new();
        let mut values = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                if i == j && !v.is_zero() {
                    coerced.push(i);
                    values.push(Rational::ZERO);
                } else {
                    values.push(v);
                }
            }
        }
        Ok((ValuationMatrix { n, values }, coerced))
    }

    /// The simple symmetric valuation induced by a friendship graph: 1 for friends, 0 otherwise.
    pub fn from_graph(graph: &FriendshipGraph) -> Self {
        let n = graph.n();
        let values = (0..n * n)
            .map(|k| {
                if graph.has_edge(k / n, k % n) {
                    Rational::ONE
                } else {
                    Rational::ZERO
                }
            })
            .collect();
        ValuationMatrix { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// v_i(j)
    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn is_simple(&self) -> bool {
        self.values
            .iter()
            .all(|v| *v == Rational::ZERO || *v == Rational::ONE)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// How a fractional player aggregates valuations over a coalition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Aggregation {
    #[default]
    Mean,
    Sum,
}

impl Aggregation {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregation::Mean => "mean",
            Aggregation::Sum => "sum",
        }
    }
}

impl FromStr for Aggregation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean" => Ok(Aggregation::Mean),
            "sum" => Ok(Aggregation::Sum),
            other => Err(format!(
                "unknown aggregation `{other}` (expected mean or sum)"
            )),
        }
    }
}

/// A player's preference model over the coalitions containing them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PreferenceModel {
    FriendOriented,
    EnemyOriented,
    Fractional(Aggregation),
    SelfishFirst,
    EqualTreatment,
    TrulyAltruistic,
}

impl PreferenceModel {
    pub const ALL: [PreferenceModel; 6] = [
        PreferenceModel::FriendOriented,
        PreferenceModel::EnemyOriented,
        PreferenceModel::Fractional(Aggregation::Mean),
        PreferenceModel::SelfishFirst,
        PreferenceModel::EqualTreatment,
        PreferenceModel::TrulyAltruistic,
    ];

    /// Short tag used in documents and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            PreferenceModel::FriendOriented => "FO",
            PreferenceModel::EnemyOriented => "EO",
            PreferenceModel::Fractional(_) => "FR",
            PreferenceModel::SelfishFirst => "SF",
            PreferenceModel::EqualTreatment => "EQ",
            PreferenceModel::TrulyAltruistic => "AL",
        }
    }

    /// Parses a tag (case-insensitive); `FR` takes the given aggregation.
    pub fn from_tag(tag: &str, aggregation: Aggregation) -> Result<Self, String> {
        Ok(match tag.to_ascii_uppercase().as_str() {
            "FO" => PreferenceModel::FriendOriented,
            "EO" => PreferenceModel::EnemyOriented,
            "FR" => PreferenceModel::Fractional(aggregation),
            "SF" => PreferenceModel::SelfishFirst,
            "EQ" => PreferenceModel::EqualTreatment,
            "AL" => PreferenceModel::TrulyAltruistic,
            _ => {
                return Err(format!(
                    "unknown model `{tag}` (expected one of FO, EO, FR, SF, EQ, AL)"
                ))
            }
        })
    }

    pub fn is_fractional(self) -> bool {
        matches!(self, PreferenceModel::Fractional(_))
    }

    /// Models whose utility averages friends' FO scores, where an empty friend set averages to 0.
    pub fn averages_friends(self) -> bool {
        matches!(
            self,
            PreferenceModel::SelfishFirst | PreferenceModel::TrulyAltruistic
        )
    }
}

impl fmt::Display for PreferenceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelAssignment {
    Uniform(PreferenceModel),
    PerPlayer(Vec<PreferenceModel>),
}

/// A validated hedonic game. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    labels: Vec<String>,
    graph: FriendshipGraph,
    valuations: Option<ValuationMatrix>,
    models: Vec<PreferenceModel>,
    warnings: Vec<String>,
}

/// `a`..`z`, then `p26`, `p27`, ...
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("p{i}")
            }
        })
        .collect()
}

impl Game {
    /// Validates and assembles a game from labels, index edges, optional valuation rows
    /// and model assignment.
    pub fn build(
        labels: Vec<String>,
        edges: &[(usize, usize)],
        valuations: Option<Vec<Vec<Rational>>>,
        models: ModelAssignment,
    ) -> Result<Self, GameError> {
        let n = labels.len();
        if n == 0 {
            return Err(GameError::NoPlayers);
        }
        if n > MAX_PLAYERS {
            return Err(GameError::TooManyPlayers(n));
        }
        let mut seen = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(GameError::EmptyLabel);
            }
            if seen.insert(label.as_str(), i).is_some() {
                return Err(GameError::DuplicateLabel(label.clone()));
            }
        }
        for &(i, j) in edges {
            if let Some(&bad) = [i, j].iter().find(|&&p| p >= n) {
                return Err(GameError::UnknownPlayer(bad));
            }
            if i == j {
                return Err(GameError::SelfLoop(labels[i].clone()));
            }
        }
        let graph = FriendshipGraph::from_edges(n, edges)?;

        let mut warnings = Vec::new();
        let valuations = match valuations {
            None => None,
            Some(rows) => {
                if rows.len() != n {
                    return Err(GameError::ValuationShape { n });
                }
                let (matrix, coerced) = ValuationMatrix::from_rows(rows)?;
                for i in coerced {
                    let msg = format!("self-valuation of `{}` reset to 0", labels[i]);
                    log::warn!("{msg}");
                    warnings.push(msg);
                }
                Some(matrix)
            }
        };

        let models = match models {
            ModelAssignment::Uniform(m) => vec![m; n],
            ModelAssignment::PerPlayer(ms) => {
                if ms.len() != n {
                    return Err(GameError::ModelCount {
                        expected: n,
                        got: ms.len(),
                    });
                }
                ms
            }
        };
        if valuations.is_none() {
            if let Some(i) = models.iter().position(|m| m.is_fractional()) {
                return Err(GameError::MissingValuations(labels[i].clone()));
            }
        }

        Ok(Game {
            labels,
            graph,
            valuations,
            models,
            warnings,
        })
    }

    /// A game on `graph` where every player uses `model`, labelled with [`default_labels`].
    /// Fractional players get the simple symmetric valuation induced by the graph.
    pub fn homogeneous(graph: FriendshipGraph, model: PreferenceModel) -> Self {
        let n = graph.n();
        assert!(n >= 1, "a game needs at least one player");
        let valuations = model
            .is_fractional()
            .then(|| ValuationMatrix::from_graph(&graph));
        Game {
            labels: default_labels(n),
            graph,
            valuations,
            models: vec![model; n],
            warnings: Vec::new(),
        }
    }

    /// Same players and graph with every player switched to `model`.
    pub fn with_uniform_model(&self, model: PreferenceModel) -> Result<Self, GameError> {
        if model.is_fractional() && self.valuations.is_none() {
            return Err(GameError::MissingValuations(self.labels[0].clone()));
        }
        Ok(Game {
            models: vec![model; self.n()],
            ..self.clone()
        })
    }

    /// n = |N|.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn graph(&self) -> &FriendshipGraph {
        &self.graph
    }

    pub fn valuations(&self) -> Option<&ValuationMatrix> {
        self.valuations.as_ref()
    }

    pub fn model(&self, i: usize) -> PreferenceModel {
        self.models[i]
    }

    pub fn models(&self) -> &[PreferenceModel] {
        &self.models
    }

    /// The shared model when every player uses the same one.
    pub fn uniform_model(&self) -> Option<PreferenceModel> {
        let first = self.models[0];
        self.models.iter().all(|&m| m == first).then_some(first)
    }

    pub fn friends(&self, i: usize) -> Coalition {
        self.graph.friends(i)
    }

    pub fn enemies(&self, i: usize) -> Coalition {
        self.graph.enemies(i)
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::full(self.n())
    }

    /// Non-fatal notes produced during construction.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn format_coalition(&self, c: Coalition) -> String {
        let names: Vec<&str> = c.members().map(|i| self.label(i)).collect();
        format!("{{{}}}", names.join(","))
    }
}
