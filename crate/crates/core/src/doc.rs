//! JSON game and partition documents.
//!
//! ```json
//! {
//!   "format": "hedonic-game/1",
//!   "players": ["a", "b", "c"],
//!   "edges": [["a", "b"], ["b", "c"]],
//!   "valuations": [["0", "1", "1/2"], ["1", "0", "0"], ["0", "0", "0"]],
//!   "model": "FR",
//!   "aggregation": "mean"
//! }
//! ```
//!
//! Exactly one of `model` (every player) or `models` (one tag per player, in player
//! order) must be present. Valuations are optional unless some player is fractional;
//! entries are rational strings such as `"2/3"` (plain integers are also accepted).
//!
//! Partitions are `{"format": "hedonic-partition/1", "blocks": [["a", "b"], ["c"]]}`.

use std::collections::HashMap;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::coalition::{Coalition, Partition, PartitionError};
use crate::game::{Aggregation, Game, GameError, ModelAssignment, PreferenceModel};
use crate::rational::Rational;

pub const GAME_FORMAT: &str = "hedonic-game/1";
pub const PARTITION_FORMAT: &str = "hedonic-partition/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format `{found}` (expected `{expected}`)")]
    Format { found: String, expected: String },
    #[error("{0}")]
    Semantic(String),
}

impl DocError {
    /// True for errors in the shape of the input rather than its meaning.
    pub fn is_syntax(&self) -> bool {
        matches!(self, DocError::Syntax { .. } | DocError::Format { .. })
    }
}

impl From<serde_json::Error> for DocError {
    fn from(e: serde_json::Error) -> Self {
        DocError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl From<GameError> for DocError {
    fn from(e: GameError) -> Self {
        DocError::Semantic(e.to_string())
    }
}

/// A valuation entry: a rational string or a JSON integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValuationEntry(pub Rational);

impl<'de> Deserialize<'de> for ValuationEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntryVisitor;

        impl Visitor<'_> for EntryVisitor {
            type Value = ValuationEntry;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string like \"2/3\" or an integer")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(ValuationEntry(Rational::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(ValuationEntry(Rational::integer(v as i128)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                v.parse().map(ValuationEntry).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(EntryVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub format: String,
    pub players: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuations: Option<Vec<Vec<ValuationEntry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub models: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDocument {
    pub format: String,
    pub blocks: Vec<Vec<String>>,
}

fn check_format(found: &str, expected: &str) -> Result<(), DocError> {
    if found == expected {
        Ok(())
    } else {
        Err(DocError::Format {
            found: found.to_string(),
            expected: expected.to_string(),
        })
    }
}

fn label_index(labels: &[String]) -> HashMap<&str, usize> {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect()
}

impl GameDocument {
    pub fn into_game(self) -> Result<Game, DocError> {
        check_format(&self.format, GAME_FORMAT)?;
        let aggregation = match &self.aggregation {
            None => Aggregation::default(),
            Some(a) => a.parse().map_err(DocError::Semantic)?,
        };
        let index = label_index(&self.players);
        let resolve = |label: &str| {
            index
                .get(label)
                .copied()
                .ok_or_else(|| DocError::Semantic(format!("unknown player label `{label}`")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for [u, v] in &self.edges {
            edges.push((resolve(u)?, resolve(v)?));
        }
        let tag = |t: &str| PreferenceModel::from_tag(t, aggregation).map_err(DocError::Semantic);
        let models = match (&self.model, &self.models) {
            (Some(m), None) => ModelAssignment::Uniform(tag(m)?),
            (None, Some(ms)) => {
                ModelAssignment::PerPlayer(ms.iter().map(|m| tag(m)).collect::<Result<_, _>>()?)
            }
            (Some(_), Some(_)) => {
                return Err(DocError::Semantic(
                    "give either `model` or `models`, not both".into(),
                ))
            }
            (None, None) => {
                return Err(DocError::Semantic(
                    "missing `model` (or per-player `models`)".into(),
                ))
            }
        };
        let valuations = self.valuations.map(|rows| {
            rows.into_iter()
                .map(|r| r.into_iter().map(|e| e.0).collect())
                .collect()
        });
        Ok(Game::build(self.players, &edges, valuations, models)?)
    }

    /// Normalized document: edges sorted by player index, a single `model` when uniform,
    /// aggregation always present.
    pub fn from_game(game: &Game) -> Self {
        let label = |i: usize| game.label(i).to_string();
        let aggregation = game
            .models()
            .iter()
            .find_map(|m| match m {
                PreferenceModel::Fractional(a) => Some(*a),
                _ => None,
            })
            .unwrap_or_default();
        let (model, models) = match game.uniform_model() {
            Some(m) => (Some(m.tag().to_string()), None),
            None => (
                None,
                Some(game.models().iter().map(|m| m.tag().to_string()).collect()),
            ),
        };
        GameDocument {
            format: GAME_FORMAT.to_string(),
            players: game.labels().to_vec(),
            edges: game
                .graph()
                .edges()
                .map(|(i, j)| [label(i), label(j)])
                .collect(),
            valuations: game.valuations().map(|v| {
                (0..v.n())
                    .map(|i| v.row(i).iter().map(|&r| ValuationEntry(r)).collect())
                    .collect()
            }),
            model,
            models,
            aggregation: Some(aggregation.as_str().to_string()),
        }
    }
}

impl PartitionDocument {
    pub fn resolve(&self, game: &Game) -> Result<Partition, DocError> {
        check_format(&self.format, PARTITION_FORMAT)?;
        let index = label_index(game.labels());
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let mut mask = Coalition::EMPTY;
            for label in block {
                let i = *index.get(label.as_str()).ok_or_else(|| {
                    DocError::Semantic(format!("unknown player label `{label}` in partition"))
                })?;
                if mask.contains(i) {
                    return Err(DocError::Semantic(format!(
                        "player `{label}` appears in more than one block"
                    )));
                }
                mask = mask.with(i);
            }
            blocks.push(mask);
        }
        Partition::new(game.n(), blocks).map_err(|e| partition_error(game, e))
    }

    pub fn from_partition(game: &Game, partition: &Partition) -> Self {
        PartitionDocument {
            format: PARTITION_FORMAT.to_string(),
            blocks: partition
                .blocks()
                .iter()
                .map(|&c| labels_of(game, c))
                .collect(),
        }
    }
}

fn partition_error(game: &Game, e: PartitionError) -> DocError {
    DocError::Semantic(match e {
        PartitionError::Overlap(i) => {
            format!("player `{}` appears in more than one block", game.label(i))
        }
        PartitionError::MissingPlayer(i) => {
            format!("player `{}` is not in any block", game.label(i))
        }
        other => other.to_string(),
    })
}

pub fn labels_of(game: &Game, c: Coalition) -> Vec<String> {
    c.members().map(|i| game.label(i).to_string()).collect()
}

/// Resolves a list of labels to a coalition.
pub fn coalition_from_labels<S: AsRef<str>>(
    game: &Game,
    labels: &[S],
) -> Result<Coalition, DocError> {
    labels.iter().try_fold(Coalition::EMPTY, |acc, l| {
        let l = l.as_ref();
        game.index_of(l)
            .map(|i| acc.with(i))
            .ok_or_else(|| DocError::Semantic(format!("unknown player label `{l}`")))
    })
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn parse_game(text: &str) -> Result<Game, DocError> {
    serde_json::from_str::<GameDocument>(text)?.into_game()
}

pub fn serialize_game(game: &Game) -> String {
    pretty(&GameDocument::from_game(game))
}

pub fn parse_partition(text: &str, game: &Game) -> Result<Partition, DocError> {
    serde_json::from_str::<PartitionDocument>(text)?.resolve(game)
}

pub fn serialize_partition(game: &Game, partition: &Partition) -> String {
    pretty(&PartitionDocument::from_partition(game, partition))
}

/// Re-renders a game document in normalized form.
pub fn normalize_game_text(text: &str) -> Result<String, DocError> {
    parse_game(text).map(|g| serialize_game(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    const STORY: &str = r#"{
        "format": "hedonic-game/1",
        "players": ["a", "b", "c", "d", "e"],
        "edges": [["b", "a"], ["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"], ["c", "d"], ["a", "e"]],
        "model": "AL"
    }"#;

    #[test]
    fn story_document_parses_to_fixture() {
        let g = parse_game(STORY).unwrap();
        assert_eq!(g, fixtures::story(PreferenceModel::TrulyAltruistic));
    }

    #[test]
    fn duplicate_label_is_semantic_error() {
        let text = r#"{"format": "hedonic-game/1", "players": ["a", "a"], "model": "FO"}"#;
        let err = parse_game(text).unwrap_err();
        assert!(!err.is_syntax());
        assert!(err.to_string().contains("`a`"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_game("{\n  \"format\": \"hedonic-game/1\",\n  \"players\": [\"a\"\n")
            .unwrap_err();
        match err {
            DocError::Syntax { line, .. } => assert!(line >= 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"format": "hedonic-game/1", "players": ["a"], "model": "FO", "colour": 1}"#;
        let err = parse_game(text).unwrap_err();
        assert!(err.is_syntax());
        assert!(err.to_string().contains("colour"));
        let err = parse_game(r#"{"format": "hedonic-game/2", "players": ["a"], "model": "FO"}"#)
            .unwrap_err();
        assert!(matches!(err, DocError::Format { .. }));
    }

    #[test]
    fn semantic_errors() {
        for (text, needle) in [
            (
                r#"{"format": "hedonic-game/1", "players": ["a"], "edges": [["a", "z"]], "model": "FO"}"#,
                "`z`",
            ),
            (
                r#"{"format": "hedonic-game/1", "players": ["a"], "edges": [["a", "a"]], "model": "FO"}"#,
                "self-loop",
            ),
            (
                r#"{"format": "hedonic-game/1", "players": ["a"], "model": "FR"}"#,
                "valuations",
            ),
            (
                r#"{"format": "hedonic-game/1", "players": ["a"], "model": "XX"}"#,
                "unknown model",
            ),
            (
                r#"{"format": "hedonic-game/1", "players": ["a"]}"#,
                "missing `model`",
            ),
        ] {
            let err = parse_game(text).unwrap_err();
            assert!(matches!(err, DocError::Semantic(_)), "{text}");
            assert!(err.to_string().contains(needle), "{err} lacks {needle}");
        }
    }

    #[test]
    fn fractional_document_with_integer_entries() {
        let text = r#"{
            "format": "hedonic-game/1", "players": ["x", "y"],
            "valuations": [[5, "1/2"], [1, 0]], "model": "FR", "aggregation": "sum"
        }"#;
        let g = parse_game(text).unwrap();
        let v = g.valuations().unwrap();
        assert_eq!(v.get(0, 0), Rational::ZERO);
        assert_eq!(v.get(0, 1), Rational::new(1, 2));
        assert_eq!(g.model(0), PreferenceModel::Fractional(Aggregation::Sum));
        assert_eq!(g.warnings().len(), 1);
        let out = serialize_game(&g);
        assert!(out.contains("\"1/2\"") && out.contains("\"sum\""));
    }

    #[test]
    fn partition_documents() {
        let g = fixtures::story(PreferenceModel::FriendOriented);
        let p = parse_partition(
            r#"{"format": "hedonic-partition/1", "blocks": [["e"], ["d", "a", "b", "c"]]}"#,
            &g,
        )
        .unwrap();
        assert_eq!(p.to_index_lists(), vec![vec![0, 1, 2, 3], vec![4]]);
        let text = serialize_partition(&g, &p);
        assert_eq!(parse_partition(&text, &g).unwrap(), p);
        for bad in [
            r#"{"format": "hedonic-partition/1", "blocks": [["a", "b", "c", "d"]]}"#,
            r#"{"format": "hedonic-partition/1", "blocks": [["a", "b", "c", "d", "e"], ["a"]]}"#,
            r#"{"format": "hedonic-partition/1", "blocks": [["a", "b", "c", "d", "e", "q"]]}"#,
            r#"{"format": "hedonic-partition/1", "blocks": [["a", "b", "c", "d", "e"], []]}"#,
        ] {
            assert!(
                matches!(parse_partition(bad, &g), Err(DocError::Semantic(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn normalization_is_idempotent() {
        let once = normalize_game_text(STORY).unwrap();
        assert_eq!(normalize_game_text(&once).unwrap(), once);
        assert!(once.contains("\"aggregation\": \"mean\""));
    }

    fn arb_game() -> impl Strategy<Value = Game> {
        (1usize..7)
            .prop_flat_map(|n| {
                let pairs = n * (n - 1) / 2;
                (
                    Just(n),
                    prop::collection::vec(any::<bool>(), pairs),
                    prop::collection::vec(0usize..6, n),
                    prop::collection::vec(-3i64..4, n * n),
                    any::<bool>(),
                )
            })
            .prop_map(|(n, edge_bits, tags, vals, sum)| {
                let pairs = crate::search::edge_pairs(n);
                let edges: Vec<_> = pairs
                    .into_iter()
                    .zip(edge_bits)
                    .filter_map(|(e, b)| b.then_some(e))
                    .collect();
                let agg = if sum {
                    Aggregation::Sum
                } else {
                    Aggregation::Mean
                };
                let models = tags
                    .iter()
                    .map(|&t| match PreferenceModel::ALL[t] {
                        PreferenceModel::Fractional(_) => PreferenceModel::Fractional(agg),
                        m => m,
                    })
                    .collect();
                let rows = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if i == j {
                                    Rational::ZERO
                                } else {
                                    Rational::new(vals[i * n + j] as i128, 1 + (i + j) as i128 % 3)
                                }
                            })
                            .collect()
                    })
                    .collect();
                Game::build(
                    crate::game::default_labels(n),
                    &edges,
                    Some(rows),
                    ModelAssignment::PerPlayer(models),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn game_roundtrips_through_text(game in arb_game()) {
            let text = serialize_game(&game);
            let back = parse_game(&text).unwrap();
            prop_assert_eq!(&back, &game);
            prop_assert_eq!(serialize_game(&back), text);
        }

        #[test]
        fn coalition_labels_roundtrip(bits in 1u64..(1 << 5)) {
            let g = fixtures::story(PreferenceModel::FriendOriented);
            let c = Coalition::from_bits(bits);
            prop_assert_eq!(coalition_from_labels(&g, &labels_of(&g, c)).unwrap(), c);
        }
    }
}
