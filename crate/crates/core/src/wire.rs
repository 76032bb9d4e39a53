//! JSON result shapes shared by every front end, so identical inputs produce identical bytes.

use serde::Serialize;

use crate::coalition::Partition;
use crate::doc::labels_of;
use crate::game::{Game, PreferenceModel};
use crate::preference::utility;
use crate::rational::Utility;
use crate::search::CoreResult;
use crate::stability::{StabilityReport, Verdict, Witness};

fn aggregation_of(game: &Game) -> &'static str {
    game.models()
        .iter()
        .find_map(|m| match m {
            PreferenceModel::Fractional(a) => Some(a.as_str()),
            _ => None,
        })
        .unwrap_or("mean")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluateRow {
    pub player: String,
    pub coalition: Vec<String>,
    pub utility: Utility,
    pub model: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluateResponse {
    pub aggregation: &'static str,
    pub rows: Vec<EvaluateRow>,
}

impl EvaluateResponse {
    /// One row per player, in index order.
    pub fn new(game: &Game, partition: &Partition) -> Self {
        let rows = (0..game.n())
            .map(|i| {
                let c = partition.coalition_of(i);
                EvaluateRow {
                    player: game.label(i).to_string(),
                    coalition: labels_of(game, c),
                    utility: utility(game, i, c).expect("player is in own block"),
                    model: game.model(i).tag().to_string(),
                }
            })
            .collect();
        EvaluateResponse {
            aggregation: aggregation_of(game),
            rows,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    Coalition { coalition: Vec<String> },
    Player { player: String },
    Deviation { player: String, target: Vec<String> },
}

impl WitnessJson {
    pub fn new(game: &Game, witness: Witness) -> Self {
        match witness {
            Witness::Coalition(c) => WitnessJson::Coalition {
                coalition: labels_of(game, c),
            },
            Witness::Player(i) => WitnessJson::Player {
                player: game.label(i).to_string(),
            },
            Witness::Deviation { player, target } => WitnessJson::Deviation {
                player: game.label(player).to_string(),
                target: labels_of(game, target),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictJson {
    pub notion: &'static str,
    pub auxiliary: bool,
    pub stable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifyResponse {
    pub all_stable: bool,
    pub aggregation: &'static str,
    /// Present when some player averages friends' scores and an empty friend set counts as 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empty_friend_average: Option<&'static str>,
    pub verdicts: Vec<VerdictJson>,
}

impl CertifyResponse {
    pub fn new(game: &Game, report: &StabilityReport) -> Self {
        CertifyResponse {
            all_stable: report.all_stable(),
            aggregation: aggregation_of(game),
            empty_friend_average: game
                .models()
                .iter()
                .any(|m| m.averages_friends())
                .then_some("0"),
            verdicts: report
                .verdicts
                .iter()
                .map(|v| VerdictJson {
                    notion: v.notion.as_str(),
                    auxiliary: v.notion.is_auxiliary(),
                    stable: v.verdict.is_stable(),
                    witness: match v.verdict {
                        Verdict::Stable => None,
                        Verdict::Unstable(w) => Some(WitnessJson::new(game, w)),
                    },
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockingResponse {
    pub coalition: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreResponse {
    pub exhaustive: bool,
    pub scanned: u64,
    pub blocked: u64,
    pub partitions: Vec<Vec<Vec<String>>>,
}

impl CoreResponse {
    pub fn new(game: &Game, core: &CoreResult) -> Self {
        CoreResponse {
            exhaustive: core.exhaustive,
            scanned: core.scanned,
            blocked: core.blocked,
            partitions: core
                .partitions
                .iter()
                .map(|p| p.blocks().iter().map(|&c| labels_of(game, c)).collect())
                .collect(),
        }
    }
}

/// Compact JSON plus trailing newline; the single encoding used for every response.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("responses serialize");
    s.push('\n');
    s
}
