//! `eval`, `check`, `core` and `hunt`, as functions from document text to output.
//!
//! Exit codes: 0 stable or success, 1 unstable, 2 input error.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hedonic_core::doc::{parse_game, parse_partition};
use hedonic_core::search::{Checkpoint, HuntConfig};
use hedonic_core::stability::{certify, StabilityNotion, Verdict, Witness};
use hedonic_core::wire::{to_json, CertifyResponse, CoreResponse, EvaluateResponse};
use hedonic_core::{compute_core, Aggregation, Game, Partition, PreferenceModel, PARTITION_CAP};

use crate::STABILITY_CAP;

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSTABLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    pub fn input_error(message: impl std::fmt::Display) -> Self {
        Output {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code: EXIT_INPUT,
        }
    }
}

/// Parses a model tag; `FR` accepts an aggregation suffix such as `FR:sum`.
pub fn parse_model(s: &str) -> Result<PreferenceModel, String> {
    match s.split_once(':') {
        Some((tag, agg)) if tag.eq_ignore_ascii_case("FR") => {
            Ok(PreferenceModel::Fractional(agg.parse::<Aggregation>()?))
        }
        Some(_) => Err(format!("only FR takes an aggregation suffix, got `{s}`")),
        None => PreferenceModel::from_tag(s, Aggregation::default()),
    }
}

fn load_game(text: &str, model: Option<PreferenceModel>) -> Result<Game, Output> {
    let game = parse_game(text).map_err(|e| Output::input_error(format!("game: {e}")))?;
    let game = match model {
        None => game,
        Some(m) => game
            .with_uniform_model(m)
            .map_err(|e| Output::input_error(format!("game: {e}")))?,
    };
    for w in game.warnings() {
        log::warn!("{w}");
    }
    Ok(game)
}

fn load_pair(
    game_text: &str,
    partition_text: &str,
    model: Option<PreferenceModel>,
) -> Result<(Game, Partition), Output> {
    let game = load_game(game_text, model)?;
    let partition = parse_partition(partition_text, &game)
        .map_err(|e| Output::input_error(format!("partition: {e}")))?;
    Ok((game, partition))
}

fn column_table(rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|k| rows.iter().map(|r| r[k].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
    }
    out
}

/// Per-player utilities in their current blocks.
pub fn eval(
    game_text: &str,
    partition_text: &str,
    model: Option<PreferenceModel>,
    format: Format,
) -> Output {
    let (game, partition) = match load_pair(game_text, partition_text, model) {
        Ok(v) => v,
        Err(out) => return out,
    };
    let response = EvaluateResponse::new(&game, &partition);
    match format {
        Format::Json => Output::ok(to_json(&response)),
        Format::Text => {
            let mut rows = vec![vec![
                "player".to_string(),
                "coalition".to_string(),
                "utility".to_string(),
                "model".to_string(),
            ]];
            for r in &response.rows {
                rows.push(vec![
                    r.player.clone(),
                    format!("{{{}}}", r.coalition.join(",")),
                    r.utility.to_string(),
                    r.model.clone(),
                ]);
            }
            Output::ok(column_table(&rows))
        }
    }
}

pub fn parse_notions(list: &[String]) -> Result<Vec<StabilityNotion>, String> {
    let mut out = Vec::new();
    for s in list {
        let notion: StabilityNotion = s.parse()?;
        if !out.contains(&notion) {
            out.push(notion);
        }
    }
    if out.is_empty() {
        return Err("at least one stability notion is required".into());
    }
    Ok(out)
}

fn describe(game: &Game, witness: Witness) -> String {
    match witness {
        Witness::Coalition(c) => format!("blocking coalition {}", game.format_coalition(c)),
        Witness::Player(i) => format!("{} prefers to be alone", game.label(i)),
        Witness::Deviation { player, target } if target.is_empty() => {
            format!("{} prefers to leave and be alone", game.label(player))
        }
        Witness::Deviation { player, target } => format!(
            "{} prefers to join {}",
            game.label(player),
            game.format_coalition(target)
        ),
    }
}

/// Stability verdicts; exit 0 iff every requested notion is stable.
pub fn check(
    game_text: &str,
    partition_text: &str,
    notions: &[StabilityNotion],
    model: Option<PreferenceModel>,
    format: Format,
) -> Output {
    let (game, partition) = match load_pair(game_text, partition_text, model) {
        Ok(v) => v,
        Err(out) => return out,
    };
    if game.n() > STABILITY_CAP {
        return Output::input_error(format!(
            "{} players exceeds the stability search cap of {STABILITY_CAP}",
            game.n()
        ));
    }
    if notions.is_empty() {
        return Output::input_error("at least one stability notion is required");
    }
    let report = certify(&game, &partition, notions);
    let stdout = match format {
        Format::Json => to_json(&CertifyResponse::new(&game, &report)),
        Format::Text => {
            let mut out = String::new();
            for v in &report.verdicts {
                let name = if v.notion.is_auxiliary() {
                    format!("{} (auxiliary)", v.notion)
                } else {
                    v.notion.to_string()
                };
                match v.verdict {
                    Verdict::Stable => writeln!(out, "{name}: stable").unwrap(),
                    Verdict::Unstable(w) => {
                        writeln!(out, "{name}: unstable, {}", describe(&game, w)).unwrap()
                    }
                }
            }
            out
        }
    };
    Output {
        stdout,
        stderr: String::new(),
        code: if report.all_stable() {
            EXIT_OK
        } else {
            EXIT_UNSTABLE
        },
    }
}

/// Every core-stable partition, one per line.
pub fn core(game_text: &str, model: Option<PreferenceModel>, format: Format) -> Output {
    let game = match load_game(game_text, model) {
        Ok(g) => g,
        Err(out) => return out,
    };
    if game.n() > PARTITION_CAP {
        return Output::input_error(format!(
            "refusing to enumerate partitions of {} players: Bell numbers grow too fast beyond the cap of {PARTITION_CAP}",
            game.n()
        ));
    }
    let result = match compute_core(&game) {
        Ok(r) => r,
        Err(e) => return Output::input_error(e),
    };
    match format {
        Format::Json => Output::ok(to_json(&CoreResponse::new(&game, &result))),
        Format::Text => {
            let mut out = String::new();
            for p in &result.partitions {
                let blocks: Vec<String> = p
                    .blocks()
                    .iter()
                    .map(|&c| game.format_coalition(c))
                    .collect();
                writeln!(out, "{}", blocks.join(" ")).unwrap();
            }
            writeln!(
                out,
                "# {} core-stable of {} partitions scanned ({} blocked{})",
                result.partitions.len(),
                result.scanned,
                result.blocked,
                if result.exhaustive {
                    ", exhaustive"
                } else {
                    ""
                }
            )
            .unwrap();
            Output::ok(out)
        }
    }
}

#[derive(Debug, Clone)]
pub struct HuntArgs<'a> {
    pub config: HuntConfig,
    pub checkpoint: Option<&'a Path>,
    pub output: Option<&'a Path>,
    pub format: Format,
}

/// Empty-core sweep. Completes with exit 0 whether or not counterexamples turn up.
pub fn hunt(args: &HuntArgs<'_>) -> Output {
    let checkpoint = match args.checkpoint.map(Checkpoint::open).transpose() {
        Ok(cp) => cp,
        Err(e) => return Output::input_error(e),
    };
    let report = match args.config.run(checkpoint.as_ref()) {
        Ok(r) => r,
        Err(e) => return Output::input_error(e),
    };
    let json = report.to_json();
    let mut stderr = String::new();
    if let Some(path) = args.output {
        if let Err(e) = fs::write(path, &json) {
            return Output::input_error(format!("writing {}: {e}", path.display()));
        }
        let dir = path.parent().unwrap_or(Path::new("."));
        let stem = path
            .file_stem()
            .map_or("hunt".into(), |s| s.to_string_lossy().into_owned());
        for cx in &report.counterexamples {
            let file = dir.join(format!(
                "{stem}.counterexample-n{}-m{}.json",
                cx.n, cx.edge_mask
            ));
            if let Err(e) = fs::write(&file, cx.to_json_string(report.model)) {
                return Output::input_error(format!("writing {}: {e}", file.display()));
            }
            writeln!(stderr, "certificate written to {}", file.display()).unwrap();
        }
    }
    let stdout = match args.format {
        Format::Json => json,
        Format::Text => {
            let mut out = String::new();
            writeln!(
                out,
                "model {} | n <= {} | graphs: {}",
                report.model.tag(),
                report.n_max,
                if report.connected_only {
                    "connected"
                } else {
                    "all"
                }
            )
            .unwrap();
            for (n, games) in &report.scanned_by_n {
                writeln!(out, "n={n}: {games} games scanned").unwrap();
            }
            if report.counterexamples.is_empty() {
                writeln!(out, "no empty-core games found").unwrap();
            } else {
                writeln!(
                    out,
                    "EMPTY CORE FOUND in {} game(s):",
                    report.counterexamples.len()
                )
                .unwrap();
                for cx in &report.counterexamples {
                    let verified = cx.verify(report.model);
                    writeln!(
                        out,
                        "  n={} edge mask {} ({} partitions, certificate {})",
                        cx.n,
                        cx.edge_mask,
                        cx.certificate.len(),
                        if verified {
                            "verified"
                        } else {
                            "FAILED verification"
                        }
                    )
                    .unwrap();
                }
            }
            out
        }
    };
    Output {
        stdout,
        stderr,
        code: EXIT_OK,
    }
}
