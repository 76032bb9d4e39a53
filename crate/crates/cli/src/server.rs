//! Stateless JSON API over the engine. Every handler is a pure function of its request body.
//!
//! Malformed JSON answers 400; well-formed input the engine rejects (unknown labels, caps,
//! time budget) answers 422. Error bodies are `{"error": ..., "partial": false}`.

use std::time::{Duration, Instant};

use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use hedonic_core::doc::labels_of;
use hedonic_core::doc::{parse_game, parse_partition, DocError};
use hedonic_core::search::{compute_core_until, SearchError, PARTITION_CAP, SWEEP_CAP};
use hedonic_core::stability::{certify, find_blocking_coalition, StabilityNotion};
use hedonic_core::wire::{
    to_json, BlockingResponse, CertifyResponse, CoreResponse, EvaluateResponse,
};
use hedonic_core::{Game, Partition, PreferenceModel};

use crate::commands::{parse_model, parse_notions};
use crate::{FIXTURES, STABILITY_CAP};

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(10);

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Wall-clock budget for a single `/api/core` computation.
    pub core_budget: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            core_budget: DEFAULT_BUDGET,
        }
    }
}

pub fn router(config: ServiceConfig) -> Router {
    Router::new()
        .route("/api/evaluate", post(evaluate))
        .route("/api/certify", post(certify_handler))
        .route("/api/blocking", post(blocking))
        .route("/api/core", post(core))
        .route("/api/examples", get(examples))
        .route("/api/health", get(health))
        .with_state(config)
}

pub async fn serve(port: u16, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(config)).await
}

#[derive(Debug)]
struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl ToString) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: message.to_string(),
        }
    }

    fn unprocessable(message: impl ToString) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            message: message.to_string(),
        }
    }

    fn from_doc(what: &str, e: DocError) -> Self {
        let message = format!("{what}: {e}");
        if e.is_syntax() {
            ApiError::bad_request(message)
        } else {
            ApiError::unprocessable(message)
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    partial: bool,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = to_json(&ErrorBody {
            error: &self.message,
            partial: false,
        });
        json_response(self.status, body)
    }
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn ok(body: String) -> Response {
    json_response(StatusCode::OK, body)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GameRequest {
    game: Value,
    #[serde(default)]
    model: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairRequest {
    game: Value,
    partition: Value,
    #[serde(default)]
    model: Option<String>,
    #[serde(default)]
    notions: Option<Vec<String>>,
}

fn parse_body<'a, T: Deserialize<'a>>(body: &'a str) -> Result<T, ApiError> {
    serde_json::from_str(body).map_err(|e| ApiError::bad_request(format!("request: {e}")))
}

fn load_game(doc: &Value, model: Option<&str>) -> Result<Game, ApiError> {
    let game = parse_game(&doc.to_string()).map_err(|e| ApiError::from_doc("game", e))?;
    match model {
        None => Ok(game),
        Some(m) => {
            let model: PreferenceModel = parse_model(m).map_err(ApiError::unprocessable)?;
            game.with_uniform_model(model)
                .map_err(|e| ApiError::unprocessable(format!("game: {e}")))
        }
    }
}

fn load_pair(req: &PairRequest) -> Result<(Game, Partition), ApiError> {
    let game = load_game(&req.game, req.model.as_deref())?;
    let partition = parse_partition(&req.partition.to_string(), &game)
        .map_err(|e| ApiError::from_doc("partition", e))?;
    Ok((game, partition))
}

fn stability_cap(game: &Game) -> Result<(), ApiError> {
    if game.n() > STABILITY_CAP {
        return Err(ApiError::unprocessable(format!(
            "{} players exceeds the stability search cap of {STABILITY_CAP}",
            game.n()
        )));
    }
    Ok(())
}

async fn evaluate(body: String) -> Result<Response, ApiError> {
    let req: PairRequest = parse_body(&body)?;
    let (game, partition) = load_pair(&req)?;
    Ok(ok(to_json(&EvaluateResponse::new(&game, &partition))))
}

async fn certify_handler(body: String) -> Result<Response, ApiError> {
    let req: PairRequest = parse_body(&body)?;
    let (game, partition) = load_pair(&req)?;
    stability_cap(&game)?;
    let notions = match &req.notions {
        None => StabilityNotion::ALL.to_vec(),
        Some(list) => parse_notions(list).map_err(ApiError::unprocessable)?,
    };
    let report = tokio::task::spawn_blocking(move || {
        let report = certify(&game, &partition, &notions);
        to_json(&CertifyResponse::new(&game, &report))
    })
    .await
    .map_err(|e| ApiError::unprocessable(format!("certification failed: {e}")))?;
    Ok(ok(report))
}

async fn blocking(body: String) -> Result<Response, ApiError> {
    let req: PairRequest = parse_body(&body)?;
    if req.notions.is_some() {
        return Err(ApiError::bad_request(
            "request: `notions` is not accepted by /api/blocking",
        ));
    }
    let (game, partition) = load_pair(&req)?;
    stability_cap(&game)?;
    let body = tokio::task::spawn_blocking(move || {
        let coalition = find_blocking_coalition(&game, &partition).map(|c| labels_of(&game, c));
        to_json(&BlockingResponse { coalition })
    })
    .await
    .map_err(|e| ApiError::unprocessable(format!("search failed: {e}")))?;
    Ok(ok(body))
}

async fn core(State(config): State<ServiceConfig>, body: String) -> Result<Response, ApiError> {
    let req: GameRequest = parse_body(&body)?;
    let game = load_game(&req.game, req.model.as_deref())?;
    let deadline = Instant::now() + config.core_budget;
    let result = tokio::task::spawn_blocking(move || {
        compute_core_until(&game, Some(deadline)).map(|r| to_json(&CoreResponse::new(&game, &r)))
    })
    .await
    .map_err(|e| ApiError::unprocessable(format!("core computation failed: {e}")))?;
    match result {
        Ok(body) => Ok(ok(body)),
        Err(e @ SearchError::PartitionCap { .. }) => Err(ApiError::unprocessable(e)),
        Err(SearchError::Timeout { scanned }) => Err(ApiError::unprocessable(format!(
            "time budget of {} ms exhausted after {scanned} partitions",
            config.core_budget.as_millis()
        ))),
        Err(e) => Err(ApiError::unprocessable(e)),
    }
}

#[derive(Serialize)]
struct Example<'a> {
    name: &'a str,
    game: Value,
}

async fn examples() -> Response {
    let list: Vec<Example<'_>> = FIXTURES
        .iter()
        .map(|(name, text)| Example {
            name,
            game: serde_json::from_str(text).expect("bundled fixtures are valid JSON"),
        })
        .collect();
    ok(to_json(&list))
}

#[derive(Serialize)]
struct Health {
    status: &'static str,
    version: &'static str,
    caps: Caps,
}

#[derive(Serialize)]
struct Caps {
    core_players: usize,
    stability_players: usize,
    hunt_players: usize,
}

async fn health() -> Response {
    ok(to_json(&Health {
        status: "ok",
        version: env!("CARGO_PKG_VERSION"),
        caps: Caps {
            core_players: PARTITION_CAP,
            stability_players: STABILITY_CAP,
            hunt_players: SWEEP_CAP,
        },
    }))
}
