//! Loopback HTTP service backing an interactive editor.
//!
//! All endpoints take and return JSON with `POST`:
//!
//! * `/solve` solves a whole problem document.
//! * `/solve-step` solves one starting step and optionally opens a session
//!   that holds the chain for later appends.
//! * `/append-step` continues a session's chain with a curvature-matched
//!   segment.
//! * `/limits` reports the attainable first tangent lengths of a step.
//! * `/sample` returns polyline points of a session chain or a solution.
//!
//! Sessions live in memory and expire after a period without use. Requests
//! on one session are serialized; solver work runs on the blocking pool.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::post;
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::alpha::{tangent_length_limits_with, TangentLimits};
use crate::chain::{Chain, ContinuityReport, ContinuityTolerances, Joint};
use crate::error::{Error, LengthRange};
use crate::io::document::{
    Goal, ProblemDocument, SolutionDocument, SolverOverrides, Step, StepSolution,
};
use crate::io::sample::{sample_chain, SampleMode};
use crate::io::solve::{chains_of, solve_document, solve_step, step_problem, StepFailure};
use crate::quadrature::QuadratureConfig;

/// Environment variable holding the listening port.
pub const PORT_VAR: &str = "LAC_PORT";
pub const DEFAULT_PORT: u16 = 7878;

#[derive(Clone, Copy, Debug)]
pub struct ServiceConfig {
    /// Sessions unused for this long are dropped.
    pub session_ttl: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            session_ttl: Duration::from_secs(30 * 60),
        }
    }
}

#[derive(Debug)]
struct SessionData {
    chain: Chain,
    steps: Vec<StepSolution>,
    config: SolverOverrides,
}

struct SessionEntry {
    data: Arc<tokio::sync::Mutex<SessionData>>,
    touched: Instant,
}

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<Uuid, SessionEntry>>>,
    config: ServiceConfig,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> AppState {
        AppState {
            sessions: Arc::new(Mutex::new(HashMap::new())),
            config,
        }
    }

    fn open(&self, data: SessionData) -> Uuid {
        let id = Uuid::new_v4();
        let mut map = self.sessions.lock().expect("session map poisoned");
        self.expire(&mut map);
        map.insert(
            id,
            SessionEntry {
                data: Arc::new(tokio::sync::Mutex::new(data)),
                touched: Instant::now(),
            },
        );
        id
    }

    fn get(&self, id: Uuid) -> Result<Arc<tokio::sync::Mutex<SessionData>>, ApiError> {
        let mut map = self.sessions.lock().expect("session map poisoned");
        self.expire(&mut map);
        let entry = map
            .get_mut(&id)
            .ok_or_else(|| ApiError::unknown_session(id))?;
        entry.touched = Instant::now();
        Ok(entry.data.clone())
    }

    fn expire(&self, map: &mut HashMap<Uuid, SessionEntry>) {
        let ttl = self.config.session_ttl;
        map.retain(|_, e| e.touched.elapsed() < ttl);
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().expect("session map poisoned").len()
    }
}

/// Error payload: `{"error": {"kind": ..., "message": ..., ...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attainable: Option<LengthRange>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorResponse {
    pub error: ErrorBody,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, kind: &str, message: String) -> ApiError {
        ApiError {
            status,
            body: ErrorBody {
                kind: kind.into(),
                message,
                step: None,
                target: None,
                attainable: None,
            },
        }
    }

    fn unknown_session(id: Uuid) -> ApiError {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "UnknownSession",
            format!("no live session {id}"),
        )
    }

    fn bad_request(message: String) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, "InvalidInput", message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> ApiError {
        let status = match e {
            Error::InvalidInput(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let mut err = ApiError::new(status, e.kind(), e.to_string());
        if let Error::Unreachable { target, range } = e {
            err.body.target = Some(target);
            err.body.attainable = Some(range);
        }
        err
    }
}

impl From<StepFailure> for ApiError {
    fn from(f: StepFailure) -> ApiError {
        let mut err = ApiError::from(f.error);
        err.body.step = f.step;
        err
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> ApiError {
        ApiError::bad_request(r.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorResponse { error: self.body })).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))?
}

async fn solve(body: Result<Json<ProblemDocument>, JsonRejection>) -> ApiResult<SolutionDocument> {
    let Json(doc) = body?;
    let solved = blocking(move || Ok(solve_document(&doc, &SolverOverrides::default())?)).await?;
    Ok(Json(solved.document))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveStepRequest {
    pub step: Step,
    #[serde(default)]
    pub config: SolverOverrides,
    /// Open a session holding the solved segment.
    #[serde(default)]
    pub session: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveStepResponse {
    pub solution: StepSolution,
    /// Attainable first tangent lengths for the step geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<TangentLimits>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<Uuid>,
}

async fn solve_step_handler(
    State(state): State<AppState>,
    body: Result<Json<SolveStepRequest>, JsonRejection>,
) -> ApiResult<SolveStepResponse> {
    let Json(req) = body?;
    if req.step.start.is_none() {
        return Err(ApiError::bad_request(
            "solve-step needs `a` and `v_a`; use append-step to continue".into(),
        ));
    }
    let config = req.config;
    let step = req.step;
    let (solved, limits) = blocking(move || {
        let doc = ProblemDocument {
            config,
            ..ProblemDocument::new(vec![step])
        };
        let solved = solve_document(&doc, &SolverOverrides::default())?;
        let cfg = config.alpha_config()?;
        let limits = step_problem(&step, None)
            .and_then(|p| tangent_length_limits_with(&p, &cfg))
            .ok();
        Ok((solved, limits))
    })
    .await?;
    let solution = solved.document.steps[0];
    let session = req.session.then(|| {
        state.open(SessionData {
            chain: solved.chains[0].clone(),
            steps: vec![solution],
            config,
        })
    });
    Ok(Json(SolveStepResponse {
        solution,
        limits,
        session,
    }))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppendStepRequest {
    pub session: Uuid,
    pub c: [f64; 2],
    pub v_c_dir: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AppendStepResponse {
    pub solution: StepSolution,
    pub joint: Joint,
    pub continuity: ContinuityReport,
    /// Number of segments in the session chain.
    pub segments: usize,
}

fn continuation(c: [f64; 2], v_c_dir: [f64; 2]) -> Step {
    Step {
        start: None,
        c: crate::geom::Point::new(c[0], c[1]),
        v_c_dir: crate::geom::Vec2::new(v_c_dir[0], v_c_dir[1]),
        goal: Goal::Matched,
    }
}

async fn append_step_handler(
    State(state): State<AppState>,
    body: Result<Json<AppendStepRequest>, JsonRejection>,
) -> ApiResult<AppendStepResponse> {
    let Json(req) = body?;
    let session = state.get(req.session)?;
    let mut guard = session.lock_owned().await;
    let step = continuation(req.c, req.v_c_dir);
    let response = blocking(move || {
        let data = &mut *guard;
        let cfg = data.config.alpha_config()?;
        let index = data.steps.len();
        let (chain, mut solution) =
            solve_step(&step, Some(&data.chain), 0, &cfg).map_err(|error| StepFailure {
                step: Some(index),
                error,
            })?;
        solution.chain = 0;
        let joint = *chain.joints.last().expect("append adds a joint");
        let tail = Chain {
            segments: chain.segments[chain.len() - 2..].to_vec(),
            joints: vec![joint],
        };
        let continuity = crate::chain::verify_continuity(&tail, &ContinuityTolerances::default());
        data.chain = chain;
        data.steps.push(solution);
        Ok(AppendStepResponse {
            solution,
            joint,
            continuity,
            segments: data.chain.len(),
        })
    })
    .await?;
    Ok(Json(response))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsRequest {
    pub step: Step,
    /// Required when `step` continues a session chain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<Uuid>,
    #[serde(default)]
    pub config: SolverOverrides,
}

async fn limits_handler(
    State(state): State<AppState>,
    body: Result<Json<LimitsRequest>, JsonRejection>,
) -> ApiResult<TangentLimits> {
    let Json(req) = body?;
    let chain = match (req.step.start, req.session) {
        (Some(_), _) => None,
        (None, Some(id)) => Some(state.get(id)?.lock_owned().await.chain.clone()),
        (None, None) => {
            return Err(ApiError::bad_request(
                "a continuation step needs a session".into(),
            ))
        }
    };
    let limits = blocking(move || {
        let cfg = req.config.alpha_config()?;
        let problem = step_problem(&req.step, chain.as_ref())?;
        Ok(tangent_length_limits_with(&problem, &cfg)?)
    })
    .await?;
    Ok(Json(limits))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<Uuid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chord_tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleResponse {
    /// One polyline per chain.
    pub polylines: Vec<Vec<[f64; 2]>>,
}

async fn sample_handler(
    State(state): State<AppState>,
    body: Result<Json<SampleRequest>, JsonRejection>,
) -> ApiResult<SampleResponse> {
    let Json(req) = body?;
    let mode = match (req.count, req.chord_tol) {
        (Some(n), None) => SampleMode::Count(n),
        (None, Some(t)) if t > 0.0 => SampleMode::ChordTol(t),
        _ => {
            return Err(ApiError::bad_request(
                "set exactly one of `count` and a positive `chord_tol`".into(),
            ))
        }
    };
    let chains = match (req.session, req.solution) {
        (Some(id), None) => vec![state.get(id)?.lock_owned().await.chain.clone()],
        (None, Some(doc)) => chains_of(&doc)?,
        _ => {
            return Err(ApiError::bad_request(
                "set exactly one of `session` and `solution`".into(),
            ))
        }
    };
    let polylines = blocking(move || {
        let q = QuadratureConfig::default();
        chains
            .iter()
            .map(|c| {
                sample_chain(c, mode, &q)
                    .map(|pts| pts.iter().map(|p| [p.x, p.y]).collect())
                    .map_err(ApiError::from)
            })
            .collect::<Result<Vec<_>, _>>()
    })
    .await?;
    Ok(Json(SampleResponse { polylines }))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/solve", post(solve))
        .route("/solve-step", post(solve_step_handler))
        .route("/append-step", post(append_step_handler))
        .route("/limits", post(limits_handler))
        .route("/sample", post(sample_handler))
        .with_state(state)
}

/// Port from `LAC_PORT`, or the default.
pub fn port_from_env() -> Result<u16, Error> {
    match std::env::var(PORT_VAR) {
        Ok(v) => v.parse().map_err(|_| {
            Error::InvalidInput(format!("{PORT_VAR} must be a port number, got {v:?}"))
        }),
        Err(_) => Ok(DEFAULT_PORT),
    }
}

/// Serves on `127.0.0.1:port` until the process ends.
pub async fn serve(port: u16, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(config))).await
}
