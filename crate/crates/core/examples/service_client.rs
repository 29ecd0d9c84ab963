// Talks to the HTTP service in process: opens a session, appends a step and
// samples the result.

use axum::body::Body;
use axum::http::{Request, StatusCode};
use log_aesthetic::io::service::{router, AppState, ServiceConfig};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn post(
    app: &axum::Router,
    path: &str,
    body: Value,
) -> Result<(StatusCode, Value), Box<dyn std::error::Error>> {
    let req = Request::post(path)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))?;
    let resp = app.clone().oneshot(req).await?;
    let status = resp.status();
    let bytes = axum::body::to_bytes(resp.into_body(), usize::MAX).await?;
    Ok((status, serde_json::from_slice(&bytes)?))
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rt = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()?;
    rt.block_on(async {
        let app = router(AppState::new(ServiceConfig::default()));
        let step =
            json!({"a": [0, 0], "c": [4, 1], "v_a": [1, 1], "v_c_dir": [1, -0.3], "alpha": -0.7});
        let (status, body) =
            post(&app, "/solve-step", json!({"step": step, "session": true})).await?;
        println!("solve-step {status}: lambda {}", body["solution"]["lambda"]);
        let session = body["session"].clone();
        let (status, body) = post(
            &app,
            "/append-step",
            json!({"session": session, "c": [7, -1], "v_c_dir": [1, 0.3]}),
        )
        .await?;
        println!(
            "append-step {status}: continuity pass {}",
            body["continuity"]["pass"]
        );
        let (status, body) = post(&app, "/sample", json!({"session": session, "count": 8})).await?;
        println!(
            "sample {status}: {} points",
            body["polylines"][0].as_array().map_or(0, Vec::len)
        );
        Ok(())
    })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
