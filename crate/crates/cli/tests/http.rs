use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use colog::service::{router, Service};
use colog_core::decider::decide;
use colog_core::syntax::parse;

const EXAMPLE_ONE: &str = "call x . cex y . (p(x) \\/ ~p(y))";
const EXAMPLE_TWO: &str = "cex y . call x . (p(x) \\/ ~p(y))";
const WALKTHROUGH: &str =
    "(call x . cex y . (p(x) <-> q(y))) -> (call x . (q(x) + ~q(x))) -> call x . (p(x) + ~p(x))";

fn certificate(formula: &str) -> String {
    decide(&parse(formula).unwrap())
        .unwrap()
        .certificate()
        .to_jsonl()
}

struct Client {
    svc: Arc<Service>,
}

impl Client {
    fn new(dir: Option<PathBuf>) -> Self {
        Client {
            svc: Arc::new(Service::new(dir)),
        }
    }

    async fn call(&self, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
        let req = Request::builder()
            .method(method)
            .uri(uri)
            .header("content-type", "application/json");
        let req = req
            .body(body.map_or(Body::empty(), |b| Body::from(b.to_string())))
            .unwrap();
        let resp = router(self.svc.clone()).oneshot(req).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        let v = if bytes.is_empty() {
            Value::Null
        } else {
            serde_json::from_slice(&bytes).unwrap()
        };
        (status, v)
    }

    async fn create(&self, body: Value) -> Value {
        let (status, v) = self.call(Method::POST, "/sessions", Some(body)).await;
        assert_eq!(status, StatusCode::CREATED, "{v}");
        v
    }

    async fn play(&self, id: &str, spec: &str, payload: u64) -> (StatusCode, Value) {
        self.call(
            Method::POST,
            &format!("/sessions/{id}/move"),
            Some(json!({ "spec": spec, "payload": payload })),
        )
        .await
    }
}

fn moves(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|m| m["move"].as_str().unwrap().to_string())
        .collect()
}

#[tokio::test]
async fn example_one_session_is_won_by_the_proof_machine() {
    let c = Client::new(None);
    let s = c
        .create(json!({ "formula": EXAMPLE_ONE, "proof": certificate(EXAMPLE_ONE), "domain": 10 }))
        .await;
    let id = s["id"].as_str().unwrap();
    assert_eq!(s["status"], "open");
    assert_eq!(s["opponent"], "proof-machine");
    assert_eq!(s["legal_moves"].as_array().unwrap().len(), 10);
    assert_eq!(s["tree"]["spec"], "");
    assert_eq!(s["tree"]["mover"], "environment");

    let (status, v) = c.play(id, "", 7).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(moves(&v["replies"]), vec!["⊤7"]);
    assert_eq!(v["position"], "p(7) \\/ ~p(7)");
    assert_eq!(v["status"], "settled");
    assert_eq!(v["winner"], "machine");

    let (status, r) = c
        .call(Method::GET, &format!("/sessions/{id}/result"), None)
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(r["winner"], "machine");
    assert_eq!(moves(&r["run"]), vec!["⊥7", "⊤7"]);
}

#[tokio::test]
async fn walkthrough_session_follows_the_compiled_machine() {
    let c = Client::new(None);
    let s = c
        .create(json!({ "formula": WALKTHROUGH, "proof": certificate(WALKTHROUGH), "domain": 10 }))
        .await;
    let id = s["id"].as_str().unwrap();
    let mut replies = Vec::new();
    for (spec, payload) in [("2.2.", 7), ("1.", 9), ("2.1.", 1)] {
        let (status, v) = c.play(id, spec, payload).await;
        assert_eq!(status, StatusCode::OK, "{v}");
        replies.extend(moves(&v["replies"]));
    }
    assert_eq!(replies, vec!["⊤1.7", "⊤2.1.9", "⊤2.2.1"]);
}

#[tokio::test]
async fn refutation_session_answers_with_a_fresh_constant() {
    let c = Client::new(None);
    let s = c
        .create(json!({
            "formula": EXAMPLE_TWO,
            "refutation": certificate(EXAMPLE_TWO),
            "human_role": "machine",
            "domain": 6,
        }))
        .await;
    let id = s["id"].as_str().unwrap();
    assert!(s["run"].as_array().unwrap().is_empty());
    let (status, v) = c.play(id, "", 5).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(moves(&v["replies"]), vec!["⊥0"]);
}

#[tokio::test]
async fn certificates_for_the_wrong_side_are_rejected() {
    let c = Client::new(None);
    let (status, _) = c
        .call(
            Method::POST,
            "/sessions",
            Some(json!({ "formula": EXAMPLE_ONE, "proof": certificate(EXAMPLE_ONE), "human_role": "machine" })),
        )
        .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = c
        .call(
            Method::POST,
            "/sessions",
            Some(json!({ "formula": EXAMPLE_TWO, "proof": certificate(EXAMPLE_ONE) })),
        )
        .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, v) = c
        .call(Method::POST, "/sessions", Some(json!({ "formula": "p &" })))
        .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["error"].as_str().unwrap().starts_with("formula"));
}

#[tokio::test]
async fn move_errors_have_distinct_statuses() {
    let c = Client::new(None);
    let s = c.create(json!({ "formula": "(p & q) \\/ (p + q)" })).await;
    let id = s["id"].as_str().unwrap();
    // the oracle machine cannot win under the all-false table and stays put
    assert!(s["run"].as_array().unwrap().is_empty());
    assert_eq!(moves(&s["legal_moves"]), vec!["1.1", "1.2"]);

    let (status, _) = c.play(id, "9.", 1).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = c.play(id, "x", 1).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    // the machine's occurrence
    let (status, v) = c.play(id, "2.", 1).await;
    assert_eq!(status, StatusCode::CONFLICT, "{v}");
    // out of range operand
    let (status, _) = c.play(id, "1.", 3).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = c.play("nope", "1.", 1).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = c.call(Method::GET, "/sessions/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, v) = c
        .call(
            Method::POST,
            &format!("/sessions/{id}/move?strict=true"),
            Some(json!({ "spec": "2.", "payload": 1 })),
        )
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "settled");
    assert_eq!(v["winner"], "machine");
    assert_eq!(moves(&v["run"]), vec!["⊥2.1"]);
    let (status, _) = c.play(id, "1.", 1).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn oracle_opponents_use_the_interpretation() {
    let c = Client::new(None);
    let interp = json!({ "domain": 2, "tables": { "p/0": [[[], true]] } });
    let s = c
        .create(json!({ "formula": "p + ~p", "interpretation": interp }))
        .await;
    assert_eq!(moves(&s["run"]), vec!["⊤1"]);
    assert_eq!(s["status"], "settled");
    assert_eq!(s["winner"], "machine");

    // the oracle environment picks the false conjunct
    let interp = json!({ "domain": 2, "tables": { "p/0": [[[], false]] } });
    let s = c
        .create(json!({ "formula": "p & ~p", "human_role": "machine", "interpretation": interp }))
        .await;
    assert_eq!(moves(&s["run"]), vec!["⊥1"]);
    assert_eq!(s["winner"], "environment");
}

#[tokio::test]
async fn pass_settles_and_delete_removes() {
    let c = Client::new(None);
    let s = c.create(json!({ "formula": "p + q" })).await;
    let id = s["id"].as_str().unwrap();
    let (status, v) = c
        .call(Method::POST, &format!("/sessions/{id}/pass"), None)
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "settled");
    assert_eq!(v["winner"], "environment");
    let (status, _) = c
        .call(Method::DELETE, &format!("/sessions/{id}"), None)
        .await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _) = c.call(Method::GET, &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = c
        .call(Method::DELETE, &format!("/sessions/{id}"), None)
        .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn sessions_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let id = {
        let c = Client::new(Some(dir.path().to_path_buf()));
        let s = c
            .create(
                json!({ "formula": WALKTHROUGH, "proof": certificate(WALKTHROUGH), "domain": 10 }),
            )
            .await;
        let id = s["id"].as_str().unwrap().to_string();
        let (status, _) = c.play(&id, "2.2.", 7).await;
        assert_eq!(status, StatusCode::OK);
        id
    };
    assert!(dir.path().join(format!("{id}.json")).exists());

    let c = Client::new(Some(dir.path().to_path_buf()));
    let (status, v) = c.call(Method::GET, &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(moves(&v["run"]), vec!["⊥2.2.7", "⊤1.7"]);
    assert!(v["notes"].as_array().unwrap().is_empty(), "{v}");
    // the restored machine keeps playing
    let (_, v) = c.play(&id, "1.", 9).await;
    assert_eq!(moves(&v["replies"]), vec!["⊤2.1.9"]);

    let c = Client::new(Some(dir.path().to_path_buf()));
    let (_, v) = c.call(Method::GET, &format!("/sessions/{id}"), None).await;
    assert_eq!(moves(&v["run"]), vec!["⊥2.2.7", "⊤1.7", "⊥1.9", "⊤2.1.9"]);
    let (status, _) = c
        .call(Method::DELETE, &format!("/sessions/{id}"), None)
        .await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    assert!(!dir.path().join(format!("{id}.json")).exists());
}
