//! HTTP play sessions: a human plays one side of a formula-game against a
//! strategy compiled from a certificate, or against an oracle player when no
//! certificate is supplied.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path as FsPath, PathBuf};
use std::sync::{Arc, Mutex};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use colog_core::calculus::{
    check_proof, check_refutation, CheckOutcome, Derivation, Proof, Refutation,
};
use colog_core::game::{
    bring_down, GameState, Interpretation, LabMove, MoveToken, Oracle, Player, Valuation,
};
use colog_core::strategy::{compile_environment, compile_machine, ReactiveStrategy, StepOutput};
use colog_core::syntax::{parse, ChoiceKind, Formula, OccurrenceSpec};

/// Budget for the classical checks run on uploaded certificates.
const CHECK_BUDGET: u64 = 200_000;
/// Wake-ups granted to the opponent per human action.
const MAX_QUIESCE: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, message)
    }

    fn conflict(message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, message)
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("no session `{id}`"))
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

fn default_role() -> Player {
    Player::Environment
}

/// Body of `POST /sessions`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NewSession {
    pub formula: String,
    /// JSONL proof; the machine plays its compiled strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof: Option<String>,
    /// JSONL refutation; the environment plays its compiled strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutation: Option<String>,
    #[serde(default = "default_role")]
    pub human_role: Player,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<u64>,
    #[serde(default)]
    pub valuation: Valuation,
    /// Interpretation JSON; all-false over the domain when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<Value>,
}

/// Something the human did, kept so a stored session can be replayed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "lowercase")]
enum Action {
    Move { token: String, strict: bool },
    Pass,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Snapshot {
    id: String,
    /// The request with domain, valuation and interpretation filled in.
    request: NewSession,
    actions: Vec<Action>,
    run: Vec<String>,
}

/// A strategy that plays the oracle's choices under the real interpretation.
#[derive(Clone)]
struct OraclePlayer {
    who: Player,
    interp: Arc<Interpretation>,
    valuation: Valuation,
    position: Formula,
    lost_track: bool,
}

impl ReactiveStrategy for OraclePlayer {
    fn step(&mut self, incoming: &[LabMove]) -> StepOutput {
        for m in incoming {
            match m.token().map(|t| bring_down(&self.position, m.player, t)) {
                Some(Ok(f)) => self.position = f,
                _ => self.lost_track = true,
            }
        }
        if self.lost_track {
            return StepOutput::wait();
        }
        let mut oracle = Oracle::new(&self.interp);
        let choice = match self.who {
            Player::Machine => oracle.choose(&self.position, &self.valuation),
            Player::Environment => {
                let here = GameState::new(
                    self.position.clone(),
                    self.interp.clone(),
                    self.valuation.clone(),
                );
                here.map(|s| s.legal_moves(Player::Environment))
                    .unwrap_or_default()
                    .into_iter()
                    .find(|t| {
                        let next =
                            bring_down(&self.position, Player::Environment, t).expect("legal");
                        !oracle.winnable(&next, &self.valuation)
                    })
            }
        };
        match choice {
            Some(t) => {
                self.position =
                    bring_down(&self.position, self.who, &t).expect("oracle moves are legal");
                StepOutput::play(t)
            }
            None => StepOutput::wait(),
        }
    }

    fn name(&self) -> String {
        format!("oracle-{}", self.who)
    }

    fn clone_box(&self) -> Box<dyn ReactiveStrategy> {
        Box::new(self.clone())
    }
}

struct Session {
    id: String,
    request: NewSession,
    start: GameState,
    state: GameState,
    run: Vec<LabMove>,
    actions: Vec<Action>,
    opponent: Option<Box<dyn ReactiveStrategy>>,
    opponent_name: String,
    settled: bool,
    notes: Vec<String>,
}

fn load_certificate(text: &str, what: &str) -> Result<Derivation, ApiError> {
    Derivation::from_jsonl(text).map_err(|e| ApiError::unprocessable(format!("{what}: {e}")))
}

fn require_checked(outcome: CheckOutcome, what: &str) -> Result<(), ApiError> {
    match outcome {
        CheckOutcome::Ok => Ok(()),
        CheckOutcome::Failure { step, reason } => Err(ApiError::unprocessable(format!(
            "{what} rejected at step {step}: {reason}"
        ))),
        CheckOutcome::StabilityUnverified(steps) => Err(ApiError::unprocessable(format!(
            "{what}: classical validity unsettled at steps {steps:?}"
        ))),
    }
}

impl Session {
    /// Resolves the request and compiles the opponent. Nothing is played yet.
    fn build(id: String, mut req: NewSession) -> Result<Session, ApiError> {
        let formula =
            parse(&req.formula).map_err(|e| ApiError::unprocessable(format!("formula: {e}")))?;
        let human = req.human_role;
        let mut notes = Vec::new();

        let mut environment = None;
        if let Some(text) = &req.refutation {
            if human != Player::Machine {
                return Err(ApiError::unprocessable(
                    "a refutation drives the environment; human_role must be machine",
                ));
            }
            let r = Refutation(load_certificate(text, "refutation")?);
            if r.conclusion() != Some(&formula) {
                return Err(ApiError::unprocessable(
                    "refutation does not end in the session formula",
                ));
            }
            require_checked(check_refutation(&r, CHECK_BUDGET), "refutation")?;
            let env =
                compile_environment(&r).map_err(|e| ApiError::unprocessable(e.to_string()))?;
            if env.initial_valuation() != &req.valuation {
                if !req.valuation.is_empty() {
                    notes.push(
                        "valuation replaced by the refutation's distinctive valuation".to_string(),
                    );
                }
                req.valuation = env.initial_valuation().clone();
            }
            environment = Some(env);
        }

        let interp = match &req.interpretation {
            Some(v) => {
                let i = Interpretation::from_json(v)
                    .map_err(|e| ApiError::unprocessable(e.to_string()))?;
                if req.domain.is_some_and(|d| d != i.domain()) {
                    return Err(ApiError::unprocessable(
                        "domain disagrees with the interpretation",
                    ));
                }
                i
            }
            None => {
                let top = formula
                    .constants()
                    .into_iter()
                    .chain(req.valuation.values())
                    .max()
                    .unwrap_or(0);
                let d = req.domain.unwrap_or((top + 1).max(3));
                if d == 0 {
                    return Err(ApiError::unprocessable("domain must be positive"));
                }
                Interpretation::uniform(&formula.signature(), d, false)
            }
        };
        req.domain = Some(interp.domain());
        req.interpretation = Some(interp.to_json());
        let start = GameState::new(formula.clone(), interp, req.valuation.clone())
            .map_err(|e| ApiError::unprocessable(e.to_string()))?;

        let opponent: Box<dyn ReactiveStrategy> = match (human, &req.proof, environment) {
            (Player::Environment, Some(text), _) => {
                let p = Proof(load_certificate(text, "proof")?);
                if p.conclusion() != Some(&formula) {
                    return Err(ApiError::unprocessable(
                        "proof does not end in the session formula",
                    ));
                }
                require_checked(check_proof(&p, CHECK_BUDGET), "proof")?;
                Box::new(
                    compile_machine(&p, &req.valuation)
                        .map_err(|e| ApiError::unprocessable(e.to_string()))?,
                )
            }
            (Player::Machine, Some(_), _) => {
                return Err(ApiError::unprocessable(
                    "a proof drives the machine; human_role must be environment",
                ))
            }
            (_, None, Some(env)) => Box::new(env),
            (who, None, None) => Box::new(OraclePlayer {
                who: who.adversary(),
                interp: start.shared_interpretation(),
                valuation: req.valuation.clone(),
                position: formula.clone(),
                lost_track: false,
            }),
        };
        let opponent_name = opponent.name();
        Ok(Session {
            id,
            request: req,
            state: start.clone(),
            start,
            run: Vec::new(),
            actions: Vec::new(),
            opponent: Some(opponent),
            opponent_name,
            settled: false,
            notes,
        })
    }

    fn human(&self) -> Player {
        self.request.human_role
    }

    /// Lets the opponent move until it grants permission. A move outside the
    /// legal set is never played; the opponent is retired instead.
    fn quiesce(&mut self, incoming: Vec<LabMove>) -> Vec<LabMove> {
        let role = self.human().adversary();
        let mut made = Vec::new();
        let Some(opponent) = self.opponent.as_mut() else {
            return made;
        };
        let mut incoming = incoming;
        for _ in 0..MAX_QUIESCE {
            let out = opponent.step(&std::mem::take(&mut incoming));
            let moved = !out.moves.is_empty();
            for t in out.moves {
                let m = LabMove::new(role, t);
                match self.state.apply_move(&m) {
                    Ok(next) => {
                        self.state = next;
                        self.run.push(m.clone());
                        made.push(m);
                    }
                    Err(_) => {
                        self.notes.push(format!(
                            "{} proposed illegal move {m}; it stops playing",
                            self.opponent_name
                        ));
                        self.opponent = None;
                        return made;
                    }
                }
            }
            if !moved && out.waiting {
                break;
            }
        }
        self.settle_if_stuck();
        made
    }

    fn settle_if_stuck(&mut self) {
        if self.state.legal_moves(Player::Machine).is_empty()
            && self.state.legal_moves(Player::Environment).is_empty()
        {
            self.settled = true;
        }
    }

    fn open(&mut self) {
        self.quiesce(Vec::new());
    }

    fn human_move(
        &mut self,
        spec: &str,
        payload: u64,
        strict: bool,
    ) -> Result<Vec<LabMove>, ApiError> {
        if self.settled {
            return Err(ApiError::conflict("session is settled"));
        }
        let spec: OccurrenceSpec = spec
            .parse()
            .map_err(|e| ApiError::unprocessable(format!("spec: {e}")))?;
        if self
            .state
            .formula()
            .resolve(&spec)
            .and_then(ChoiceKind::of)
            .is_none()
        {
            return Err(ApiError::unprocessable(format!(
                "`{spec}` does not address a choice occurrence of {}",
                self.state.formula()
            )));
        }
        let m = LabMove::new(self.human(), MoveToken::new(spec, payload));
        let token = m.token().expect("token").to_string();
        let Ok(next) = self.state.apply_move(&m) else {
            if !strict {
                return Err(ApiError::conflict(format!("{m} is not legal here")));
            }
            // recorded, and it loses the game for the human
            self.run.push(m);
            self.actions.push(Action::Move { token, strict });
            self.settled = true;
            return Ok(Vec::new());
        };
        self.state = next;
        self.run.push(m.clone());
        self.actions.push(Action::Move { token, strict });
        Ok(self.quiesce(vec![m]))
    }

    /// The human grants permission; if the opponent has nothing more to do
    /// the game is over.
    fn pass(&mut self) -> Result<Vec<LabMove>, ApiError> {
        if self.settled {
            return Err(ApiError::conflict("session is settled"));
        }
        self.actions.push(Action::Pass);
        let made = self.quiesce(Vec::new());
        if made.is_empty() {
            self.settled = true;
        }
        Ok(made)
    }

    fn replay(&mut self, action: &Action) -> Result<(), ApiError> {
        match action {
            Action::Move { token, strict } => {
                let t: MoveToken = token
                    .parse()
                    .map_err(|e| ApiError::internal(format!("stored move: {e}")))?;
                self.human_move(&t.spec.to_string(), t.payload, *strict)
                    .map(|_| ())
            }
            Action::Pass => self.pass().map(|_| ()),
        }
    }

    fn restore(snapshot: Snapshot) -> Result<Session, ApiError> {
        let mut s = Session::build(snapshot.id, snapshot.request)?;
        s.open();
        let replayed = snapshot.actions.iter().try_for_each(|a| s.replay(a));
        let recorded: Vec<LabMove> = snapshot
            .run
            .iter()
            .map(|m| m.parse())
            .collect::<Result<_, _>>()
            .map_err(|e| ApiError::internal(format!("stored run: {e}")))?;
        if replayed.is_err() || s.run != recorded {
            // keep the recorded run; the opponent cannot be trusted to continue it
            s.notes
                .push("replay diverged from the stored run; opponent retired".to_string());
            s.opponent = None;
            s.state = s.start.after(&recorded).unwrap_or_else(|i| {
                s.settled = true;
                s.start
                    .after(&recorded[..i])
                    .expect("prefix before the first illegal move")
            });
            s.run = recorded;
            s.actions = snapshot.actions;
        }
        Ok(s)
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            id: self.id.clone(),
            request: self.request.clone(),
            actions: self.actions.clone(),
            run: self.run.iter().map(ToString::to_string).collect(),
        }
    }

    fn winner(&self) -> Player {
        self.start.wn_run(&self.run)
    }

    fn view(&self) -> Value {
        let legal: Vec<Value> = if self.settled {
            Vec::new()
        } else {
            self.state
                .legal_moves(self.human())
                .iter()
                .map(token_json)
                .collect()
        };
        json!({
            "id": self.id,
            "formula": self.start.formula().to_string(),
            "position": self.state.formula().to_string(),
            "tree": tree(self.state.formula(), Some(OccurrenceSpec::root()), true),
            "human_role": self.human(),
            "opponent": self.opponent.as_ref().map(|_| self.opponent_name.clone()),
            "domain": self.start.domain(),
            "valuation": self.start.valuation(),
            "run": self.run.iter().map(move_json).collect::<Vec<_>>(),
            "legal_moves": legal,
            "status": if self.settled { "settled" } else { "open" },
            "winner": self.settled.then(|| self.winner()),
            "winning_now": self.state.wn_empty(),
            "notes": self.notes,
        })
    }
}

fn token_json(t: &MoveToken) -> Value {
    json!({ "spec": t.spec.to_string(), "payload": t.payload, "move": t.to_string() })
}

fn move_json(m: &LabMove) -> Value {
    match m.token() {
        Some(t) => {
            json!({ "player": m.player, "spec": t.spec.to_string(), "payload": t.payload, "move": m.to_string() })
        }
        None => json!({ "player": m.player, "move": m.to_string() }),
    }
}

/// The formula as a tree. Nodes a move can address carry their occurrence
/// spec; choice nodes on the surface also say who moves there.
fn tree(f: &Formula, spec: Option<OccurrenceSpec>, positive: bool) -> Value {
    // (subformula, its spec if addressable, positive occurrence)
    type Child<'a> = (&'a Formula, Option<OccurrenceSpec>, bool);
    let (kind, children): (&str, Vec<Child>) = match f {
        Formula::Atom(_) => ("atom", vec![]),
        Formula::Top => ("top", vec![]),
        Formula::Bot => ("bottom", vec![]),
        Formula::Not(g) => ("not", vec![(g.as_ref(), spec.clone(), !positive)]),
        Formula::Forall(_, g) => ("forall", vec![(g.as_ref(), spec.clone(), positive)]),
        Formula::Exists(_, g) => ("exists", vec![(g.as_ref(), spec.clone(), positive)]),
        Formula::And(gs) | Formula::Or(gs) => (
            if matches!(f, Formula::And(_)) {
                "and"
            } else {
                "or"
            },
            gs.iter()
                .enumerate()
                .map(|(i, g)| (g, spec.as_ref().map(|s| s.child(i + 1)), positive))
                .collect(),
        ),
        Formula::Implies(a, b) => (
            "implies",
            vec![
                (a.as_ref(), spec.as_ref().map(|s| s.child(1)), !positive),
                (b.as_ref(), spec.as_ref().map(|s| s.child(2)), positive),
            ],
        ),
        Formula::ChoAnd(gs) => (
            "choice-and",
            gs.iter().map(|g| (g, None, positive)).collect(),
        ),
        Formula::ChoOr(gs) => (
            "choice-or",
            gs.iter().map(|g| (g, None, positive)).collect(),
        ),
        Formula::ChoAll(_, g) => ("choice-all", vec![(g.as_ref(), None, positive)]),
        Formula::ChoEx(_, g) => ("choice-exists", vec![(g.as_ref(), None, positive)]),
    };
    let mut node = json!({ "text": f.to_string(), "kind": kind });
    if let Some(s) = &spec {
        node["spec"] = json!(s.to_string());
        if let Some(k) = ChoiceKind::of(f) {
            let env = k.is_conjunctive() == positive;
            node["mover"] = json!(if env {
                Player::Environment
            } else {
                Player::Machine
            });
        }
    }
    if !children.is_empty() {
        node["children"] = children
            .into_iter()
            .map(|(g, s, p)| tree(g, s, p))
            .collect();
    }
    node
}

/// Session store, optionally backed by a directory of JSON snapshots.
pub struct Service {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    data_dir: Option<PathBuf>,
}

impl Service {
    pub fn new(data_dir: Option<PathBuf>) -> Self {
        Service {
            sessions: Mutex::new(HashMap::new()),
            data_dir,
        }
    }

    /// Uses `COLOG_DATA_DIR` for persistence when set.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os("COLOG_DATA_DIR").map(PathBuf::from))
    }

    fn path(&self, id: &str) -> Option<PathBuf> {
        self.data_dir.as_ref().map(|d| d.join(format!("{id}.json")))
    }

    fn persist(&self, s: &Session) -> Result<(), ApiError> {
        let Some(path) = self.path(&s.id) else {
            return Ok(());
        };
        let write = || -> std::io::Result<()> {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            let tmp = path.with_extension("json.tmp");
            std::fs::write(&tmp, serde_json::to_vec_pretty(&s.snapshot())?)?;
            std::fs::rename(tmp, &path)
        };
        write().map_err(|e| ApiError::internal(format!("persisting session: {e}")))
    }

    pub fn create(&self, req: NewSession) -> Result<Value, ApiError> {
        let id = format!("{:016x}", rand::random::<u64>());
        let mut s = Session::build(id.clone(), req)?;
        s.open();
        self.persist(&s)?;
        let view = s.view();
        self.sessions
            .lock()
            .expect("session table")
            .insert(id, Arc::new(Mutex::new(s)));
        Ok(view)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        if let Some(s) = self.sessions.lock().expect("session table").get(id) {
            return Ok(s.clone());
        }
        if !id.bytes().all(|b| b.is_ascii_alphanumeric()) {
            return Err(ApiError::not_found(id));
        }
        let Some(path) = self.path(id).filter(|p| p.exists()) else {
            return Err(ApiError::not_found(id));
        };
        let snapshot = read_snapshot(&path)?;
        let s = Arc::new(Mutex::new(Session::restore(snapshot)?));
        let mut table = self.sessions.lock().expect("session table");
        Ok(table.entry(id.to_string()).or_insert(s).clone())
    }

    /// Runs `f` on the session and persists it afterwards.
    fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<T, ApiError>,
    ) -> Result<T, ApiError> {
        let s = self.session(id)?;
        let mut s = s.lock().expect("session lock");
        let out = f(&mut s)?;
        self.persist(&s)?;
        Ok(out)
    }

    pub fn view(&self, id: &str) -> Result<Value, ApiError> {
        let s = self.session(id)?;
        let s = s.lock().expect("session lock");
        Ok(s.view())
    }

    pub fn play(
        &self,
        id: &str,
        spec: &str,
        payload: u64,
        strict: bool,
    ) -> Result<Value, ApiError> {
        self.with_session(id, |s| {
            let replies = s.human_move(spec, payload, strict)?;
            let mut v = s.view();
            v["replies"] = replies.iter().map(move_json).collect();
            Ok(v)
        })
    }

    pub fn pass(&self, id: &str) -> Result<Value, ApiError> {
        self.with_session(id, |s| {
            let replies = s.pass()?;
            let mut v = s.view();
            v["replies"] = replies.iter().map(move_json).collect();
            Ok(v)
        })
    }

    pub fn result(&self, id: &str) -> Result<Value, ApiError> {
        let s = self.session(id)?;
        let s = s.lock().expect("session lock");
        Ok(json!({
            "id": s.id,
            "status": if s.settled { "settled" } else { "open" },
            "winner": s.winner(),
            "run": s.run.iter().map(move_json).collect::<Vec<_>>(),
            "position": s.state.formula().to_string(),
        }))
    }

    pub fn delete(&self, id: &str) -> Result<(), ApiError> {
        let removed = self
            .sessions
            .lock()
            .expect("session table")
            .remove(id)
            .is_some();
        let on_disk = self
            .path(id)
            .filter(|p| p.exists() && id.bytes().all(|b| b.is_ascii_alphanumeric()));
        match (removed, on_disk) {
            (_, Some(p)) => std::fs::remove_file(p).map_err(|e| ApiError::internal(e.to_string())),
            (true, None) => Ok(()),
            (false, None) => Err(ApiError::not_found(id)),
        }
    }
}

fn read_snapshot(path: &FsPath) -> Result<Snapshot, ApiError> {
    let bytes = std::fs::read(path).map_err(|e| ApiError::internal(e.to_string()))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| ApiError::internal(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
struct MoveBody {
    spec: String,
    payload: u64,
}

#[derive(Deserialize)]
struct MoveQuery {
    #[serde(default)]
    strict: bool,
}

type Shared = State<Arc<Service>>;

async fn create(
    State(svc): Shared,
    Json(req): Json<NewSession>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    svc.create(req).map(|v| (StatusCode::CREATED, Json(v)))
}

async fn show(State(svc): Shared, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    svc.view(&id).map(Json)
}

async fn play_move(
    State(svc): Shared,
    Path(id): Path<String>,
    Query(q): Query<MoveQuery>,
    Json(body): Json<MoveBody>,
) -> Result<Json<Value>, ApiError> {
    svc.play(&id, &body.spec, body.payload, q.strict).map(Json)
}

async fn pass(State(svc): Shared, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    svc.pass(&id).map(Json)
}

async fn result(State(svc): Shared, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    svc.result(&id).map(Json)
}

async fn remove(State(svc): Shared, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    svc.delete(&id).map(|_| StatusCode::NO_CONTENT)
}

pub fn router(svc: Arc<Service>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/:id", get(show).delete(remove))
        .route("/sessions/:id/move", post(play_move))
        .route("/sessions/:id/pass", post(pass))
        .route("/sessions/:id/result", get(result))
        .with_state(svc)
}

pub async fn serve(addr: SocketAddr, svc: Arc<Service>) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(svc)).await?;
    Ok(())
}
