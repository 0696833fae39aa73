use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use colog::service::{self, NewSession, Service};
use colog_core::calculus::{
    check_proof, check_refutation, CheckOutcome, Derivation, Proof, Refutation,
};
use colog_core::decider::{decide, decide_corpus, Verdict};
use colog_core::game::{
    parse_run, static_violations, GameState, Interpretation, MoveToken, Player, Run, Valuation,
};
use colog_core::strategy::{
    compile_environment, compile_machine, completeness_suite, run_match, soundness_suite,
    BatteryConfig, ReactiveStrategy, ScriptedPlayer,
};
use colog_core::syntax::{parse, Formula, Var};

#[derive(Parser)]
#[command(
    name = "colog",
    version,
    about = "Computability-logic workbench for CL2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a formula and emit its proof or refutation.
    Prove {
        formula: String,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print a single JSON object.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
    },
    /// Check a proof certificate.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
    },
    /// Check a refutation certificate.
    RefuteCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
    },
    /// Whether the machine can win the game under an interpretation.
    Oracle {
        formula: String,
        #[arg(long)]
        interp: PathBuf,
        /// Valuation entry `x=3`; repeatable.
        #[arg(long = "val", value_parser = parse_binding)]
        val: Vec<(Var, u64)>,
    },
    /// Open one play session and serve it over HTTP.
    Play {
        formula: String,
        #[arg(long)]
        proof: Option<PathBuf>,
        #[arg(long)]
        refutation: Option<PathBuf>,
        /// Side the human plays.
        #[arg(long, default_value = "environment")]
        human: String,
        #[arg(long)]
        domain: Option<u64>,
        #[arg(long)]
        interp: Option<PathBuf>,
        #[arg(long = "val", value_parser = parse_binding)]
        val: Vec<(Var, u64)>,
        #[arg(long, default_value = "127.0.0.1:8080")]
        serve: SocketAddr,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Snapshot directory; defaults to COLOG_DATA_DIR.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
    /// Play a proof's machine against a scripted or refutation-driven environment.
    Match {
        #[arg(long)]
        proof: PathBuf,
        /// A run such as `E:2.2.7,E:1.9`, a file holding one, or a refutation file.
        #[arg(long)]
        env: String,
        #[arg(long)]
        interp: Option<PathBuf>,
        #[arg(long)]
        domain: Option<u64>,
        #[arg(long = "val", value_parser = parse_binding)]
        val: Vec<(Var, u64)>,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
    },
    /// Decide a corpus and exercise every certificate's strategy.
    Battery {
        /// Directory of `.txt` corpus files, or a single file.
        #[arg(long)]
        corpus: PathBuf,
        /// Machine battery configuration (JSON).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Soundness domains are 1..=max-domain.
        #[arg(long, default_value_t = 3)]
        max_domain: u64,
        /// Tables per domain when there are too many to enumerate.
        #[arg(long, default_value_t = 50)]
        tables: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
    },
    /// Sample runs and check that the game is static.
    DelayTest {
        formula: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        domain: u64,
        #[arg(long)]
        interp: Option<PathBuf>,
        #[arg(long = "val", value_parser = parse_binding)]
        val: Vec<(Var, u64)>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_binding(s: &str) -> Result<(Var, u64), String> {
    let (x, c) = s.split_once('=').ok_or("expected x=c")?;
    let c = c
        .trim()
        .parse()
        .map_err(|_| format!("bad constant in `{s}`"))?;
    Ok((Var::new(x.trim()), c))
}

fn valuation(bindings: Vec<(Var, u64)>) -> Valuation {
    let mut v = Valuation::new();
    for (x, c) in bindings {
        v.insert(x, c);
    }
    v
}

fn formula(text: &str) -> Result<Formula> {
    parse(text).map_err(|e| anyhow!("formula: {e}"))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn certificate(path: &Path) -> Result<Derivation> {
    Derivation::from_jsonl(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn interpretation(path: &Path) -> Result<Interpretation> {
    let v: Value = serde_json::from_str(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    Interpretation::from_json(&v).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn outcome_json(o: &CheckOutcome) -> Value {
    match o {
        CheckOutcome::Ok => json!("ok"),
        CheckOutcome::Failure { step, reason } => {
            json!({ "failure": { "step": step, "reason": reason.to_string() } })
        }
        CheckOutcome::StabilityUnverified(steps) => json!({ "stability_unverified": steps }),
    }
}

/// Prints the outcome; a failure becomes an error.
fn report_check(o: CheckOutcome) -> Result<()> {
    match o {
        CheckOutcome::Ok => {
            println!("ok");
            Ok(())
        }
        CheckOutcome::StabilityUnverified(steps) => {
            println!("structurally ok; classical validity unsettled at steps {steps:?}");
            Ok(())
        }
        CheckOutcome::Failure { step, reason } => bail!("step {step}: {reason}"),
    }
}

fn prove(text: &str, out: Option<PathBuf>, as_json: bool, budget: u64) -> Result<()> {
    let f = formula(text)?;
    let verdict = decide(&f)?;
    let check = verdict.check(budget);
    let cert = verdict.certificate();
    if let Some(path) = &out {
        std::fs::write(path, cert.to_jsonl())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if as_json {
        let mut v = json!({
            "formula": f.to_string(),
            "verdict": verdict.to_string(),
            "steps": cert.len(),
            "check": outcome_json(&check),
        });
        if out.is_none() {
            v["certificate"] = cert.steps().iter().map(|s| s.to_json()).collect();
        }
        println!("{v}");
    } else {
        println!("{verdict}");
        println!("steps: {}", cert.len());
        println!("check: {}", outcome_json(&check));
        match &out {
            Some(p) => println!("certificate: {}", p.display()),
            None => print!("{}", cert.to_jsonl()),
        }
    }
    if let CheckOutcome::Failure { step, reason } = check {
        bail!("generated certificate fails at step {step}: {reason}");
    }
    Ok(())
}

/// An environment script: labelled run (`E:1.2`, `⊥1.2`) or bare tokens.
fn script(text: &str) -> Result<Vec<MoveToken>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if let Ok(run) = parse_run(text) {
        return run
            .into_iter()
            .map(|m| match m.token() {
                Some(t) if m.player == Player::Environment => Ok(t.clone()),
                _ => Err(anyhow!("script move {m} is not an environment token")),
            })
            .collect();
    }
    text.split(',')
        .map(|t| t.trim().parse().map_err(|e| anyhow!("script: {e}")))
        .collect()
}

fn play_match(
    proof: &Path,
    env: &str,
    interp: Option<PathBuf>,
    domain: Option<u64>,
    val: Valuation,
    max_steps: usize,
) -> Result<()> {
    let p = Proof(certificate(proof)?);
    let f = p
        .conclusion()
        .cloned()
        .ok_or_else(|| anyhow!("empty proof"))?;
    if let CheckOutcome::Failure { step, reason } = check_proof(&p, 200_000) {
        bail!("proof rejected at step {step}: {reason}");
    }
    let env_path = Path::new(env);
    let mut valuation = val;
    let mut environment: Box<dyn ReactiveStrategy> = if env_path.is_file() {
        let text = read(env_path)?;
        match Derivation::from_jsonl(&text) {
            Ok(d) if !text.trim().is_empty() => {
                let r = Refutation(d);
                if r.conclusion() != Some(&f) {
                    bail!("refutation and proof conclude different formulas");
                }
                let e = compile_environment(&r)?;
                valuation = e.initial_valuation().clone();
                Box::new(e)
            }
            _ => Box::new(ScriptedPlayer::new(Player::Environment, script(&text)?)),
        }
    } else {
        Box::new(ScriptedPlayer::new(Player::Environment, script(env)?))
    };
    let interp = match (interp, domain) {
        (Some(path), _) => interpretation(&path)?,
        (None, d) => {
            let top = f
                .constants()
                .into_iter()
                .chain(valuation.values())
                .max()
                .unwrap_or(0);
            Interpretation::uniform(&f.signature(), d.unwrap_or(top + 2), false)
        }
    };
    let mut machine = compile_machine(&p, &valuation)?;
    let state = GameState::new(f.clone(), interp, valuation.clone())?;
    let r = run_match(&mut machine, environment.as_mut(), &state, max_steps)?;
    println!(
        "{}",
        json!({
            "formula": f.to_string(),
            "environment": environment.name(),
            "valuation": valuation,
            "run": r.run.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "settled": r.settled,
            "illegal": r.illegal,
            "final": r.final_formula.to_string(),
            "winner": r.winner,
        })
    );
    Ok(())
}

fn corpus_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)
        .with_context(|| format!("reading {}", path.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    Ok(files)
}

fn battery(
    corpus: &Path,
    config: Option<PathBuf>,
    max_domain: u64,
    tables: usize,
    seed: u64,
    budget: u64,
) -> Result<bool> {
    let config: BatteryConfig = match config {
        Some(p) => {
            serde_json::from_str(&read(&p)?).with_context(|| format!("parsing {}", p.display()))?
        }
        None => BatteryConfig::default(),
    };
    let (mut total, mut failed) = (0, 0);
    for file in corpus_files(corpus)? {
        for entry in decide_corpus(&read(&file)?, budget) {
            total += 1;
            let at = format!("{}:{}", file.display(), entry.line);
            let line = match &entry.outcome {
                Err(e) => Err(e.clone()),
                Ok(_) if !entry.passed() => Err("verdict or certificate check wrong".to_string()),
                Ok(r) => match &r.verdict {
                    Verdict::Provable(p) => {
                        match soundness_suite(p, 1..=max_domain, 9, tables, seed) {
                            Ok(rep) if rep.losses.is_empty() => Ok(format!(
                                "provable, machine won {} games over {} runs",
                                rep.games, rep.runs
                            )),
                            Ok(rep) => Err(format!("machine lost: {}", rep.losses[0])),
                            Err(e) => Err(e.to_string()),
                        }
                    }
                    Verdict::Unprovable(rf) => match completeness_suite(rf, &config) {
                        Ok(rep) if rep.failures.is_empty() => Ok(format!(
                            "unprovable, environment beat {}/{} machines",
                            rep.defeated, rep.machines
                        )),
                        Ok(rep) => Err(format!("environment failed: {}", rep.failures[0])),
                        Err(e) => Err(e.to_string()),
                    },
                },
            };
            match line {
                Ok(msg) => println!("ok    {at}  {}  -- {msg}", entry.text),
                Err(msg) => {
                    failed += 1;
                    println!("FAIL  {at}  {}  -- {msg}", entry.text)
                }
            }
        }
    }
    println!("{total} formulas, {failed} failures");
    Ok(failed == 0)
}

fn delay_test(
    text: &str,
    samples: usize,
    domain: u64,
    interp: Option<PathBuf>,
    val: Valuation,
    seed: u64,
) -> Result<bool> {
    let f = formula(text)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let interp = match interp {
        Some(p) => interpretation(&p)?,
        None => Interpretation::random(&f.signature(), domain, &mut rng),
    };
    let state = GameState::new(f, interp, val)?;
    let violations = static_violations(&state, samples, &mut rng);
    let show = |r: &Run| r.iter().map(ToString::to_string).collect::<Vec<_>>();
    println!(
        "{}",
        json!({
            "samples": samples,
            "violations": violations.len(),
            "example": violations.first().map(|(a, b)| json!({ "run": show(a), "delay": show(b) })),
        })
    );
    Ok(violations.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Prove {
            formula,
            out,
            json,
            budget,
        } => prove(&formula, out, json, budget)?,
        Command::Check { file, budget } => {
            report_check(check_proof(&Proof(certificate(&file)?), budget))?
        }
        Command::RefuteCheck { file, budget } => {
            report_check(check_refutation(&Refutation(certificate(&file)?), budget))?
        }
        Command::Oracle {
            formula: text,
            interp,
            val,
        } => {
            let state = GameState::new(formula(&text)?, interpretation(&interp)?, valuation(val))?;
            println!("winnable: {}", state.winnable());
        }
        Command::Play {
            formula: text,
            proof,
            refutation,
            human,
            domain,
            interp,
            val,
            serve,
        } => {
            let req = NewSession {
                formula: text,
                proof: proof.as_deref().map(read).transpose()?,
                refutation: refutation.as_deref().map(read).transpose()?,
                human_role: human.parse()?,
                domain,
                valuation: valuation(val),
                interpretation: interp
                    .as_deref()
                    .map(|p| interpretation(p).map(|i| i.to_json()))
                    .transpose()?,
            };
            let svc = Arc::new(Service::from_env());
            let view = svc.create(req).map_err(|e| anyhow!(e.message))?;
            println!(
                "{}",
                json!({ "session": view["id"], "url": format!("http://{serve}/sessions/{}", view["id"].as_str().unwrap_or_default()) })
            );
            tokio_main(serve, svc)?;
        }
        Command::Serve { addr, data_dir } => {
            let svc = match data_dir {
                Some(d) => Service::new(Some(d)),
                None => Service::from_env(),
            };
            tokio_main(addr, Arc::new(svc))?;
        }
        Command::Match {
            proof,
            env,
            interp,
            domain,
            val,
            max_steps,
        } => play_match(&proof, &env, interp, domain, valuation(val), max_steps)?,
        Command::Battery {
            corpus,
            config,
            max_domain,
            tables,
            seed,
            budget,
        } => return battery(&corpus, config, max_domain, tables, seed, budget),
        Command::DelayTest {
            formula,
            samples,
            domain,
            interp,
            val,
            seed,
        } => return delay_test(&formula, samples, domain, interp, valuation(val), seed),
    }
    Ok(true)
}

fn tokio_main(addr: SocketAddr, svc: Arc<Service>) -> Result<()> {
    tokio::runtime::Runtime::new()?.block_on(service::serve(addr, svc))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({ "error": format!("{e:#}") }));
            ExitCode::from(2)
        }
    }
}
