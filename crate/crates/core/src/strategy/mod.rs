//! Strategies compiled from certificates, heuristic opponents, and the
//! scheduler that plays them against each other.

mod battery;
mod counter;
mod environment;
mod machine;
mod search;
mod suite;

use std::collections::HashMap;

use thiserror::Error;

use crate::calculus::{Derivation, Step};
use crate::game::{fold_run, GameState, LabMove, Move, MoveToken, Player, Run};
use crate::syntax::Formula;

pub use battery::{
    BatteryConfig, Copycat, GreedyMachine, MachineKind, RandomMachine, ScriptedPlayer, Silent,
};
pub use counter::{counter_certificate, CounterCertificate};
pub use environment::{compile_environment, EnvironmentStrategy};
pub use machine::{compile_machine, MachineStrategy};
pub use search::{adversary_runs, machine_never_loses, SearchStats};
pub use suite::{
    completeness_suite, soundness_suite, tables_for, valuations, CompletenessReport,
    SoundnessReport,
};

/// What a strategy does when woken up.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepOutput {
    pub moves: Vec<MoveToken>,
    /// Granting permission: nothing more to do until the adversary moves.
    pub waiting: bool,
}

impl StepOutput {
    pub fn wait() -> Self {
        StepOutput {
            moves: Vec::new(),
            waiting: true,
        }
    }

    pub fn play(t: MoveToken) -> Self {
        StepOutput {
            moves: vec![t],
            waiting: false,
        }
    }
}

/// A player reacting to the adversary's moves. Each call to `step` delivers
/// the adversary moves made since the previous call.
pub trait ReactiveStrategy: Send {
    fn step(&mut self, incoming: &[LabMove]) -> StepOutput;

    fn name(&self) -> String;

    fn clone_box(&self) -> Box<dyn ReactiveStrategy>;
}

impl Clone for Box<dyn ReactiveStrategy> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("certificate does not derive the formula {0}")]
    NotDerived(String),
    #[error("machine emitted {0} moves in one step")]
    TooManyMoves(usize),
    #[error("{0}")]
    Certificate(String),
    #[error("counter-certificate failed: {0}")]
    Counter(String),
}

/// A run played without adjudication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Played {
    pub run: Run,
    /// Index of the first illegal move, if any; play stops there.
    pub illegal: Option<usize>,
    /// False when the step budget ran out before play settled.
    pub settled: bool,
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub struct MatchResult {
    pub run: Run,
    pub winner: Player,
    pub settled: bool,
    pub illegal: Option<usize>,
    /// The position after the legal part of the run.
    pub final_formula: Formula,
}

/// Plays `machine` against `environment` from `start`. The environment runs
/// until it grants permission, then the machine gets one step; play settles
/// after a round in which nobody moves and both wait.
///
/// `domain` bounds quantifier payloads; `None` plays symbolically.
pub fn play(
    machine: &mut dyn ReactiveStrategy,
    environment: &mut dyn ReactiveStrategy,
    start: &Formula,
    domain: Option<u64>,
    max_steps: usize,
) -> Result<Played, StrategyError> {
    let mut run: Run = Vec::new();
    let mut position = start.clone();
    let mut to_machine: Vec<LabMove> = Vec::new();
    let mut to_env: Vec<LabMove> = Vec::new();
    let mut steps = 0;
    // the environment moves (or waits) first
    let mut env_waiting;
    loop {
        if steps >= max_steps {
            return Ok(Played {
                run,
                illegal: None,
                settled: false,
                steps,
            });
        }
        steps += 1;
        let out = environment.step(&std::mem::take(&mut to_env));
        env_waiting = out.waiting;
        let env_moved = !out.moves.is_empty();
        for t in out.moves {
            let m = LabMove::new(Player::Environment, t);
            if let Some(i) = record(&mut run, &mut position, m.clone(), domain) {
                return Ok(Played {
                    run,
                    illegal: Some(i),
                    settled: true,
                    steps,
                });
            }
            to_machine.push(m);
        }
        if !env_waiting {
            continue;
        }
        steps += 1;
        let out = machine.step(&std::mem::take(&mut to_machine));
        if out.moves.len() > 1 {
            return Err(StrategyError::TooManyMoves(out.moves.len()));
        }
        let machine_moved = !out.moves.is_empty();
        for t in out.moves {
            let m = LabMove::new(Player::Machine, t);
            if let Some(i) = record(&mut run, &mut position, m.clone(), domain) {
                return Ok(Played {
                    run,
                    illegal: Some(i),
                    settled: true,
                    steps,
                });
            }
            to_env.push(m);
        }
        if !env_moved && !machine_moved && out.waiting {
            return Ok(Played {
                run,
                illegal: None,
                settled: true,
                steps,
            });
        }
    }
}

/// Appends `m`; returns its index if it is illegal in the current position.
fn record(run: &mut Run, position: &mut Formula, m: LabMove, domain: Option<u64>) -> Option<usize> {
    let next = fold_run(position, std::slice::from_ref(&m), domain);
    run.push(m);
    match next {
        Ok(f) => {
            *position = f;
            None
        }
        Err(_) => Some(run.len() - 1),
    }
}

/// Plays a match under the interpretation and valuation of `start` and
/// adjudicates it.
pub fn run_match(
    machine: &mut dyn ReactiveStrategy,
    environment: &mut dyn ReactiveStrategy,
    start: &GameState,
    max_steps: usize,
) -> Result<MatchResult, StrategyError> {
    let played = play(
        machine,
        environment,
        start.formula(),
        Some(start.domain()),
        max_steps,
    )?;
    let winner = start.wn_run(&played.run);
    let legal = played.illegal.map_or(played.run.len(), |i| i);
    let final_formula = fold_run(start.formula(), &played.run[..legal], Some(start.domain()))
        .expect("the legal prefix folds");
    Ok(MatchResult {
        run: played.run,
        winner,
        settled: played.settled,
        illegal: played.illegal,
        final_formula,
    })
}

/// A certificate indexed by formula.
#[derive(Clone, Debug)]
struct CertIndex {
    d: Derivation,
    by_formula: HashMap<Formula, usize>,
}

impl CertIndex {
    fn new(d: Derivation) -> Self {
        let by_formula = d
            .steps()
            .iter()
            .enumerate()
            .map(|(i, s)| (s.formula.clone(), i))
            .collect();
        CertIndex { d, by_formula }
    }

    fn step(&self, f: &Formula) -> Option<&Step> {
        self.by_formula.get(f).map(|&i| &self.d.steps()[i])
    }

    /// Premise formulas of `s`, smallest print first.
    fn premises(&self, s: &Step) -> Vec<&Formula> {
        let mut out: Vec<&Formula> = s
            .premises
            .iter()
            .filter_map(|id| self.d.step(*id).map(|p| &p.formula))
            .collect();
        out.sort_by_cached_key(|f| f.to_string());
        out
    }
}

/// Adversary moves as tokens; `♠` yields `None`.
fn tokens(incoming: &[LabMove]) -> impl Iterator<Item = Option<MoveToken>> + '_ {
    incoming.iter().map(|m| match &m.mv {
        Move::Token(t) => Some(t.clone()),
        Move::Spade => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Interpretation, Valuation};
    use crate::syntax::parse;

    #[test]
    fn silent_players_settle_on_the_empty_run() {
        let f = parse("p -> p").unwrap();
        let s = GameState::new(
            f.clone(),
            Interpretation::uniform(&f.signature(), 1, false),
            Valuation::new(),
        )
        .unwrap();
        let r = run_match(&mut Silent, &mut Silent, &s, 100).unwrap();
        assert!(r.run.is_empty());
        assert!(r.settled);
        assert_eq!(r.winner, Player::Machine);
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        // a scripted environment that never waits exhausts any budget
        let f = parse("p + ~p").unwrap();
        let mut env = ScriptedPlayer::new(Player::Environment, vec![]).never_waiting();
        let played = play(&mut Silent, &mut env, &f, None, 10).unwrap();
        assert!(!played.settled);
    }

    #[test]
    fn illegal_moves_stop_play() {
        let f = parse("p & q").unwrap();
        let mut m = ScriptedPlayer::new(Player::Machine, vec!["1".parse().unwrap()]);
        let played = play(&mut m, &mut Silent, &f, None, 10).unwrap();
        assert_eq!(played.illegal, Some(0));
    }
}
