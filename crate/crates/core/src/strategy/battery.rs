//! Opponents that know nothing of certificates: used to exercise compiled
//! strategies and as the machine battery for counter-certificates.
//!
//! None of these machines reads the interpretation a match is adjudicated
//! under. The greedy machine plays perfectly against its own pseudo-random
//! belief tables, which is as close as a uniform strategy gets to "trying".

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ReactiveStrategy, StepOutput};
use crate::game::{
    bring_down, Interpretation, LabMove, Move, MoveToken, Oracle, Player, Valuation,
};
use crate::syntax::Formula;

/// Never moves.
#[derive(Clone, Copy, Debug, Default)]
pub struct Silent;

impl ReactiveStrategy for Silent {
    fn step(&mut self, _: &[LabMove]) -> StepOutput {
        StepOutput::wait()
    }

    fn name(&self) -> String {
        "silent".into()
    }

    fn clone_box(&self) -> Box<dyn ReactiveStrategy> {
        Box::new(*self)
    }
}

/// Plays a fixed list of moves, one per step, granting permission after
/// each one.
#[derive(Clone, Debug)]
pub struct ScriptedPlayer {
    who: Player,
    moves: VecDeque<MoveToken>,
    never_waits: bool,
}

impl ScriptedPlayer {
    pub fn new(who: Player, moves: Vec<MoveToken>) -> Self {
        ScriptedPlayer {
            who,
            moves: moves.into(),
            never_waits: false,
        }
    }

    /// Keeps the scheduler busy forever once the script is done; for
    /// exercising step budgets.
    pub fn never_waiting(mut self) -> Self {
        self.never_waits = true;
        self
    }
}

impl ReactiveStrategy for ScriptedPlayer {
    fn step(&mut self, _: &[LabMove]) -> StepOutput {
        match self.moves.pop_front() {
            Some(t) => StepOutput {
                moves: vec![t],
                waiting: true,
            },
            None => StepOutput {
                moves: Vec::new(),
                waiting: !self.never_waits,
            },
        }
    }

    fn name(&self) -> String {
        format!("script-{}", self.who)
    }

    fn clone_box(&self) -> Box<dyn ReactiveStrategy> {
        Box::new(self.clone())
    }
}

/// Tracks the position from the machine's side by folding the run.
#[derive(Clone, Debug)]
struct Tracker {
    position: Formula,
    broken: bool,
}

impl Tracker {
    fn new(f: &Formula) -> Self {
        Tracker {
            position: f.clone(),
            broken: false,
        }
    }

    fn absorb(&mut self, incoming: &[LabMove]) {
        for m in incoming {
            if self.broken {
                return;
            }
            match &m.mv {
                Move::Token(t) => match bring_down(&self.position, m.player, t) {
                    Ok(f) => self.position = f,
                    Err(_) => self.broken = true,
                },
                Move::Spade => self.broken = true,
            }
        }
    }

    fn play(&mut self, t: MoveToken) -> StepOutput {
        self.position =
            bring_down(&self.position, Player::Machine, &t).expect("own moves are legal");
        StepOutput::play(t)
    }

    /// Machine moves in the current position with quantifier payloads up to
    /// `max_const`.
    fn moves(&self, max_const: u64) -> Vec<MoveToken> {
        let mut out = Vec::new();
        for occ in self.position.surface_choice_occurrences() {
            if occ.is_conjunctive_in_context() {
                continue;
            }
            let payloads = if occ.kind.is_quantifier() {
                0..max_const + 1
            } else {
                1..occ.operands().len() as u64 + 1
            };
            out.extend(payloads.map(|c| MoveToken::new(occ.spec.clone(), c)));
        }
        out
    }
}

/// Moves at random with probability 7/10 per wake-up, constants up to
/// `max_const`.
#[derive(Clone, Debug)]
pub struct RandomMachine {
    seed: u64,
    rng: ChaCha8Rng,
    tracker: Tracker,
    max_const: u64,
}

impl RandomMachine {
    pub fn new(f: &Formula, seed: u64, max_const: u64) -> Self {
        RandomMachine {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            tracker: Tracker::new(f),
            max_const,
        }
    }
}

impl ReactiveStrategy for RandomMachine {
    fn step(&mut self, incoming: &[LabMove]) -> StepOutput {
        self.tracker.absorb(incoming);
        if self.tracker.broken {
            return StepOutput::wait();
        }
        let moves = self.tracker.moves(self.max_const);
        if moves.is_empty() || !self.rng.gen_bool(0.7) {
            return StepOutput::wait();
        }
        let t = moves[self.rng.gen_range(0..moves.len())].clone();
        self.tracker.play(t)
    }

    fn name(&self) -> String {
        format!("random-{}", self.seed)
    }

    fn clone_box(&self) -> Box<dyn ReactiveStrategy> {
        Box::new(self.clone())
    }
}

/// Plays the oracle's choice under its own belief tables.
#[derive(Clone, Debug)]
pub struct GreedyMachine {
    seed: u64,
    tracker: Tracker,
    valuation: Valuation,
    signature: crate::syntax::Signature,
}

impl GreedyMachine {
    pub fn new(f: &Formula, valuation: &Valuation, seed: u64) -> Self {
        GreedyMachine {
            seed,
            tracker: Tracker::new(f),
            valuation: valuation.clone(),
            signature: f.signature(),
        }
    }
}

impl ReactiveStrategy for GreedyMachine {
    fn step(&mut self, incoming: &[LabMove]) -> StepOutput {
        self.tracker.absorb(incoming);
        if self.tracker.broken {
            return StepOutput::wait();
        }
        let pos = &self.tracker.position;
        let top = pos
            .constants()
            .into_iter()
            .chain(self.valuation.values())
            .max()
            .unwrap_or(0);
        let domain = (top + 2).max(2);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let belief = Interpretation::random(&self.signature, domain, &mut rng);
        match Oracle::new(&belief).choose(pos, &self.valuation) {
            Some(t) => self.tracker.play(t),
            None => StepOutput::wait(),
        }
    }

    fn name(&self) -> String {
        format!("greedy-{}", self.seed)
    }

    fn clone_box(&self) -> Box<dyn ReactiveStrategy> {
        Box::new(self.clone())
    }
}

/// Echoes the environment: at its first open occurrence it repeats the
/// latest constant (or operand index) the environment played.
#[derive(Clone, Debug)]
pub struct Copycat {
    tracker: Tracker,
    last_constant: u64,
    last_index: u64,
}

impl Copycat {
    pub fn new(f: &Formula) -> Self {
        Copycat {
            tracker: Tracker::new(f),
            last_constant: 0,
            last_index: 1,
        }
    }
}

impl ReactiveStrategy for Copycat {
    fn step(&mut self, incoming: &[LabMove]) -> StepOutput {
        for m in incoming {
            if let Some(t) = m.token() {
                match self.tracker.position.resolve(&t.spec) {
                    Some(Formula::ChoAll(..) | Formula::ChoEx(..)) => {
                        self.last_constant = t.payload
                    }
                    Some(_) => self.last_index = t.payload,
                    None => {}
                }
            }
            self.tracker.absorb(std::slice::from_ref(m));
        }
        if self.tracker.broken {
            return StepOutput::wait();
        }
        let occ = self
            .tracker
            .position
            .surface_choice_occurrences()
            .into_iter()
            .find(|o| !o.is_conjunctive_in_context());
        match occ {
            None => StepOutput::wait(),
            Some(o) if o.kind.is_quantifier() => self
                .tracker
                .play(MoveToken::new(o.spec, self.last_constant)),
            Some(o) => {
                let n = o.operands().len() as u64;
                let i = if self.last_index <= n {
                    self.last_index
                } else {
                    1
                };
                self.tracker.play(MoveToken::new(o.spec, i))
            }
        }
    }

    fn name(&self) -> String {
        "copycat".into()
    }

    fn clone_box(&self) -> Box<dyn ReactiveStrategy> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MachineKind {
    Silent,
    Random { seed: u64 },
    Greedy { seed: u64 },
    Copycat,
}

impl MachineKind {
    pub fn build(
        &self,
        f: &Formula,
        valuation: &Valuation,
        max_const: u64,
    ) -> Box<dyn ReactiveStrategy> {
        match self {
            MachineKind::Silent => Box::new(Silent),
            MachineKind::Random { seed } => Box::new(RandomMachine::new(f, *seed, max_const)),
            MachineKind::Greedy { seed } => Box::new(GreedyMachine::new(f, valuation, *seed)),
            MachineKind::Copycat => Box::new(Copycat::new(f)),
        }
    }
}

/// Which machines a battery runs, and with what limits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BatteryConfig {
    pub silent: bool,
    pub copycat: bool,
    pub greedy_seeds: Vec<u64>,
    /// Random machines are seeded `0..random_seeds`.
    pub random_seeds: u64,
    /// Largest constant a random machine plays.
    pub max_constant: u64,
    pub max_steps: usize,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            silent: true,
            copycat: true,
            greedy_seeds: vec![0],
            random_seeds: 100,
            max_constant: 6,
            max_steps: 10_000,
        }
    }
}

impl BatteryConfig {
    pub fn machines(&self) -> Vec<MachineKind> {
        let mut out = Vec::new();
        if self.silent {
            out.push(MachineKind::Silent);
        }
        out.extend(
            self.greedy_seeds
                .iter()
                .map(|&seed| MachineKind::Greedy { seed }),
        );
        if self.copycat {
            out.push(MachineKind::Copycat);
        }
        out.extend((0..self.random_seeds).map(|seed| MachineKind::Random { seed }));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn battery_config_defaults_and_json() {
        let c = BatteryConfig::default();
        assert_eq!(c.machines().len(), 103);
        let c: BatteryConfig =
            serde_json::from_str(r#"{"random_seeds": 2, "greedy_seeds": []}"#).unwrap();
        assert_eq!(
            c.machines(),
            vec![
                MachineKind::Silent,
                MachineKind::Copycat,
                MachineKind::Random { seed: 0 },
                MachineKind::Random { seed: 1 }
            ]
        );
        let k: MachineKind = serde_json::from_str(r#"{"kind":"greedy","seed":3}"#).unwrap();
        assert_eq!(k, MachineKind::Greedy { seed: 3 });
    }

    #[test]
    fn random_machines_are_reproducible() {
        let f = parse("cex x . cex y . (p(x) + q(y))").unwrap();
        let mut a = RandomMachine::new(&f, 7, 5);
        let mut b = RandomMachine::new(&f, 7, 5);
        for _ in 0..5 {
            assert_eq!(a.step(&[]), b.step(&[]));
        }
    }

    #[test]
    fn copycat_mirrors_constants() {
        let f = parse("(call x . p(x)) -> call x . p(x)").unwrap();
        let mut c = Copycat::new(&f);
        let out = c.step(&crate::game::parse_run("⊥2.4").unwrap());
        assert_eq!(out.moves, vec!["1.4".parse().unwrap()]);
    }
}
