use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use super::{tokens, CertIndex, ReactiveStrategy, StepOutput, StrategyError};
use crate::calculus::{enumerate_b1, enumerate_b2, match_fresh, Proof, Rule, Step};
use crate::game::{move_is_legal, LabMove, MoveToken, Player, Valuation};
use crate::syntax::{Formula, OccurrenceSpec, Term};

/// The machine's strategy read off a CL2 proof: walk from the theorem towards
/// the axioms, answering environment moves at rule-A formulas and making the
/// B1/B2 choices the proof records.
#[derive(Clone, Debug)]
pub struct MachineStrategy {
    cert: Arc<CertIndex>,
    e: Formula,
    f: Valuation,
    queue: VecDeque<MoveToken>,
    stuck: bool,
}

/// `valuation` supplies the values of the theorem's free variables.
pub fn compile_machine(
    proof: &Proof,
    valuation: &Valuation,
) -> Result<MachineStrategy, StrategyError> {
    let e = proof
        .conclusion()
        .cloned()
        .ok_or_else(|| StrategyError::Certificate("empty proof".into()))?;
    let f = e.free_variables().into_iter().map(|x| {
        let c = valuation.get(&x);
        (x, c)
    });
    Ok(MachineStrategy {
        f: f.collect(),
        e,
        cert: Arc::new(CertIndex::new(proof.0.clone())),
        queue: VecDeque::new(),
        stuck: false,
    })
}

impl MachineStrategy {
    /// The current proof formula `E`.
    pub fn formula(&self) -> &Formula {
        &self.e
    }

    /// The record `f`.
    pub fn valuation(&self) -> &Valuation {
        &self.f
    }

    pub fn is_stuck(&self) -> bool {
        self.stuck
    }

    fn prune(&mut self) {
        let free = self.e.free_variables();
        self.f = self
            .f
            .iter()
            .filter(|(x, _)| free.contains(*x))
            .map(|(x, c)| (x.clone(), c))
            .collect();
    }

    /// Rule A: absorb one environment move, or report that none matches.
    fn absorb(&mut self, step: &Step, t: &MoveToken) -> bool {
        if !move_is_legal(&self.e, Player::Environment, t, None) {
            return false;
        }
        let Some(g) = self.e.resolve(&t.spec) else {
            return false;
        };
        match g {
            Formula::ChoAnd(gs) | Formula::ChoOr(gs) => {
                let h = replace(&self.e, &t.spec, gs[t.payload as usize - 1].clone());
                if !self.cert.premises(step).contains(&&h) {
                    return false;
                }
                self.e = h;
                self.prune();
                true
            }
            Formula::ChoAll(x, body) | Formula::ChoEx(x, body) => {
                let y0 = self.e.fresh_variable();
                let template = replace(
                    &self.e,
                    &t.spec,
                    body.instantiate(x, &Term::Var(y0.clone())),
                );
                let hit =
                    self.cert.premises(step).into_iter().find_map(|p| {
                        match_fresh(&self.e, &template, &y0, p).map(|y| (p.clone(), y))
                    });
                let Some((h, y)) = hit else {
                    return false;
                };
                self.e = h;
                if let Some(y) = y {
                    self.f.insert(y, t.payload);
                }
                true
            }
            _ => false,
        }
    }

    fn b1(&self, step: &Step, h: &Formula) -> Option<MoveToken> {
        if let (Some(spec), Some(i)) = (&step.detail.spec, step.detail.index) {
            return Some(MoveToken::new(spec.clone(), i));
        }
        enumerate_b1(&self.e)
            .into_iter()
            .find(|(p, _, _)| p == h)
            .map(|(_, spec, i)| MoveToken::new(spec, i))
    }

    fn b2(&self, step: &Step, h: &Formula) -> Option<(OccurrenceSpec, Term)> {
        if let (Some(spec), Some(t)) = (&step.detail.spec, &step.detail.term) {
            return Some((spec.clone(), t.clone()));
        }
        let candidates: BTreeSet<Term> = h
            .free_terms()
            .into_iter()
            .chain(self.e.free_terms())
            .collect();
        let candidates: Vec<Term> = candidates.into_iter().collect();
        enumerate_b2(&self.e, &candidates)
            .into_iter()
            .find(|(p, _, _)| p == h)
            .map(|(_, spec, t)| (spec, t))
    }

    fn stick(&mut self) -> StepOutput {
        self.stuck = true;
        StepOutput::wait()
    }
}

impl ReactiveStrategy for MachineStrategy {
    fn step(&mut self, incoming: &[LabMove]) -> StepOutput {
        for t in tokens(incoming) {
            match t {
                Some(t) => self.queue.push_back(t),
                None => self.stuck = true,
            }
        }
        loop {
            if self.stuck {
                return StepOutput::wait();
            }
            let cert = self.cert.clone();
            let Some(step) = cert.step(&self.e) else {
                return self.stick();
            };
            match step.rule {
                Rule::A => {
                    let Some(t) = self.queue.pop_front() else {
                        return StepOutput::wait();
                    };
                    if !self.absorb(step, &t) {
                        return self.stick();
                    }
                }
                Rule::B1 => {
                    let Some(h) = cert.premises(step).first().copied().cloned() else {
                        return self.stick();
                    };
                    let Some(t) = self.b1(step, &h) else {
                        return self.stick();
                    };
                    self.e = h;
                    self.prune();
                    return StepOutput::play(t);
                }
                Rule::B2 => {
                    let Some(h) = cert.premises(step).first().copied().cloned() else {
                        return self.stick();
                    };
                    let Some((spec, t)) = self.b2(step, &h) else {
                        return self.stick();
                    };
                    let x_free = quantified_var_free(&self.e, &spec);
                    let c = match &t {
                        Term::Const(c) => *c,
                        Term::Var(v) if self.e.free_variables().contains(v) => self.f.get(v),
                        Term::Var(_) => 0,
                    };
                    self.e = h;
                    if let (Term::Var(v), true) = (&t, x_free) {
                        self.f.insert(v.clone(), c);
                    }
                    return StepOutput::play(MoveToken::new(spec, c));
                }
            }
        }
    }

    fn name(&self) -> String {
        "proof-machine".into()
    }

    fn clone_box(&self) -> Box<dyn ReactiveStrategy> {
        Box::new(self.clone())
    }
}

pub(super) fn replace(e: &Formula, spec: &OccurrenceSpec, g: Formula) -> Formula {
    e.replace_at(spec, g).expect("legal moves resolve")
}

/// Whether the variable of the quantifier at `spec` occurs free in its body.
pub(super) fn quantified_var_free(e: &Formula, spec: &OccurrenceSpec) -> bool {
    match e.resolve(spec) {
        Some(Formula::ChoAll(x, body) | Formula::ChoEx(x, body)) => {
            body.free_variables().contains(x)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decider::{decide, Verdict};
    use crate::game::parse_run;
    use crate::syntax::parse;

    fn proof(s: &str) -> Proof {
        match decide(&parse(s).unwrap()).unwrap() {
            Verdict::Provable(p) => p,
            Verdict::Unprovable(_) => panic!("{s} should be provable"),
        }
    }

    fn feed(m: &mut MachineStrategy, run: &str) -> Vec<String> {
        let mut out = Vec::new();
        let mut pending = parse_run(run).unwrap();
        loop {
            let o = m.step(&std::mem::take(&mut pending));
            out.extend(o.moves.iter().map(|t| t.to_string()));
            if o.waiting {
                return out;
            }
            pending.clear();
        }
    }

    #[test]
    fn example_one_answers_with_the_same_constant() {
        let mut m = compile_machine(
            &proof("call x . cex y . (p(x) \\/ ~p(y))"),
            &Valuation::new(),
        )
        .unwrap();
        assert!(feed(&mut m, "").is_empty());
        assert_eq!(feed(&mut m, "⊥7"), ["7"]);
        assert_eq!(m.formula().to_string(), "p(v0) \\/ ~p(v0)");
        assert!(!m.is_stuck());
    }

    #[test]
    fn walkthrough_answers() {
        let one = "(call x . cex y . (p(x) <-> q(y))) -> (call x . (q(x) + ~q(x))) -> call x . (p(x) + ~p(x))";
        let mut m = compile_machine(&proof(one), &Valuation::new()).unwrap();
        assert!(feed(&mut m, "").is_empty());
        assert_eq!(feed(&mut m, "⊥2.2.7"), ["1.7"]);
        assert_eq!(feed(&mut m, "⊥1.9"), ["2.1.9"]);
        assert_eq!(feed(&mut m, "⊥2.1.1"), ["2.2.1"]);
    }

    #[test]
    fn tautology_machine_stays_silent() {
        let mut m = compile_machine(&proof("p -> p"), &Valuation::new()).unwrap();
        assert!(feed(&mut m, "").is_empty());
    }

    #[test]
    fn unmatched_moves_make_the_machine_wait_forever() {
        let mut m = compile_machine(
            &proof("call x . cex y . (p(x) \\/ ~p(y))"),
            &Valuation::new(),
        )
        .unwrap();
        assert!(feed(&mut m, "⊥1.3").is_empty());
        assert!(m.is_stuck());
    }
}
