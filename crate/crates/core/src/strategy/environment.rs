use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use super::machine::{quantified_var_free, replace};
use super::{tokens, CertIndex, ReactiveStrategy, StepOutput, StrategyError};
use crate::calculus::{co_enumerate_b1, match_fresh, Refutation, Rule, Step};
use crate::game::{move_is_legal, LabMove, MoveToken, Player, Valuation};
use crate::syntax::{Formula, OccurrenceSpec, Term, Var};

/// The environment's strategy read off a CL2° proof. The valuation record
/// `f` keeps distinct free terms of `E` at distinct constants throughout.
#[derive(Clone, Debug)]
pub struct EnvironmentStrategy {
    cert: Arc<CertIndex>,
    e: Formula,
    f: Valuation,
    initial: Valuation,
    queue: VecDeque<MoveToken>,
    stuck: bool,
}

/// Free variables of the refuted formula go to `d0+1, d0+2, ...` in order,
/// `d0` the largest constant of the formula (no constants: from 0).
pub fn compile_environment(refutation: &Refutation) -> Result<EnvironmentStrategy, StrategyError> {
    let e = refutation
        .conclusion()
        .cloned()
        .ok_or_else(|| StrategyError::Certificate("empty refutation".into()))?;
    let start = e.constants().iter().max().map_or(0, |d| d + 1);
    let f: Valuation = e.free_variables().into_iter().zip(start..).collect();
    Ok(EnvironmentStrategy {
        cert: Arc::new(CertIndex::new(refutation.0.clone())),
        e,
        initial: f.clone(),
        f,
        queue: VecDeque::new(),
        stuck: false,
    })
}

impl EnvironmentStrategy {
    pub fn formula(&self) -> &Formula {
        &self.e
    }

    pub fn valuation(&self) -> &Valuation {
        &self.f
    }

    /// The valuation the refuted formula is played under.
    pub fn initial_valuation(&self) -> &Valuation {
        &self.initial
    }

    pub fn is_stuck(&self) -> bool {
        self.stuck
    }

    fn value(&self, t: &Term) -> u64 {
        match t {
            Term::Const(c) => *c,
            Term::Var(x) => self.f.get(x),
        }
    }

    /// Constants of `fE`.
    fn used_constants(&self) -> BTreeSet<u64> {
        self.e.free_terms().iter().map(|t| self.value(t)).collect()
    }

    /// Distinct free terms of `E` sit at distinct constants.
    pub fn is_distinctive(&self) -> bool {
        let terms = self.e.free_terms();
        let values: BTreeSet<u64> = terms.iter().map(|t| self.value(t)).collect();
        values.len() == terms.len()
            && self
                .e
                .free_variables()
                .iter()
                .all(|x| self.f.lookup(x).is_some())
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

    /// The premise of `step` matching `template` up to its fresh variable.
    fn fresh_premise(
        &self,
        step: &Step,
        template: &Formula,
        y0: &Var,
    ) -> Option<(Formula, Option<Var>)> {
        self.cert
            .premises(step)
            .into_iter()
            .find_map(|p| match_fresh(&self.e, template, y0, p).map(|y| (p.clone(), y)))
    }

    /// Rule A subcases (i)-(iii); `false` is subcase (iv).
    fn absorb(&mut self, step: &Step, t: &MoveToken) -> bool {
        if !move_is_legal(&self.e, Player::Machine, t, None) {
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
                let c = t.payload;
                let y0 = self.e.fresh_variable();
                let instance = replace(
                    &self.e,
                    &t.spec,
                    body.instantiate(x, &Term::Var(y0.clone())),
                );
                let merged = self.e.free_terms().into_iter().find(|u| self.value(u) == c);
                let template = match &merged {
                    None => instance,
                    Some(u) => instance.replace_term(u, &Term::Var(y0.clone())),
                };
                let Some((h, y)) = self.fresh_premise(step, &template, &y0) else {
                    return false;
                };
                self.e = h;
                if let Some(Term::Var(u)) = &merged {
                    self.f.remove(u);
                }
                if let Some(y) = y {
                    self.f.insert(y, c);
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
        co_enumerate_b1(&self.e)
            .into_iter()
            .find(|(p, _, _)| p == h)
            .map(|(_, spec, i)| MoveToken::new(spec, i))
    }

    /// CL2° B2: the occurrence and the fresh variable used by the premise.
    fn b2(&self, h: &Formula) -> Option<(OccurrenceSpec, Option<Var>)> {
        let y0 = self.e.fresh_variable();
        self.e
            .surface_choice_occurrences()
            .into_iter()
            .filter(|o| o.is_conjunctive_in_context() && o.kind.is_quantifier())
            .find_map(|o| {
                let (x, body) = o.quantified()?;
                let template = replace(
                    &self.e,
                    &o.spec,
                    body.instantiate(x, &Term::Var(y0.clone())),
                );
                match_fresh(&self.e, &template, &y0, h).map(|y| (o.spec.clone(), y))
            })
    }
}

impl ReactiveStrategy for EnvironmentStrategy {
    fn step(&mut self, incoming: &[LabMove]) -> StepOutput {
        for t in tokens(incoming) {
            match t {
                Some(t) => self.queue.push_back(t),
                None => self.stuck = true,
            }
        }
        let mut out = Vec::new();
        loop {
            if self.stuck {
                return StepOutput {
                    moves: out,
                    waiting: true,
                };
            }
            assert!(
                self.is_distinctive(),
                "f = {} is not distinctive for {}",
                self.f,
                self.e
            );
            let cert = self.cert.clone();
            let Some(step) = cert.step(&self.e) else {
                self.stuck = true;
                continue;
            };
            match step.rule {
                Rule::A => {
                    let Some(t) = self.queue.pop_front() else {
                        return StepOutput {
                            moves: out,
                            waiting: true,
                        };
                    };
                    if !self.absorb(step, &t) {
                        self.stuck = true;
                    }
                }
                Rule::B1 => {
                    let h = cert.premises(step).first().copied().cloned();
                    match h.as_ref().and_then(|h| self.b1(step, h)) {
                        Some(t) => {
                            self.e = h.unwrap();
                            self.prune();
                            out.push(t);
                        }
                        None => self.stuck = true,
                    }
                }
                Rule::B2 => {
                    let h = cert.premises(step).first().copied().cloned();
                    let Some((h, (spec, y))) = h.and_then(|h| self.b2(&h).map(|r| (h, r))) else {
                        self.stuck = true;
                        continue;
                    };
                    let used = self.used_constants();
                    let c = (0..)
                        .find(|c| !used.contains(c))
                        .expect("finitely many constants in use");
                    let x_free = quantified_var_free(&self.e, &spec);
                    self.e = h;
                    if let (Some(y), true) = (y, x_free) {
                        self.f.insert(y, c);
                    }
                    out.push(MoveToken::new(spec, c));
                }
            }
        }
    }

    fn name(&self) -> String {
        "refutation-environment".into()
    }

    fn clone_box(&self) -> Box<dyn ReactiveStrategy> {
        Box::new(self.clone())
    }
}
