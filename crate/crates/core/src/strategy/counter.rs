use serde_json::{json, Value};

use super::{compile_environment, play, ReactiveStrategy, StrategyError};
use crate::calculus::Refutation;
use crate::classical::falsifying_assignment;
use crate::game::{GameState, Interpretation, Player, Run, Valuation};
use crate::syntax::{Formula, Term};

/// A verified defeat of one machine: under `interpretation` and `valuation`
/// the environment wins `run`.
#[derive(Clone, Debug)]
pub struct CounterCertificate {
    pub formula: Formula,
    pub machine: String,
    pub interpretation: Interpretation,
    pub valuation: Valuation,
    pub run: Run,
}

impl CounterCertificate {
    pub fn winner(&self) -> Player {
        GameState::new(
            self.formula.clone(),
            self.interpretation.clone(),
            self.valuation.clone(),
        )
        .map(|s| s.wn_run(&self.run))
        .unwrap_or(Player::Machine)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "formula": self.formula.to_string(),
            "machine": self.machine,
            "interpretation": self.interpretation.to_json(),
            "valuation": self.valuation,
            "run": self.run.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Plays `machine` against the environment compiled from `refutation`
/// without any interpretation, then builds one under which the final
/// position is false. The environment's last formula is instable and its
/// valuation record is distinctive, so a falsifying table exists.
pub fn counter_certificate(
    refutation: &Refutation,
    machine: &mut dyn ReactiveStrategy,
    max_steps: usize,
) -> Result<CounterCertificate, StrategyError> {
    let mut env = compile_environment(refutation)?;
    let formula = env.formula().clone();
    let valuation = env.initial_valuation().clone();
    let played = play(machine, &mut env, &formula, None, max_steps)?;
    if !played.settled {
        return Err(StrategyError::Counter(format!(
            "no settlement within {max_steps} steps"
        )));
    }
    let mut top = formula
        .constants()
        .into_iter()
        .chain(valuation.values())
        .max()
        .unwrap_or(0);
    for m in &played.run {
        if let Some(t) = m.token() {
            top = top.max(t.payload);
        }
    }
    let interpretation = match played.illegal {
        Some(i) if played.run[i].player == Player::Machine => {
            Interpretation::uniform(&formula.signature(), top + 1, false)
        }
        Some(i) => {
            return Err(StrategyError::Counter(format!(
                "environment move {} is illegal",
                played.run[i]
            )));
        }
        None => {
            let bindings: Vec<(Term, Term)> = env
                .valuation()
                .iter()
                .map(|(x, c)| (Term::Var(x.clone()), Term::Const(c)))
                .collect();
            let last = env
                .formula()
                .substitute(&bindings)
                .map_err(|e| StrategyError::Counter(e.to_string()))?;
            let elementary = last.elementarize();
            top = top.max(elementary.constants().into_iter().max().unwrap_or(0));
            let assignment = falsifying_assignment(&elementary)
                .map_err(|e| StrategyError::Counter(format!("{last}: {e}")))?;
            let mut interp = Interpretation::uniform(&formula.signature(), top + 1, false);
            for (atom, value) in assignment.iter() {
                let args: Option<Vec<u64>> = atom.args.iter().map(Term::as_const).collect();
                let args =
                    args.ok_or_else(|| StrategyError::Counter(format!("open atom {atom}")))?;
                interp
                    .set(&atom.pred, &args, value)
                    .map_err(|e| StrategyError::Counter(e.to_string()))?;
            }
            interp
        }
    };
    let cert = CounterCertificate {
        formula,
        machine: machine.name(),
        interpretation,
        valuation,
        run: played.run,
    };
    if cert.winner() != Player::Environment {
        return Err(StrategyError::Counter(format!(
            "machine {} still wins run {:?}",
            cert.machine, cert.run
        )));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decider::{decide, Verdict};
    use crate::game::Valuation;
    use crate::strategy::{Copycat, GreedyMachine, RandomMachine, ScriptedPlayer, Silent};
    use crate::syntax::parse;

    fn refutation(s: &str) -> Refutation {
        match decide(&parse(s).unwrap()).unwrap() {
            Verdict::Unprovable(r) => r,
            Verdict::Provable(_) => panic!("{s} should be unprovable"),
        }
    }

    #[test]
    fn picking_a_disjunct_is_punished() {
        let r = refutation("p + ~p");
        let mut m = ScriptedPlayer::new(Player::Machine, vec!["1".parse().unwrap()]);
        let c = counter_certificate(&r, &mut m, 100).unwrap();
        assert_eq!(c.run.len(), 1);
        assert_eq!(c.interpretation.holds("p", &[]), Some(false));
    }

    #[test]
    fn example_two_against_the_battery() {
        let text = "cex y . call x . (p(x) \\/ ~p(y))";
        let r = refutation(text);
        let f = parse(text).unwrap();
        let mut m = ScriptedPlayer::new(Player::Machine, vec!["5".parse().unwrap()]);
        let c = counter_certificate(&r, &mut m, 100).unwrap();
        assert_eq!(c.interpretation.holds("p", &[5]), Some(true));
        assert_eq!(c.interpretation.holds("p", &[0]), Some(false));
        let mut machines: Vec<Box<dyn ReactiveStrategy>> = vec![
            Box::new(Silent),
            Box::new(Copycat::new(&f)),
            Box::new(GreedyMachine::new(&f, &Valuation::new(), 1)),
        ];
        machines.extend(
            (0..10).map(|s| Box::new(RandomMachine::new(&f, s, 6)) as Box<dyn ReactiveStrategy>),
        );
        for m in machines.iter_mut() {
            let c = counter_certificate(&r, m.as_mut(), 1000).unwrap();
            assert_eq!(c.winner(), Player::Environment);
        }
    }
}
