use super::{ReactiveStrategy, StrategyError};
use crate::game::{move_is_legal, GameState, LabMove, MoveToken, Player, Run};
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub runs: usize,
}

/// Every settled run the machine can end up in against an arbitrary
/// environment over `domain`. At each point the environment either makes any
/// legal move or grants permission, in which case the machine takes one step.
/// The machine never sees an interpretation, so the same runs serve all
/// tables of the domain.
pub fn adversary_runs(
    machine: &dyn ReactiveStrategy,
    start: &Formula,
    domain: u64,
) -> Result<Vec<Run>, StrategyError> {
    let mut out = Vec::new();
    explore(
        machine.clone_box(),
        start,
        domain,
        Vec::new(),
        Vec::new(),
        &mut out,
    )?;
    Ok(out)
}

fn env_moves(f: &Formula, domain: u64) -> Vec<MoveToken> {
    let mut out = Vec::new();
    for occ in f
        .surface_choice_occurrences()
        .into_iter()
        .filter(|o| o.is_conjunctive_in_context())
    {
        let payloads = if occ.kind.is_quantifier() {
            0..domain
        } else {
            1..occ.operands().len() as u64 + 1
        };
        out.extend(payloads.map(|c| MoveToken::new(occ.spec.clone(), c)));
    }
    out
}

fn explore(
    machine: Box<dyn ReactiveStrategy>,
    position: &Formula,
    domain: u64,
    run: Run,
    pending: Vec<LabMove>,
    out: &mut Vec<Run>,
) -> Result<(), StrategyError> {
    for t in env_moves(position, domain) {
        let m = LabMove::new(Player::Environment, t.clone());
        let next = crate::game::bring_down(position, Player::Environment, &t)
            .expect("generated moves are legal");
        let mut run = run.clone();
        run.push(m.clone());
        let mut pending = pending.clone();
        pending.push(m);
        explore(machine.clone_box(), &next, domain, run, pending, out)?;
    }
    // the environment grants permission
    let mut machine = machine;
    let mut pending = pending;
    // a machine that neither moves nor waits gets a few more chances
    for _ in 0..64 {
        let step = machine.step(&std::mem::take(&mut pending));
        if step.moves.len() > 1 {
            return Err(StrategyError::TooManyMoves(step.moves.len()));
        }
        if let Some(t) = step.moves.into_iter().next() {
            let mut run = run;
            let legal = move_is_legal(position, Player::Machine, &t, Some(domain));
            run.push(LabMove::new(Player::Machine, t.clone()));
            if !legal {
                out.push(run);
                return Ok(());
            }
            let next =
                crate::game::bring_down(position, Player::Machine, &t).expect("checked legal");
            return explore(machine, &next, domain, run, Vec::new(), out);
        }
        if step.waiting {
            break;
        }
    }
    out.push(run);
    Ok(())
}

/// Checks that no environment behaviour makes the machine lose under the
/// interpretation and valuation of `start`. Returns a losing run otherwise.
pub fn machine_never_loses(
    machine: &dyn ReactiveStrategy,
    start: &GameState,
) -> Result<SearchStats, Run> {
    let runs = adversary_runs(machine, start.formula(), start.domain()).map_err(|_| Vec::new())?;
    for r in &runs {
        if start.wn_run(r) != Player::Machine {
            return Err(r.clone());
        }
    }
    Ok(SearchStats { runs: runs.len() })
}
