use std::sync::Arc;

use super::{GameError, Interpretation, LabMove, Move, MoveToken, Oracle, Player, Valuation};
use crate::syntax::{ChoiceKind, Formula, Polarity};

/// Whether `who` may make `t` in the game `f`.
///
/// With `domain = None` any constant is an acceptable choice-quantifier
/// payload; this is the structural legality used for interpretation-free
/// (symbolic) play.
pub fn move_is_legal(f: &Formula, who: Player, t: &MoveToken, domain: Option<u64>) -> bool {
    let Some((g, pol, _)) = f.locate(&t.spec) else {
        return false;
    };
    let Some(kind) = ChoiceKind::of(g) else {
        return false;
    };
    // positive `&`/`call` and negative `+`/`cex` belong to the environment
    let env_move = kind.is_conjunctive() == (pol == Polarity::Positive);
    if env_move != (who == Player::Environment) {
        return false;
    }
    match g {
        Formula::ChoAnd(gs) | Formula::ChoOr(gs) => (1..=gs.len() as u64).contains(&t.payload),
        _ => domain.is_none_or(|d| t.payload < d),
    }
}

/// `⟨ϰα⟩F` as a formula: the chosen operand or instance replaces the
/// addressed occurrence.
pub fn bring_down(f: &Formula, who: Player, t: &MoveToken) -> Result<Formula, GameError> {
    if !move_is_legal(f, who, t, None) {
        return Err(GameError::Illegal {
            player: who,
            mv: Move::Token(t.clone()),
        });
    }
    let g = f.resolve(&t.spec).expect("legal moves resolve");
    let next = match g {
        Formula::ChoAnd(gs) | Formula::ChoOr(gs) => gs[t.payload as usize - 1].clone(),
        Formula::ChoAll(x, body) | Formula::ChoEx(x, body) => {
            body.instantiate(x, &crate::syntax::Term::Const(t.payload))
        }
        _ => unreachable!("legal moves address choice nodes"),
    };
    Ok(f.replace_at(&t.spec, next).expect("legal moves resolve"))
}

/// Folds a run structurally. On failure returns the index of the first
/// illegal move.
pub fn fold_run(f: &Formula, run: &[LabMove], domain: Option<u64>) -> Result<Formula, usize> {
    let mut cur = f.clone();
    for (i, m) in run.iter().enumerate() {
        match &m.mv {
            Move::Token(t) if move_is_legal(&cur, m.player, t, domain) => {
                cur = bring_down(&cur, m.player, t).expect("checked legal");
            }
            _ => return Err(i),
        }
    }
    Ok(cur)
}

/// A position of a formula-game: the brought-down formula together with the
/// interpretation and valuation it is played under.
#[derive(Clone, Debug)]
pub struct GameState {
    formula: Formula,
    interp: Arc<Interpretation>,
    valuation: Valuation,
}

impl GameState {
    pub fn new(
        formula: Formula,
        interp: impl Into<Arc<Interpretation>>,
        valuation: Valuation,
    ) -> Result<Self, GameError> {
        let interp = interp.into();
        interp.fits(&formula)?;
        if let Some((x, c)) = valuation.iter().find(|&(_, c)| c >= interp.domain()) {
            return Err(GameError::Mismatch(format!(
                "valuation sends {x} to {c}, outside domain 0..{}",
                interp.domain()
            )));
        }
        Ok(GameState {
            formula,
            interp,
            valuation,
        })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn interpretation(&self) -> &Interpretation {
        &self.interp
    }

    pub fn shared_interpretation(&self) -> Arc<Interpretation> {
        self.interp.clone()
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn domain(&self) -> u64 {
        self.interp.domain()
    }

    /// Moves available to `who`, by occurrence (left to right) then payload.
    pub fn legal_moves(&self, who: Player) -> Vec<MoveToken> {
        let mut out = Vec::new();
        for occ in self.formula.surface_choice_occurrences() {
            if occ.is_conjunctive_in_context() != (who == Player::Environment) {
                continue;
            }
            let payloads = if occ.kind.is_quantifier() {
                0..self.domain()
            } else {
                1..occ.operands().len() as u64 + 1
            };
            out.extend(payloads.map(|c| MoveToken::new(occ.spec.clone(), c)));
        }
        out
    }

    pub fn is_legal(&self, m: &LabMove) -> bool {
        match &m.mv {
            Move::Token(t) => move_is_legal(&self.formula, m.player, t, Some(self.domain())),
            Move::Spade => false,
        }
    }

    pub fn apply_move(&self, m: &LabMove) -> Result<GameState, GameError> {
        if !self.is_legal(m) {
            return Err(GameError::Illegal {
                player: m.player,
                mv: m.mv.clone(),
            });
        }
        let t = m.token().expect("legal moves are tokens");
        Ok(GameState {
            formula: bring_down(&self.formula, m.player, t)?,
            interp: self.interp.clone(),
            valuation: self.valuation.clone(),
        })
    }

    /// Winner of the empty run: the truth of the elementarization.
    pub fn wn_empty(&self) -> Player {
        if self
            .interp
            .eval(&self.formula.elementarize(), &self.valuation)
        {
            Player::Machine
        } else {
            Player::Environment
        }
    }

    /// Winner of `run` played from this position. An illegal move loses for
    /// the player who made it.
    pub fn wn_run(&self, run: &[LabMove]) -> Player {
        match fold_run(&self.formula, run, Some(self.domain())) {
            Ok(f) => self.with_formula(f).wn_empty(),
            Err(i) => run[i].player.adversary(),
        }
    }

    /// The state after `run`, or the index of its first illegal move.
    pub fn after(&self, run: &[LabMove]) -> Result<GameState, usize> {
        fold_run(&self.formula, run, Some(self.domain())).map(|f| self.with_formula(f))
    }

    pub fn winnable(&self) -> bool {
        Oracle::new(&self.interp).winnable(&self.formula, &self.valuation)
    }

    pub(crate) fn with_formula(&self, formula: Formula) -> GameState {
        GameState {
            formula,
            interp: self.interp.clone(),
            valuation: self.valuation.clone(),
        }
    }
}
