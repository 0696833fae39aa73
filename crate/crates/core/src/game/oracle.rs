use std::collections::HashMap;

use super::{bring_down, Interpretation, MoveToken, Player, Valuation};
use crate::syntax::Formula;

/// Backward induction over the finite game tree of a formula under one
/// interpretation.
///
/// `W(F)` holds iff the machine has a move to a winnable position, or the
/// empty continuation is machine-won and every environment move leads to a
/// winnable position. Memoised on the printed formula and the valuation
/// restricted to its free variables.
pub struct Oracle<'a> {
    interp: &'a Interpretation,
    memo: HashMap<(String, Valuation), bool>,
}

impl<'a> Oracle<'a> {
    pub fn new(interp: &'a Interpretation) -> Self {
        Oracle {
            interp,
            memo: HashMap::new(),
        }
    }

    fn moves(&self, f: &Formula, who: Player) -> Vec<MoveToken> {
        let mut out = Vec::new();
        for occ in f.surface_choice_occurrences() {
            let env = occ.is_conjunctive_in_context();
            if env != (who == Player::Environment) {
                continue;
            }
            let n = if occ.kind.is_quantifier() {
                0..self.interp.domain()
            } else {
                1..occ.operands().len() as u64 + 1
            };
            out.extend(n.map(|c| MoveToken::new(occ.spec.clone(), c)));
        }
        out
    }

    fn next(f: &Formula, who: Player, t: &MoveToken) -> Formula {
        bring_down(f, who, t).expect("generated moves are legal")
    }

    pub fn winnable(&mut self, f: &Formula, e: &Valuation) -> bool {
        let key = (f.to_string(), e.restrict(&f.free_variables()));
        if let Some(&w) = self.memo.get(&key) {
            return w;
        }
        let w = self
            .moves(f, Player::Machine)
            .iter()
            .any(|t| self.winnable(&Self::next(f, Player::Machine, t), e))
            || self.passive_ok(f, e);
        self.memo.insert(key, w);
        w
    }

    /// The machine can stay put: the position is won as it stands and
    /// survives every environment move.
    pub fn passive_ok(&mut self, f: &Formula, e: &Valuation) -> bool {
        self.interp.eval(&f.elementarize(), e)
            && self
                .moves(f, Player::Environment)
                .iter()
                .all(|t| self.winnable(&Self::next(f, Player::Environment, t), e))
    }

    /// A machine move that keeps the game winnable, preferring to move; `None`
    /// means pass (either passivity is safe or nothing helps).
    pub fn choose(&mut self, f: &Formula, e: &Valuation) -> Option<MoveToken> {
        self.moves(f, Player::Machine)
            .into_iter()
            .find(|t| self.winnable(&Self::next(f, Player::Machine, t), e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameState;
    use crate::syntax::parse;

    fn all_tables(text: &str, domain: u64) -> Vec<GameState> {
        let f = parse(text).unwrap();
        Interpretation::enumerate(&f.signature(), domain, 12)
            .unwrap()
            .into_iter()
            .map(|i| GameState::new(f.clone(), i, Valuation::new()).unwrap())
            .collect()
    }

    #[test]
    fn winnable_examples() {
        assert!(all_tables("call x . (p(x) + ~p(x))", 2)
            .iter()
            .all(GameState::winnable));
        let s = all_tables("p + ~p", 1);
        assert!(s.iter().all(GameState::winnable));
        assert!(all_tables("(p & q) \\/ (~p + ~q)", 1)
            .iter()
            .all(GameState::winnable));
        // blind choice hides the value: p(x) true only for some x
        let s = all_tables("fa x . (p(x) + ~p(x))", 2);
        let won = s.iter().filter(|s| s.winnable()).count();
        assert_eq!(won, 2);
    }

    #[test]
    fn elementary_winnability_is_truth() {
        for s in all_tables("(p(x) -> q) \\/ ex y . p(y)", 2) {
            assert_eq!(s.winnable(), s.wn_empty() == Player::Machine);
        }
    }

    #[test]
    fn choose_prefers_a_winning_move() {
        let f = parse("p + ~p").unwrap();
        let mut i = Interpretation::uniform(&f.signature(), 1, false);
        let mut o = Oracle::new(&i);
        assert_eq!(o.choose(&f, &Valuation::new()).unwrap().to_string(), "2");
        i.set("p", &[], true).unwrap();
        let mut o = Oracle::new(&i);
        assert_eq!(o.choose(&f, &Valuation::new()).unwrap().to_string(), "1");
    }
}
