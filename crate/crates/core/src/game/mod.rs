//! Formulas as games: moves, runs, interpretations, adjudication.

mod delay;
mod interp;
mod oracle;
mod state;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{OccurrenceSpec, SyntaxError};

pub use delay::{delays, is_delay, random_run, static_violations};
pub use interp::{Interpretation, Valuation};
pub use oracle::Oracle;
pub use state::{bring_down, fold_run, move_is_legal, GameState};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    /// `⊤`
    Machine,
    /// `⊥`
    Environment,
}

impl Player {
    pub fn adversary(self) -> Player {
        match self {
            Player::Machine => Player::Environment,
            Player::Environment => Player::Machine,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Player::Machine => '⊤',
            Player::Environment => '⊥',
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Machine => "machine",
            Player::Environment => "environment",
        })
    }
}

impl FromStr for Player {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "machine" | "Machine" | "M" | "⊤" => Ok(Player::Machine),
            "environment" | "Environment" | "E" | "⊥" => Ok(Player::Environment),
            _ => Err(GameError::BadMove(format!("unknown player `{s}`"))),
        }
    }
}

/// A move `β i` or `β c`: an occurrence specification followed by an operand
/// index or a constant. `"2.2.7"` is spec `"2.2."` with payload 7.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MoveToken {
    pub spec: OccurrenceSpec,
    pub payload: u64,
}

impl MoveToken {
    pub fn new(spec: OccurrenceSpec, payload: u64) -> Self {
        MoveToken { spec, payload }
    }
}

impl fmt::Display for MoveToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.spec, self.payload)
    }
}

impl fmt::Debug for MoveToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MoveToken {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (spec, payload) = match s.rfind('.') {
            Some(i) => (&s[..=i], &s[i + 1..]),
            None => ("", s),
        };
        let spec = spec
            .parse()
            .map_err(|e: SyntaxError| GameError::BadMove(e.to_string()))?;
        let payload = payload
            .parse()
            .ok()
            .filter(|_| payload.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| GameError::BadMove(format!("bad payload in `{s}`")))?;
        Ok(MoveToken { spec, payload })
    }
}

/// What a player can put on the run: a well-formed token, or the reserved
/// move `♠` that no game accepts.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    Token(MoveToken),
    Spade,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Token(t) => write!(f, "{t}"),
            Move::Spade => f.write_str("♠"),
        }
    }
}

impl fmt::Debug for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<MoveToken> for Move {
    fn from(t: MoveToken) -> Self {
        Move::Token(t)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabMove {
    pub player: Player,
    pub mv: Move,
}

impl LabMove {
    pub fn new(player: Player, token: MoveToken) -> Self {
        LabMove {
            player,
            mv: Move::Token(token),
        }
    }

    pub fn spade(player: Player) -> Self {
        LabMove {
            player,
            mv: Move::Spade,
        }
    }

    pub fn token(&self) -> Option<&MoveToken> {
        match &self.mv {
            Move::Token(t) => Some(t),
            Move::Spade => None,
        }
    }
}

impl fmt::Display for LabMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.player.symbol(), self.mv)
    }
}

impl fmt::Debug for LabMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `⊥2.2.7`, `⊤1.7`, also `E:2.2.7` / `M:1.7` for ASCII input.
impl FromStr for LabMove {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (player, rest) = if let Some(r) = s.strip_prefix('⊤') {
            (Player::Machine, r)
        } else if let Some(r) = s.strip_prefix('⊥') {
            (Player::Environment, r)
        } else if let Some(r) = s.strip_prefix("M:") {
            (Player::Machine, r)
        } else if let Some(r) = s.strip_prefix("E:") {
            (Player::Environment, r)
        } else {
            return Err(GameError::BadMove(format!("missing player label in `{s}`")));
        };
        if rest == "♠" {
            return Ok(LabMove::spade(player));
        }
        Ok(LabMove::new(player, rest.parse()?))
    }
}

pub type Run = Vec<LabMove>;

/// Parses a comma-separated run such as `⊥2.2.7,⊤1.7`.
pub fn parse_run(s: &str) -> Result<Run, GameError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("malformed move: {0}")]
    BadMove(String),
    #[error("{player} move {mv} is illegal here")]
    Illegal { player: Player, mv: Move },
    #[error("interpretation: {0}")]
    Interpretation(String),
    #[error("formula does not fit the interpretation: {0}")]
    Mismatch(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn move_tokens_split_at_the_last_dot() {
        let t: MoveToken = "2.2.7".parse().unwrap();
        assert_eq!(t.spec.to_string(), "2.2.");
        assert_eq!(t.payload, 7);
        let t: MoveToken = "7".parse().unwrap();
        assert_eq!(t.spec, OccurrenceSpec::root());
        assert_eq!(t.to_string(), "7");
        for bad in ["", "2.", "a", "1.-3", "0.1"] {
            assert!(bad.parse::<MoveToken>().is_err(), "{bad}");
        }
    }

    #[test]
    fn labelled_runs_parse() {
        let run = parse_run("⊥2.2.7, ⊤1.7,E:1.9,M:♠").unwrap();
        assert_eq!(run.len(), 4);
        assert_eq!(run[0].player, Player::Environment);
        assert_eq!(run[1].to_string(), "⊤1.7");
        assert_eq!(run[3], LabMove::spade(Player::Machine));
    }

    #[test]
    fn adversary_is_an_involution() {
        for p in [Player::Machine, Player::Environment] {
            assert_eq!(p.adversary().adversary(), p);
            assert_ne!(p.adversary(), p);
        }
    }
}
