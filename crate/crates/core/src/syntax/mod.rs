//! Formulas, terms, the concrete grammar and occurrence machinery.

mod formula;
mod occurrence;
mod parse;
mod print;
mod term;

use thiserror::Error;

pub use formula::{Atom, Formula, Fragment, Signature};
pub use occurrence::{ChoiceKind, OccurrenceSpec, Polarity, SurfaceOccurrence};
pub use parse::{parse, parse_term, parse_with_signature};
pub use term::{Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("predicate letter `{letter}` used with arity {found}, previously {expected}")]
    ArityConflict {
        letter: String,
        expected: usize,
        found: usize,
    },
    #[error("term `{0}` is substituted twice")]
    DuplicateSubstitution(Term),
    #[error("malformed occurrence specification `{0}`")]
    BadSpec(String),
    #[error("occurrence specification `{0}` does not resolve")]
    UnresolvedSpec(String),
}
