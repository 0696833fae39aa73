use std::fmt::{self, Write};

use super::Formula;

// Binding strength; higher binds tighter.
const IMPLIES: u8 = 1;
const DISJ: u8 = 2;
const CONJ: u8 = 3;
const UNARY: u8 = 4;

fn strength(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => IMPLIES,
        Formula::Or(_) | Formula::ChoOr(_) => DISJ,
        Formula::And(_) | Formula::ChoAnd(_) => CONJ,
        // quantifiers are handled by the `tail` rule
        _ => UNARY,
    }
}

fn is_quantifier(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Forall(..) | Formula::Exists(..) | Formula::ChoAll(..) | Formula::ChoEx(..)
    )
}

/// Writes `f` where the context requires binding strength `min` and where
/// `tail` says nothing follows at the current parenthesis level (so a
/// quantifier body may extend right).
fn write_formula(out: &mut dyn Write, f: &Formula, min: u8, tail: bool) -> fmt::Result {
    let parens = strength(f) < min || (is_quantifier(f) && !tail);
    if parens {
        out.write_char('(')?;
        write_bare(out, f, true)?;
        out.write_char(')')
    } else {
        write_bare(out, f, tail)
    }
}

fn write_list(out: &mut dyn Write, gs: &[Formula], sep: &str, min: u8, tail: bool) -> fmt::Result {
    for (i, g) in gs.iter().enumerate() {
        if i > 0 {
            out.write_str(sep)?;
        }
        write_formula(out, g, min, tail && i + 1 == gs.len())?;
    }
    Ok(())
}

fn write_bare(out: &mut dyn Write, f: &Formula, tail: bool) -> fmt::Result {
    match f {
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Top => out.write_str("top"),
        Formula::Bot => out.write_str("bot"),
        Formula::Not(g) => {
            out.write_char('~')?;
            write_formula(out, g, UNARY, tail)
        }
        // operands of an n-ary node must bind strictly tighter so nesting
        // survives a round trip
        Formula::Or(gs) => write_list(out, gs, " \\/ ", DISJ + 1, tail),
        Formula::ChoOr(gs) => write_list(out, gs, " + ", DISJ + 1, tail),
        Formula::And(gs) => write_list(out, gs, " /\\ ", CONJ + 1, tail),
        Formula::ChoAnd(gs) => write_list(out, gs, " & ", CONJ + 1, tail),
        Formula::Implies(a, b) => {
            write_formula(out, a, IMPLIES + 1, false)?;
            out.write_str(" -> ")?;
            write_formula(out, b, IMPLIES, tail)
        }
        Formula::Forall(x, g) => {
            write!(out, "fa {x} . ")?;
            write_formula(out, g, 0, true)
        }
        Formula::Exists(x, g) => {
            write!(out, "ex {x} . ")?;
            write_formula(out, g, 0, true)
        }
        Formula::ChoAll(x, g) => {
            write!(out, "call {x} . ")?;
            write_formula(out, g, 0, true)
        }
        Formula::ChoEx(x, g) => {
            write!(out, "cex {x} . ")?;
            write_formula(out, g, 0, true)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0, true)
    }
}
