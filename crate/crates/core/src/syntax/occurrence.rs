//! Surface occurrences and their F-specifications.
//!
//! A specification is a path of 1-based child indices rendered as a
//! dot-terminated string (`"3.2.2."`). It descends through `~`, `fa` and `ex`
//! without consuming an index and through `/\`, `\/`, `->` with one. When the
//! path is used up, resolution keeps descending through `~`, `fa`, `ex`, so
//! `""` addresses the choice node of `~(p & q)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Formula, SyntaxError, Var};

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct OccurrenceSpec(Vec<usize>);

impl OccurrenceSpec {
    pub fn root() -> Self {
        OccurrenceSpec(Vec::new())
    }

    pub fn new(path: Vec<usize>) -> Self {
        OccurrenceSpec(path)
    }

    pub fn path(&self) -> &[usize] {
        &self.0
    }

    pub fn child(&self, index: usize) -> Self {
        let mut path = self.0.clone();
        path.push(index);
        OccurrenceSpec(path)
    }
}

impl fmt::Display for OccurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.0 {
            write!(f, "{i}.")?;
        }
        Ok(())
    }
}

impl fmt::Debug for OccurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for OccurrenceSpec {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(OccurrenceSpec::root());
        }
        let body = s
            .strip_suffix('.')
            .ok_or_else(|| SyntaxError::BadSpec(s.to_string()))?;
        body.split('.')
            .map(|part| match part.parse::<usize>() {
                Ok(i) if i >= 1 && !part.starts_with('+') => Ok(i),
                _ => Err(SyntaxError::BadSpec(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(OccurrenceSpec)
    }
}

impl From<OccurrenceSpec> for String {
    fn from(s: OccurrenceSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for OccurrenceSpec {
    type Error = SyntaxError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// Head operator of a choice occurrence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ChoiceKind {
    ChoAnd,
    ChoOr,
    ChoAll,
    ChoEx,
}

impl ChoiceKind {
    pub fn of(f: &Formula) -> Option<ChoiceKind> {
        match f {
            Formula::ChoAnd(_) => Some(ChoiceKind::ChoAnd),
            Formula::ChoOr(_) => Some(ChoiceKind::ChoOr),
            Formula::ChoAll(..) => Some(ChoiceKind::ChoAll),
            Formula::ChoEx(..) => Some(ChoiceKind::ChoEx),
            _ => None,
        }
    }

    pub fn is_quantifier(self) -> bool {
        matches!(self, ChoiceKind::ChoAll | ChoiceKind::ChoEx)
    }

    /// `&`/`call` are conjunctive; `+`/`cex` disjunctive.
    pub fn is_conjunctive(self) -> bool {
        matches!(self, ChoiceKind::ChoAnd | ChoiceKind::ChoAll)
    }
}

/// A surface occurrence of a choice subformula.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurfaceOccurrence {
    pub spec: OccurrenceSpec,
    pub polarity: Polarity,
    pub kind: ChoiceKind,
    pub formula: Formula,
    /// Variables bound by blind quantifiers above the occurrence.
    pub binders: Vec<Var>,
}

impl SurfaceOccurrence {
    /// Whether the occurrence is one the formula-level rule `A` of CL2 treats
    /// as an obligation: positive `&`/`call` or negative `+`/`cex`.
    pub fn is_conjunctive_in_context(&self) -> bool {
        self.kind.is_conjunctive() == (self.polarity == Polarity::Positive)
    }

    /// Operands of a `&`/`+` occurrence.
    pub fn operands(&self) -> &[Formula] {
        match &self.formula {
            Formula::ChoAnd(gs) | Formula::ChoOr(gs) => gs,
            _ => &[],
        }
    }

    /// Binder and body of a `call`/`cex` occurrence.
    pub fn quantified(&self) -> Option<(&Var, &Formula)> {
        match &self.formula {
            Formula::ChoAll(x, g) | Formula::ChoEx(x, g) => Some((x, g)),
            _ => None,
        }
    }
}

impl Formula {
    /// Every surface choice occurrence in left-to-right order.
    pub fn surface_choice_occurrences(&self) -> Vec<SurfaceOccurrence> {
        let mut out = Vec::new();
        let mut binders = Vec::new();
        self.walk_surface(
            OccurrenceSpec::root(),
            Polarity::Positive,
            &mut binders,
            &mut out,
        );
        out
    }

    fn walk_surface(
        &self,
        spec: OccurrenceSpec,
        pol: Polarity,
        binders: &mut Vec<Var>,
        out: &mut Vec<SurfaceOccurrence>,
    ) {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => {}
            Formula::ChoAnd(_) | Formula::ChoOr(_) | Formula::ChoAll(..) | Formula::ChoEx(..) => {
                out.push(SurfaceOccurrence {
                    spec,
                    polarity: pol,
                    kind: ChoiceKind::of(self).expect("choice node"),
                    formula: self.clone(),
                    binders: binders.clone(),
                })
            }
            Formula::Not(g) => g.walk_surface(spec, pol.flip(), binders, out),
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                binders.push(x.clone());
                g.walk_surface(spec, pol, binders, out);
                binders.pop();
            }
            Formula::And(gs) | Formula::Or(gs) => {
                for (i, g) in gs.iter().enumerate() {
                    g.walk_surface(spec.child(i + 1), pol, binders, out);
                }
            }
            Formula::Implies(a, b) => {
                a.walk_surface(spec.child(1), pol.flip(), binders, out);
                b.walk_surface(spec.child(2), pol, binders, out);
            }
        }
    }

    /// The subformula occurrence addressed by `spec`, if any.
    pub fn resolve(&self, spec: &OccurrenceSpec) -> Option<&Formula> {
        self.locate(spec).map(|(g, _, _)| g)
    }

    /// Resolves `spec` and reports the polarity of the occurrence and the blind
    /// binders above it.
    pub fn locate(&self, spec: &OccurrenceSpec) -> Option<(&Formula, Polarity, Vec<Var>)> {
        let mut cur = self;
        let mut pol = Polarity::Positive;
        let mut binders = Vec::new();
        let mut path = spec.path();
        loop {
            match cur {
                Formula::Not(g) => {
                    pol = pol.flip();
                    cur = g;
                }
                Formula::Forall(x, g) | Formula::Exists(x, g) => {
                    binders.push(x.clone());
                    cur = g;
                }
                _ if path.is_empty() => return Some((cur, pol, binders)),
                Formula::And(gs) | Formula::Or(gs) => {
                    cur = gs.get(path[0].checked_sub(1)?)?;
                    path = &path[1..];
                }
                Formula::Implies(a, b) => {
                    match path[0] {
                        1 => {
                            pol = pol.flip();
                            cur = a;
                        }
                        2 => cur = b,
                        _ => return None,
                    }
                    path = &path[1..];
                }
                _ => return None,
            }
        }
    }

    /// Replaces the occurrence addressed by `spec` with `g`.
    pub fn replace_at(&self, spec: &OccurrenceSpec, g: Formula) -> Result<Formula, SyntaxError> {
        self.replace_path(spec.path(), g)
            .ok_or_else(|| SyntaxError::UnresolvedSpec(spec.to_string()))
    }

    fn replace_path(&self, path: &[usize], g: Formula) -> Option<Formula> {
        match self {
            Formula::Not(h) => Some(Formula::negate(h.replace_path(path, g)?)),
            Formula::Forall(x, h) => Some(Formula::forall(x.clone(), h.replace_path(path, g)?)),
            Formula::Exists(x, h) => Some(Formula::exists(x.clone(), h.replace_path(path, g)?)),
            _ if path.is_empty() => Some(g),
            Formula::And(hs) | Formula::Or(hs) => {
                let i = path[0].checked_sub(1)?;
                let mut hs = hs.clone();
                let slot = hs.get_mut(i)?;
                *slot = slot.replace_path(&path[1..], g)?;
                Some(match self {
                    Formula::And(_) => Formula::And(hs),
                    _ => Formula::Or(hs),
                })
            }
            Formula::Implies(a, b) => match path[0] {
                1 => Some(Formula::implies(
                    a.replace_path(&path[1..], g)?,
                    (**b).clone(),
                )),
                2 => Some(Formula::implies(
                    (**a).clone(),
                    b.replace_path(&path[1..], g)?,
                )),
                _ => None,
            },
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn spec_round_trips_through_text() {
        for s in ["", "1.", "3.2.2.", "10.1."] {
            assert_eq!(s.parse::<OccurrenceSpec>().unwrap().to_string(), s);
        }
        for bad in ["1", "0.", "a.", "1..", ".", "-1."] {
            assert!(bad.parse::<OccurrenceSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn second_occurrence_example_is_specified_by_3_2_2() {
        let g = "(r /\\ s)";
        let formula = f(&format!(
            "{g} \\/ (p + q) \\/ ~(p -> ex x . ({g} /\\ (p + q)))"
        ));
        let occs = formula.surface_choice_occurrences();
        assert_eq!(occs.len(), 2);
        assert_eq!(occs[0].spec.to_string(), "2.");
        assert_eq!(occs[0].polarity, Polarity::Positive);
        assert_eq!(occs[1].spec.to_string(), "3.2.2.");
        assert_eq!(occs[1].polarity, Polarity::Negative);
        assert_eq!(occs[1].formula, f("p + q"));
        assert_eq!(occs[1].binders, vec![Var::new("x")]);
    }

    #[test]
    fn whole_formula_occurrence_has_empty_spec() {
        let occs = f("call x . cex y . (p(x) \\/ ~p(y))").surface_choice_occurrences();
        assert_eq!(occs.len(), 1);
        assert_eq!(occs[0].spec, OccurrenceSpec::root());
        assert_eq!(occs[0].polarity, Polarity::Positive);
        assert_eq!(occs[0].kind, ChoiceKind::ChoAll);
    }

    #[test]
    fn choice_free_formula_has_no_occurrences() {
        assert!(f("p /\\ q").surface_choice_occurrences().is_empty());
    }

    #[test]
    fn replace_at_examples() {
        assert_eq!(
            f("call x . cex y . (p(x) \\/ ~p(y))")
                .replace_at(&OccurrenceSpec::root(), f("cex y . (p(z) \\/ ~p(y))"))
                .unwrap(),
            f("cex y . (p(z) \\/ ~p(y))")
        );
        assert_eq!(
            f("a \\/ b")
                .replace_at(&"2.".parse().unwrap(), f("c"))
                .unwrap(),
            f("a \\/ c")
        );
        assert_eq!(
            f("a -> (b & c)")
                .replace_at(&"2.".parse().unwrap(), f("b"))
                .unwrap(),
            f("a -> b")
        );
        assert!(f("a \\/ b")
            .replace_at(&"3.".parse().unwrap(), f("c"))
            .is_err());
    }

    #[test]
    fn empty_path_descends_through_negation_and_blind_quantifiers() {
        let g = f("~fa x . (p(x) & q)");
        assert_eq!(g.resolve(&OccurrenceSpec::root()), Some(&f("p(x) & q")));
        assert_eq!(
            g.replace_at(&OccurrenceSpec::root(), f("p(x)")).unwrap(),
            f("~fa x . p(x)")
        );
    }

    #[test]
    fn implication_antecedent_is_negative() {
        let occs = f("(p & q) -> (r + s)").surface_choice_occurrences();
        assert_eq!(occs[0].polarity, Polarity::Negative);
        assert_eq!(occs[1].polarity, Polarity::Positive);
        let occs = f("~((p & q) -> r)").surface_choice_occurrences();
        assert_eq!(occs[0].polarity, Polarity::Positive);
    }

    #[test]
    fn choice_operators_block_descent() {
        assert!(f("call x . (p & q)")
            .resolve(&"1.".parse().unwrap())
            .is_none());
        assert_eq!(f("(p & q) + r").surface_choice_occurrences().len(), 1);
    }
}
