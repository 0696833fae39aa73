use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{SyntaxError, Term, Var};

/// A non-logical atom `p(t1,...,tn)`.
///
/// Two atoms are the same classical key iff letter and argument tuple are
/// syntactically identical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A CL2 formula.
///
/// The n-ary connectives are kept flat: the `i`-th operand is what the move
/// prefix `i.` addresses. `Implies` is its own node, but polarity and
/// occurrence specification treat it as `~A \/ B`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ChoAnd(Vec<Formula>),
    ChoOr(Vec<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    ChoAll(Var, Box<Formula>),
    ChoEx(Var, Box<Formula>),
}

/// The syntactic fragment a formula belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Fragment {
    /// No choice operators: a formula of classical logic.
    Elementary,
    /// Has choice operators but no blind quantifiers.
    BlindFree,
    Full,
}

/// Predicate letter arities, fixed on first use.
pub type Signature = BTreeMap<String, usize>;

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::new(pred, args))
    }

    pub fn negate(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(x: Var, body: Formula) -> Self {
        Formula::Forall(x, Box::new(body))
    }

    pub fn exists(x: Var, body: Formula) -> Self {
        Formula::Exists(x, Box::new(body))
    }

    pub fn cho_all(x: Var, body: Formula) -> Self {
        Formula::ChoAll(x, Box::new(body))
    }

    pub fn cho_ex(x: Var, body: Formula) -> Self {
        Formula::ChoEx(x, Box::new(body))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => Vec::new(),
            Formula::Not(g)
            | Formula::Forall(_, g)
            | Formula::Exists(_, g)
            | Formula::ChoAll(_, g)
            | Formula::ChoEx(_, g) => vec![g],
            Formula::And(gs) | Formula::Or(gs) | Formula::ChoAnd(gs) | Formula::ChoOr(gs) => {
                gs.iter().collect()
            }
            Formula::Implies(a, b) => vec![a, b],
        }
    }

    pub fn is_choice(&self) -> bool {
        matches!(
            self,
            Formula::ChoAnd(_) | Formula::ChoOr(_) | Formula::ChoAll(..) | Formula::ChoEx(..)
        )
    }

    /// Number of choice-operator occurrences (the decider's termination measure).
    pub fn choice_count(&self) -> usize {
        let own = usize::from(self.is_choice());
        own + self
            .children()
            .into_iter()
            .map(Formula::choice_count)
            .sum::<usize>()
    }

    pub fn has_blind_quantifiers(&self) -> bool {
        matches!(self, Formula::Forall(..) | Formula::Exists(..))
            || self
                .children()
                .into_iter()
                .any(Formula::has_blind_quantifiers)
    }

    pub fn has_quantifiers(&self) -> bool {
        matches!(
            self,
            Formula::Forall(..) | Formula::Exists(..) | Formula::ChoAll(..) | Formula::ChoEx(..)
        ) || self.children().into_iter().any(Formula::has_quantifiers)
    }

    pub fn is_elementary(&self) -> bool {
        !self.is_choice() && self.children().into_iter().all(Formula::is_elementary)
    }

    pub fn fragment(&self) -> Fragment {
        if self.is_elementary() {
            Fragment::Elementary
        } else if self.has_blind_quantifiers() {
            Fragment::Full
        } else {
            Fragment::BlindFree
        }
    }

    /// Nesting depth of connectives and quantifiers; atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|g| g.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Every variable occurring anywhere, bound or free, binders included.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(a) => out.extend(a.args.iter().filter_map(Term::as_var).cloned()),
            Formula::Forall(x, g)
            | Formula::Exists(x, g)
            | Formula::ChoAll(x, g)
            | Formula::ChoEx(x, g) => {
                out.insert(x.clone());
                g.collect_variables(out);
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|g| g.collect_variables(out)),
        }
    }

    /// Whether `t` occurs anywhere in the formula (as a binder too, for variables).
    pub fn occurs(&self, t: &Term) -> bool {
        match t {
            Term::Var(v) => self.variables().contains(v),
            Term::Const(c) => self.constants().contains(c),
        }
    }

    pub fn constants(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| out.extend(a.args.iter().filter_map(Term::as_const)));
        out
    }

    /// Calls `visit` on every atom occurrence, left to right.
    pub fn visit_atoms(&self, visit: &mut dyn FnMut(&Atom)) {
        match self {
            Formula::Atom(a) => visit(a),
            _ => self
                .children()
                .into_iter()
                .for_each(|g| g.visit_atoms(visit)),
        }
    }

    /// Free terms in order of first (left-to-right, i.e. print-order)
    /// occurrence: free variables plus every constant.
    pub fn free_terms_ordered(&self) -> Vec<Term> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free_terms(&mut bound, &mut out);
        out
    }

    fn collect_free_terms(&self, bound: &mut Vec<Var>, out: &mut Vec<Term>) {
        match self {
            Formula::Atom(a) => {
                for t in &a.args {
                    let free = match t {
                        Term::Var(v) => !bound.contains(v),
                        Term::Const(_) => true,
                    };
                    if free && !out.contains(t) {
                        out.push(t.clone());
                    }
                }
            }
            Formula::Forall(x, g)
            | Formula::Exists(x, g)
            | Formula::ChoAll(x, g)
            | Formula::ChoEx(x, g) => {
                bound.push(x.clone());
                g.collect_free_terms(bound, out);
                bound.pop();
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|g| g.collect_free_terms(bound, out)),
        }
    }

    pub fn free_terms(&self) -> BTreeSet<Term> {
        self.free_terms_ordered().into_iter().collect()
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        self.free_terms_ordered()
            .into_iter()
            .filter_map(|t| match t {
                Term::Var(v) => Some(v),
                Term::Const(_) => None,
            })
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Simultaneous substitution `F[t1/t1',...,tn/tn']` of free occurrences.
    ///
    /// Bound occurrences are untouched; no capture avoidance is attempted
    /// (Rule B2 checks capture separately).
    pub fn substitute(&self, bindings: &[(Term, Term)]) -> Result<Formula, SyntaxError> {
        for (i, (src, _)) in bindings.iter().enumerate() {
            if bindings[..i].iter().any(|(s, _)| s == src) {
                return Err(SyntaxError::DuplicateSubstitution(src.clone()));
            }
        }
        let map: BTreeMap<&Term, &Term> = bindings.iter().map(|(s, t)| (s, t)).collect();
        Ok(self.subst_with(&map, &mut Vec::new()))
    }

    /// `F[x/t]` for a single binding; infallible.
    pub fn instantiate(&self, x: &Var, t: &Term) -> Formula {
        let src = Term::Var(x.clone());
        let map = BTreeMap::from([(&src, t)]);
        self.subst_with(&map, &mut Vec::new())
    }

    /// Replaces all free occurrences of the term `from` by `to`.
    pub fn replace_term(&self, from: &Term, to: &Term) -> Formula {
        let map = BTreeMap::from([(from, to)]);
        self.subst_with(&map, &mut Vec::new())
    }

    fn subst_with(&self, map: &BTreeMap<&Term, &Term>, bound: &mut Vec<Var>) -> Formula {
        let rec = |g: &Formula, bound: &mut Vec<Var>| Box::new(g.subst_with(map, bound));
        let all = |gs: &[Formula], bound: &mut Vec<Var>| {
            gs.iter().map(|g| g.subst_with(map, bound)).collect()
        };
        match self {
            Formula::Atom(a) => Formula::Atom(Atom {
                pred: a.pred.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| {
                        let free = match t {
                            Term::Var(v) => !bound.contains(v),
                            Term::Const(_) => true,
                        };
                        match map.get(t) {
                            Some(&to) if free => to.clone(),
                            _ => t.clone(),
                        }
                    })
                    .collect(),
            }),
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
            Formula::Not(g) => Formula::Not(rec(g, bound)),
            Formula::And(gs) => Formula::And(all(gs, bound)),
            Formula::Or(gs) => Formula::Or(all(gs, bound)),
            Formula::ChoAnd(gs) => Formula::ChoAnd(all(gs, bound)),
            Formula::ChoOr(gs) => Formula::ChoOr(all(gs, bound)),
            Formula::Implies(a, b) => Formula::Implies(rec(a, bound), rec(b, bound)),
            Formula::Forall(x, g)
            | Formula::Exists(x, g)
            | Formula::ChoAll(x, g)
            | Formula::ChoEx(x, g) => {
                bound.push(x.clone());
                let body = rec(g, bound);
                bound.pop();
                self.rebind(x.clone(), body)
            }
        }
    }

    /// Rebuilds a quantifier node of the same kind with a new binder and body.
    pub(crate) fn rebind(&self, x: Var, body: Box<Formula>) -> Formula {
        match self {
            Formula::Forall(..) => Formula::Forall(x, body),
            Formula::Exists(..) => Formula::Exists(x, body),
            Formula::ChoAll(..) => Formula::ChoAll(x, body),
            Formula::ChoEx(..) => Formula::ChoEx(x, body),
            _ => unreachable!("rebind on a non-quantifier"),
        }
    }

    /// Renames every variable occurrence (binders included) through `rename`.
    pub fn rename_variables(&self, rename: &mut dyn FnMut(&Var) -> Var) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(Atom {
                pred: a.pred.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => Term::Var(rename(v)),
                        c => c.clone(),
                    })
                    .collect(),
            }),
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
            Formula::Not(g) => Formula::negate(g.rename_variables(rename)),
            Formula::And(gs) => {
                Formula::And(gs.iter().map(|g| g.rename_variables(rename)).collect())
            }
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.rename_variables(rename)).collect()),
            Formula::ChoAnd(gs) => {
                Formula::ChoAnd(gs.iter().map(|g| g.rename_variables(rename)).collect())
            }
            Formula::ChoOr(gs) => {
                Formula::ChoOr(gs.iter().map(|g| g.rename_variables(rename)).collect())
            }
            Formula::Implies(a, b) => {
                let a = a.rename_variables(rename);
                Formula::implies(a, b.rename_variables(rename))
            }
            Formula::Forall(x, g)
            | Formula::Exists(x, g)
            | Formula::ChoAll(x, g)
            | Formula::ChoEx(x, g) => {
                let x = rename(x);
                self.rebind(x, Box::new(g.rename_variables(rename)))
            }
        }
    }

    /// The smallest canonical variable `vN` not occurring in the formula.
    pub fn fresh_variable(&self) -> Var {
        self.fresh_variables(1).remove(0)
    }

    /// The `n` smallest canonical variables not occurring in the formula.
    pub fn fresh_variables(&self, n: usize) -> Vec<Var> {
        let used: BTreeSet<usize> = self
            .variables()
            .iter()
            .filter_map(Var::canonical_index)
            .collect();
        (0..)
            .filter(|i| !used.contains(i))
            .take(n)
            .map(Var::canonical)
            .collect()
    }

    /// Elementarization: surface `+`/`cex` occurrences become `bot`, surface
    /// `&`/`call` occurrences become `top`.
    pub fn elementarize(&self) -> Formula {
        match self {
            Formula::ChoAnd(_) | Formula::ChoAll(..) => Formula::Top,
            Formula::ChoOr(_) | Formula::ChoEx(..) => Formula::Bot,
            Formula::Atom(_) | Formula::Top | Formula::Bot => self.clone(),
            Formula::Not(g) => Formula::negate(g.elementarize()),
            Formula::And(gs) => Formula::And(gs.iter().map(Formula::elementarize).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(Formula::elementarize).collect()),
            Formula::Implies(a, b) => Formula::implies(a.elementarize(), b.elementarize()),
            Formula::Forall(x, g) => Formula::forall(x.clone(), g.elementarize()),
            Formula::Exists(x, g) => Formula::exists(x.clone(), g.elementarize()),
        }
    }

    /// Checks and records predicate arities against `sig`.
    pub fn check_arity(&self, sig: &mut Signature) -> Result<(), SyntaxError> {
        let mut result = Ok(());
        self.visit_atoms(&mut |a| {
            if result.is_err() {
                return;
            }
            match sig.get(&a.pred) {
                Some(&n) if n != a.arity() => {
                    result = Err(SyntaxError::ArityConflict {
                        letter: a.pred.clone(),
                        expected: n,
                        found: a.arity(),
                    })
                }
                Some(_) => {}
                None => {
                    sig.insert(a.pred.clone(), a.arity());
                }
            }
        });
        result
    }

    /// Predicate letters with their arities (first-use arity wins).
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        self.visit_atoms(&mut |a| {
            sig.entry(a.pred.clone()).or_insert(a.arity());
        });
        sig
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
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
    fn substitution_example_from_game_pattern() {
        let g = f("p(x,y,z,u)");
        let out = g
            .substitute(&[
                (Term::var("x"), Term::var("z")),
                (Term::var("z"), Term::Const(6)),
                (Term::var("u"), Term::var("y")),
            ])
            .unwrap();
        assert_eq!(out, f("p(z,y,6,y)"));
    }

    #[test]
    fn substitution_skips_bound_occurrences() {
        let g = f("call x . p(x)");
        assert_eq!(
            g.substitute(&[(Term::var("x"), Term::Const(5))]).unwrap(),
            g
        );
        let h = f("p(x) \\/ ~p(y)");
        assert_eq!(
            h.substitute(&[(Term::var("y"), Term::var("x"))]).unwrap(),
            f("p(x) \\/ ~p(x)")
        );
    }

    #[test]
    fn substitution_rejects_duplicate_sources() {
        let err = f("p(x)")
            .substitute(&[
                (Term::var("x"), Term::Const(1)),
                (Term::var("x"), Term::Const(2)),
            ])
            .unwrap_err();
        assert!(matches!(err, SyntaxError::DuplicateSubstitution(_)));
    }

    #[test]
    fn empty_substitution_is_identity() {
        let g = f("call x . cex y . (p(x) \\/ ~q(y,z))");
        assert_eq!(g.substitute(&[]).unwrap(), g);
    }

    #[test]
    fn free_terms_examples() {
        assert_eq!(
            f("p(x,3) /\\ call y . q(y)").free_terms(),
            BTreeSet::from([Term::var("x"), Term::Const(3)])
        );
        assert!(f("call x . cex y . (p(x) \\/ ~p(y))")
            .free_terms()
            .is_empty());
        assert_eq!(
            f("fa x . p(x,z)").free_terms(),
            BTreeSet::from([Term::var("z")])
        );
    }

    #[test]
    fn fresh_variable_examples() {
        assert_eq!(f("p(v0)").fresh_variable(), Var::new("v1"));
        assert_eq!(f("top").fresh_variable(), Var::new("v0"));
        assert_eq!(f("p(v0,v2)").fresh_variable(), Var::new("v1"));
        // bound occurrences count as occurring
        assert_eq!(f("call v0 . p(v0)").fresh_variable(), Var::new("v1"));
    }

    #[test]
    fn elementarize_examples() {
        assert_eq!(
            f("call x . cex y . (p(x) \\/ ~p(y))").elementarize(),
            Formula::Top
        );
        let g = f("p(z) \\/ ~p(z)");
        assert_eq!(g.elementarize(), g);
        assert_eq!(
            f("(p + q) /\\ fa x . (r(x) & s)").elementarize(),
            f("bot /\\ fa x . top")
        );
    }

    #[test]
    fn fragment_examples() {
        assert_eq!(f("p -> p").fragment(), Fragment::Elementary);
        assert_eq!(f("call x . (p(x) + ~p(x))").fragment(), Fragment::BlindFree);
        assert_eq!(
            f("(fa x . p(x)) -> call x . p(x)").fragment(),
            Fragment::Full
        );
    }

    #[test]
    fn arity_is_enforced_across_formulas() {
        let mut sig = Signature::new();
        f("p(x) /\\ q").check_arity(&mut sig).unwrap();
        let err = f("p(x,y)").check_arity(&mut sig).unwrap_err();
        assert!(matches!(err, SyntaxError::ArityConflict { ref letter, .. } if letter == "p"));
    }

    #[test]
    fn choice_count_counts_all_choice_nodes() {
        assert_eq!(
            f("call x . cex y . (p(x) \\/ ~(p(y) + q))").choice_count(),
            3
        );
    }
}
