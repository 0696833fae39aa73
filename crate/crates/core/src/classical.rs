//! Classical validity for elementary formulas.
//!
//! Quantifier-free formulas are decided exactly by Shannon expansion over
//! their atom keys; syntactically distinct atoms are independent. Quantified
//! formulas get two half-procedures sharing a step budget: a ground tableau
//! that can only say "valid", and a finite-model search that can only say
//! "invalid".

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Atom, Formula, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("formula is not elementary: {0}")]
    NotElementary(String),
    #[error("formula contains quantifiers: {0}")]
    Quantified(String),
    #[error("formula is a tautology; there is nothing to falsify")]
    Tautology,
    #[error("budget must be positive")]
    NonPositiveBudget,
}

/// Truth values for atom keys.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment(BTreeMap<Atom, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, a: &Atom) -> Option<bool> {
        self.0.get(a).copied()
    }

    pub fn insert(&mut self, a: Atom, v: bool) {
        self.0.insert(a, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, bool)> {
        self.0.iter().map(|(a, v)| (a, *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Evaluates a quantifier-free elementary formula; atoms missing from the
    /// assignment count as false.
    pub fn evaluate(&self, f: &Formula) -> bool {
        match f {
            Formula::Atom(a) => self.get(a).unwrap_or(false),
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Not(g) => !self.evaluate(g),
            Formula::And(gs) => gs.iter().all(|g| self.evaluate(g)),
            Formula::Or(gs) => gs.iter().any(|g| self.evaluate(g)),
            Formula::Implies(a, b) => !self.evaluate(a) || self.evaluate(b),
            other => panic!("Assignment::evaluate on non-propositional formula {other}"),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}:{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<(Atom, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Atom, bool)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// A finite first-order structure falsifying some formula.
///
/// Elements are `0..domain`; `terms` sends the formula's free terms to
/// elements and `truth` lists the true ground atoms (over elements).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    pub domain: u64,
    pub terms: BTreeMap<Term, u64>,
    pub truth: BTreeSet<Atom>,
}

impl FiniteModel {
    pub fn evaluate(&self, f: &Formula) -> bool {
        self.eval(f, &mut Vec::new())
    }

    fn element(&self, t: &Term, env: &[(Var, u64)]) -> u64 {
        if let Term::Var(v) = t {
            if let Some((_, e)) = env.iter().rev().find(|(x, _)| x == v) {
                return *e;
            }
        }
        self.terms.get(t).copied().unwrap_or(0)
    }

    fn eval(&self, f: &Formula, env: &mut Vec<(Var, u64)>) -> bool {
        match f {
            Formula::Atom(a) => {
                let args = a
                    .args
                    .iter()
                    .map(|t| Term::Const(self.element(t, env)))
                    .collect();
                self.truth.contains(&Atom::new(a.pred.clone(), args))
            }
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Not(g) => !self.eval(g, env),
            Formula::And(gs) => gs.iter().all(|g| self.eval(g, env)),
            Formula::Or(gs) => gs.iter().any(|g| self.eval(g, env)),
            Formula::Implies(a, b) => !self.eval(a, env) || self.eval(b, env),
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                let universal = matches!(f, Formula::Forall(..));
                for e in 0..self.domain {
                    env.push((x.clone(), e));
                    let v = self.eval(g, env);
                    env.pop();
                    if v != universal {
                        return v;
                    }
                }
                universal
            }
            other => panic!("FiniteModel::evaluate on non-elementary formula {other}"),
        }
    }
}

/// Why a formula is not classically valid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Falsifier {
    /// For quantifier-free formulas.
    Propositional(Assignment),
    Model(FiniteModel),
}

impl Falsifier {
    pub fn falsifies(&self, f: &Formula) -> bool {
        match self {
            Falsifier::Propositional(a) => !a.evaluate(f),
            Falsifier::Model(m) => !m.evaluate(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidityVerdict {
    Valid,
    Invalid(Falsifier),
    /// Budget ran out; only possible for quantified input.
    Unknown,
}

fn check_elementary(f: &Formula) -> Result<(), ClassicalError> {
    if f.is_elementary() {
        Ok(())
    } else {
        Err(ClassicalError::NotElementary(f.to_string()))
    }
}

fn check_propositional(f: &Formula) -> Result<(), ClassicalError> {
    check_elementary(f)?;
    if f.has_quantifiers() {
        return Err(ClassicalError::Quantified(f.to_string()));
    }
    Ok(())
}

pub fn is_tautology(f: &Formula) -> Result<bool, ClassicalError> {
    check_propositional(f)?;
    Ok(shannon(f, &mut { u64::MAX }).expect("unbounded").is_none())
}

pub fn falsifying_assignment(f: &Formula) -> Result<Assignment, ClassicalError> {
    check_propositional(f)?;
    shannon(f, &mut { u64::MAX })
        .expect("unbounded")
        .ok_or(ClassicalError::Tautology)
}

pub fn classical_validity(f: &Formula, budget: u64) -> Result<ValidityVerdict, ClassicalError> {
    check_elementary(f)?;
    if budget == 0 {
        return Err(ClassicalError::NonPositiveBudget);
    }
    if !f.has_quantifiers() {
        return Ok(match shannon(f, &mut { u64::MAX }).expect("unbounded") {
            None => ValidityVerdict::Valid,
            Some(a) => ValidityVerdict::Invalid(Falsifier::Propositional(a)),
        });
    }
    let mut tableau_budget = budget / 2 + 1;
    if tableau_valid(f, &mut tableau_budget) {
        return Ok(ValidityVerdict::Valid);
    }
    let mut search_budget = budget - budget / 2;
    Ok(match find_countermodel(f, &mut search_budget) {
        Some(m) => ValidityVerdict::Invalid(Falsifier::Model(m)),
        None => ValidityVerdict::Unknown,
    })
}

// ---------------------------------------------------------------- Shannon

#[derive(Clone, Debug)]
enum Prop {
    Var(usize),
    Const(bool),
    Not(Box<Prop>),
    And(Vec<Prop>),
    Or(Vec<Prop>),
}

fn to_prop(f: &Formula, keys: &mut Vec<Atom>, index: &mut HashMap<Atom, usize>) -> Prop {
    match f {
        Formula::Atom(a) => Prop::Var(*index.entry(a.clone()).or_insert_with(|| {
            keys.push(a.clone());
            keys.len() - 1
        })),
        Formula::Top => Prop::Const(true),
        Formula::Bot => Prop::Const(false),
        Formula::Not(g) => Prop::Not(Box::new(to_prop(g, keys, index))),
        Formula::And(gs) => Prop::And(gs.iter().map(|g| to_prop(g, keys, index)).collect()),
        Formula::Or(gs) => Prop::Or(gs.iter().map(|g| to_prop(g, keys, index)).collect()),
        Formula::Implies(a, b) => Prop::Or(vec![
            Prop::Not(Box::new(to_prop(a, keys, index))),
            to_prop(b, keys, index),
        ]),
        _ => unreachable!("checked propositional"),
    }
}

/// Cofactor with constant folding.
fn cofactor(p: &Prop, var: usize, val: bool) -> Prop {
    match p {
        Prop::Var(v) if *v == var => Prop::Const(val),
        Prop::Var(_) | Prop::Const(_) => p.clone(),
        Prop::Not(g) => match cofactor(g, var, val) {
            Prop::Const(b) => Prop::Const(!b),
            g => Prop::Not(Box::new(g)),
        },
        Prop::And(gs) | Prop::Or(gs) => {
            let conj = matches!(p, Prop::And(_));
            let mut out = Vec::with_capacity(gs.len());
            for g in gs {
                match cofactor(g, var, val) {
                    // absorbing element
                    Prop::Const(b) if b != conj => return Prop::Const(b),
                    Prop::Const(_) => {}
                    g => out.push(g),
                }
            }
            match out.len() {
                0 => Prop::Const(conj),
                1 => out.pop().unwrap(),
                _ if conj => Prop::And(out),
                _ => Prop::Or(out),
            }
        }
    }
}

fn first_var(p: &Prop) -> Option<usize> {
    match p {
        Prop::Var(v) => Some(*v),
        Prop::Const(_) => None,
        Prop::Not(g) => first_var(g),
        Prop::And(gs) | Prop::Or(gs) => gs.iter().find_map(first_var),
    }
}

/// `None` when the budget runs out, `Some(None)` for a tautology, otherwise a
/// falsifying assignment total on the formula's atom keys.
fn shannon(f: &Formula, budget: &mut u64) -> Option<Option<Assignment>> {
    let mut keys = Vec::new();
    let p = to_prop(f, &mut keys, &mut HashMap::new());
    let p = cofactor(&p, usize::MAX, false); // fold constants once
    let mut trail = vec![None; keys.len()];
    let found = falsify(&p, &mut trail, budget)?;
    Some(found.then(|| {
        keys.into_iter()
            .zip(trail)
            .map(|(k, v)| (k, v.unwrap_or(false)))
            .collect()
    }))
}

fn falsify(p: &Prop, trail: &mut [Option<bool>], budget: &mut u64) -> Option<bool> {
    *budget = budget.checked_sub(1)?;
    match p {
        Prop::Const(b) => Some(!b),
        _ => {
            let v = first_var(p).expect("non-constant has a variable");
            for val in [false, true] {
                trail[v] = Some(val);
                if falsify(&cofactor(p, v, val), trail, budget)? {
                    return Some(true);
                }
            }
            trail[v] = None;
            Some(false)
        }
    }
}

// ---------------------------------------------------------------- tableau

/// Negation normal form with bound variables renamed apart.
#[derive(Clone, Debug)]
enum Nnf {
    Lit(bool, Atom),
    Const(bool),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    All(Var, Box<Nnf>),
    Ex(Var, Box<Nnf>),
}

fn nnf(f: &Formula, positive: bool, counter: &mut usize, ren: &mut Vec<(Var, Var)>) -> Nnf {
    match f {
        Formula::Atom(a) => {
            let args = a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => match ren.iter().rev().find(|(x, _)| x == v) {
                        Some((_, y)) => Term::Var(y.clone()),
                        None => t.clone(),
                    },
                    _ => t.clone(),
                })
                .collect();
            Nnf::Lit(positive, Atom::new(a.pred.clone(), args))
        }
        Formula::Top => Nnf::Const(positive),
        Formula::Bot => Nnf::Const(!positive),
        Formula::Not(g) => nnf(g, !positive, counter, ren),
        Formula::And(gs) | Formula::Or(gs) => {
            let parts = gs.iter().map(|g| nnf(g, positive, counter, ren)).collect();
            if matches!(f, Formula::And(_)) == positive {
                Nnf::And(parts)
            } else {
                Nnf::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            let parts = vec![
                nnf(a, !positive, counter, ren),
                nnf(b, positive, counter, ren),
            ];
            if positive {
                Nnf::Or(parts)
            } else {
                Nnf::And(parts)
            }
        }
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            let y = Var::new(format!("_b{counter}"));
            *counter += 1;
            ren.push((x.clone(), y.clone()));
            let body = Box::new(nnf(g, positive, counter, ren));
            ren.pop();
            if matches!(f, Formula::Forall(..)) == positive {
                Nnf::All(y, body)
            } else {
                Nnf::Ex(y, body)
            }
        }
        _ => unreachable!("checked elementary"),
    }
}

fn nnf_subst(n: &Nnf, x: &Var, t: &Term) -> Nnf {
    match n {
        Nnf::Lit(s, a) => Nnf::Lit(
            *s,
            Atom::new(
                a.pred.clone(),
                a.args
                    .iter()
                    .map(|u| {
                        if u.as_var() == Some(x) {
                            t.clone()
                        } else {
                            u.clone()
                        }
                    })
                    .collect(),
            ),
        ),
        Nnf::Const(b) => Nnf::Const(*b),
        Nnf::And(gs) => Nnf::And(gs.iter().map(|g| nnf_subst(g, x, t)).collect()),
        Nnf::Or(gs) => Nnf::Or(gs.iter().map(|g| nnf_subst(g, x, t)).collect()),
        // bound names are unique, so no shadowing check is needed
        Nnf::All(y, g) => Nnf::All(y.clone(), Box::new(nnf_subst(g, x, t))),
        Nnf::Ex(y, g) => Nnf::Ex(y.clone(), Box::new(nnf_subst(g, x, t))),
    }
}

#[derive(Clone)]
struct Branch {
    lits: HashSet<(bool, Atom)>,
    todo: Vec<Nnf>,
    gammas: Vec<(Var, Nnf, BTreeSet<Term>)>,
    terms: Vec<Term>,
    params: usize,
}

enum Outcome {
    Closed,
    Open { round_limited: bool },
}

impl Branch {
    fn fresh_param(&mut self) -> Term {
        let t = Term::Var(Var::new(format!("_p{}", self.params)));
        self.params += 1;
        self.terms.push(t.clone());
        t
    }

    fn expand(mut self, rounds: usize, budget: &mut u64) -> Option<Outcome> {
        let mut rounds_used = 0;
        loop {
            while let Some(n) = self.todo.pop() {
                *budget = budget.checked_sub(1)?;
                match n {
                    Nnf::Const(true) => {}
                    Nnf::Const(false) => return Some(Outcome::Closed),
                    Nnf::Lit(s, a) => {
                        if self.lits.contains(&(!s, a.clone())) {
                            return Some(Outcome::Closed);
                        }
                        self.lits.insert((s, a));
                    }
                    Nnf::And(gs) => self.todo.extend(gs),
                    Nnf::Or(gs) => {
                        // every branch must close; the first open one decides
                        for g in gs {
                            let mut b = self.clone();
                            b.todo.push(g);
                            if let open @ Outcome::Open { .. } =
                                b.expand(rounds - rounds_used, budget)?
                            {
                                return Some(open);
                            }
                        }
                        return Some(Outcome::Closed);
                    }
                    Nnf::Ex(x, g) => {
                        let p = self.fresh_param();
                        self.todo.push(nnf_subst(&g, &x, &p));
                    }
                    Nnf::All(x, g) => {
                        if self.terms.is_empty() {
                            self.fresh_param();
                        }
                        let used: BTreeSet<Term> = self.terms.iter().cloned().collect();
                        for t in &used {
                            self.todo.push(nnf_subst(&g, &x, t));
                        }
                        self.gammas.push((x, *g, used));
                    }
                }
            }
            // gamma round: instantiate universals at terms they have not seen
            let mut fresh = Vec::new();
            for (x, g, used) in &mut self.gammas {
                for t in &self.terms {
                    if used.insert(t.clone()) {
                        fresh.push(nnf_subst(g, x, t));
                    }
                }
            }
            if fresh.is_empty() {
                return Some(Outcome::Open {
                    round_limited: false,
                });
            }
            if rounds_used == rounds {
                return Some(Outcome::Open {
                    round_limited: true,
                });
            }
            rounds_used += 1;
            self.todo.extend(fresh);
        }
    }
}

/// Tries to close a tableau for `~f` with growing instantiation depth.
fn tableau_valid(f: &Formula, budget: &mut u64) -> bool {
    let root = nnf(f, false, &mut 0, &mut Vec::new());
    for rounds in 0..8 {
        let branch = Branch {
            lits: HashSet::new(),
            todo: vec![root.clone()],
            gammas: Vec::new(),
            terms: f.free_terms_ordered(),
            params: 0,
        };
        match branch.expand(rounds, budget) {
            None => return false,
            Some(Outcome::Closed) => return true,
            Some(Outcome::Open {
                round_limited: false,
            }) => return false,
            Some(Outcome::Open {
                round_limited: true,
            }) => {}
        }
    }
    false
}

// ------------------------------------------------------ finite-model search

/// Restricted-growth maps of `n` items into at most `k` blocks.
fn restricted_growth(n: usize, k: u64) -> Vec<Vec<u64>> {
    fn go(i: usize, n: usize, k: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        let top = cur.iter().max().map_or(0, |m| m + 1).min(k - 1);
        for e in 0..=top {
            cur.push(e);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Expands blind quantifiers over `0..d` and maps free terms to elements.
fn ground(f: &Formula, d: u64, map: &BTreeMap<Term, u64>, env: &mut Vec<(Var, u64)>) -> Formula {
    match f {
        Formula::Atom(a) => {
            let args = a
                .args
                .iter()
                .map(|t| {
                    let bound = t
                        .as_var()
                        .and_then(|v| env.iter().rev().find(|(x, _)| x == v).map(|(_, e)| *e));
                    Term::Const(bound.unwrap_or_else(|| map.get(t).copied().unwrap_or(0)))
                })
                .collect();
            Formula::atom(a.pred.clone(), args)
        }
        Formula::Top | Formula::Bot => f.clone(),
        Formula::Not(g) => Formula::negate(ground(g, d, map, env)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| ground(g, d, map, env)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| ground(g, d, map, env)).collect()),
        Formula::Implies(a, b) => Formula::implies(ground(a, d, map, env), ground(b, d, map, env)),
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            let parts = (0..d)
                .map(|e| {
                    env.push((x.clone(), e));
                    let h = ground(g, d, map, env);
                    env.pop();
                    h
                })
                .collect::<Vec<_>>();
            let mut parts = parts;
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else if matches!(f, Formula::Forall(..)) {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        _ => unreachable!("checked elementary"),
    }
}

fn find_countermodel(f: &Formula, budget: &mut u64) -> Option<FiniteModel> {
    let terms = f.free_terms_ordered();
    for d in 1..=6u64 {
        for map in restricted_growth(terms.len(), d) {
            let map: BTreeMap<Term, u64> = terms.iter().cloned().zip(map).collect();
            let g = ground(f, d, &map, &mut Vec::new());
            *budget = budget.checked_sub(1)?;
            if let Some(a) = shannon(&g, budget)? {
                let truth = a
                    .iter()
                    .filter(|(_, v)| *v)
                    .map(|(k, _)| k.clone())
                    .collect();
                return Some(FiniteModel {
                    domain: d,
                    terms: map,
                    truth,
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn tautology_examples() {
        assert!(is_tautology(&f("p(z) \\/ ~p(z)")).unwrap());
        assert!(!is_tautology(&f("p(z) \\/ ~p(t)")).unwrap());
        assert!(is_tautology(&f("bot -> p")).unwrap());
        assert!(is_tautology(&f("((p -> q) -> p) -> p")).unwrap());
        assert!(is_tautology(&f("top")).unwrap());
        assert!(!is_tautology(&f("bot")).unwrap());
    }

    #[test]
    fn tautology_rejects_quantifiers_and_choice() {
        assert!(matches!(
            is_tautology(&f("fa x . p(x)")),
            Err(ClassicalError::Quantified(_))
        ));
        assert!(matches!(
            is_tautology(&f("p + q")),
            Err(ClassicalError::NotElementary(_))
        ));
    }

    #[test]
    fn falsifying_assignment_examples() {
        let a = falsifying_assignment(&f("p(z) \\/ ~p(t)")).unwrap();
        assert_eq!(a.get(&Atom::new("p", vec![Term::var("z")])), Some(false));
        assert_eq!(a.get(&Atom::new("p", vec![Term::var("t")])), Some(true));
        let a = falsifying_assignment(&f("p")).unwrap();
        assert_eq!(a.get(&Atom::new("p", vec![])), Some(false));
        let g = f("(p /\\ q) -> r");
        let a = falsifying_assignment(&g).unwrap();
        assert!(!a.evaluate(&g));
        assert_eq!(a.len(), 3);
        assert_eq!(
            falsifying_assignment(&f("p \\/ ~p")),
            Err(ClassicalError::Tautology)
        );
    }

    #[test]
    fn validity_examples() {
        assert_eq!(
            classical_validity(&f("ex y . fa x . (p(x) \\/ ~p(y))"), 10_000).unwrap(),
            ValidityVerdict::Valid
        );
        let g = f("p(z) \\/ ~p(t)");
        match classical_validity(&g, 10).unwrap() {
            ValidityVerdict::Invalid(Falsifier::Propositional(a)) => assert!(!a.evaluate(&g)),
            other => panic!("{other:?}"),
        }
        let g = f("fa x . ex y . r(x,y)");
        match classical_validity(&g, 10_000).unwrap() {
            ValidityVerdict::Invalid(Falsifier::Model(m)) => {
                assert_eq!(m.domain, 1);
                assert!(!m.evaluate(&g));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            classical_validity(&g, 0),
            Err(ClassicalError::NonPositiveBudget)
        );
    }

    #[test]
    fn naive_constant_substitution_trap_is_not_valid() {
        // true in no model where r is "x is not y" over two elements
        let g = f("ex y . fa x . (r(x,y) \\/ ~r(y,x))");
        match classical_validity(&g, 100_000).unwrap() {
            ValidityVerdict::Invalid(fals) => assert!(fals.falsifies(&g)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quantified_validities() {
        for s in [
            "(fa x . p(x)) -> p(c0)",
            "(fa x . p(x)) -> ex x . p(x)",
            "(ex x . fa y . r(x,y)) -> fa y . ex x . r(x,y)",
            "fa x . (p(x) -> p(x))",
            "(fa x . (p(x) -> q(x))) -> (fa x . p(x)) -> fa x . q(x)",
            "ex x . (p(x) -> fa y . p(y))",
        ] {
            let g = f(s);
            assert_eq!(
                classical_validity(&g, 100_000).unwrap(),
                ValidityVerdict::Valid,
                "{s}"
            );
        }
        for s in [
            "(fa y . ex x . r(x,y)) -> ex x . fa y . r(x,y)",
            "(ex x . p(x)) -> fa x . p(x)",
            "p(z) -> fa x . p(x)",
        ] {
            let g = f(s);
            match classical_validity(&g, 100_000).unwrap() {
                ValidityVerdict::Invalid(fals) => assert!(fals.falsifies(&g), "{s}"),
                other => panic!("{s}: {other:?}"),
            }
        }
    }

    #[test]
    fn restricted_growth_counts_are_bell_like() {
        assert_eq!(restricted_growth(3, 3).len(), 5);
        assert_eq!(restricted_growth(3, 2).len(), 4);
        assert_eq!(restricted_growth(0, 1), vec![Vec::<u64>::new()]);
    }
}
