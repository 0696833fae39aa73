use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::rules::{
    b2_capture_free, co_rule_a_obligations, match_fresh, rule_a_obligations, Obligation,
};
use super::{Derivation, Proof, Refutation, Rule, Step};
use crate::classical::{classical_validity, ValidityVerdict};
use crate::syntax::{Formula, OccurrenceSpec, SurfaceOccurrence, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckFailure {
    #[error("the certificate has no steps")]
    Empty,
    #[error("step ids must strictly increase")]
    IdOrder,
    #[error("premise {0} is not an earlier step")]
    UnknownPremise(u64),
    #[error("formula already derived at step {0}")]
    RepeatedFormula(u64),
    #[error("elementarization is not classically valid")]
    Instable,
    #[error("elementarization is classically valid")]
    Stable,
    #[error("missing premise {0}")]
    MissingObligation(String),
    #[error("rule {0} takes exactly one premise")]
    PremiseCount(Rule),
    #[error("bad detail: {0}")]
    BadDetail(String),
    #[error("term {term} is captured at occurrence `{spec}`")]
    Capture { spec: OccurrenceSpec, term: Term },
    #[error("premise is not obtained by {0} from the conclusion")]
    NoMatch(Rule),
    #[error("classical check: {0}")]
    Classical(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Ok,
    Failure {
        step: u64,
        reason: CheckFailure,
    },
    /// Structurally sound, but the classical validity of these steps'
    /// elementarizations could not be settled within the budget.
    StabilityUnverified(Vec<u64>),
}

impl CheckOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, CheckOutcome::Ok)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Calculus {
    Cl2,
    Dual,
}

/// Checks a CL2 proof. `budget` bounds each classical validity check.
pub fn check_proof(p: &Proof, budget: u64) -> CheckOutcome {
    check(&p.0, budget, Calculus::Cl2)
}

/// Checks a CL2° proof of the formula it refutes.
pub fn check_refutation(r: &Refutation, budget: u64) -> CheckOutcome {
    check(&r.0, budget, Calculus::Dual)
}

fn check(d: &Derivation, budget: u64, calc: Calculus) -> CheckOutcome {
    if d.is_empty() {
        return CheckOutcome::Failure {
            step: 0,
            reason: CheckFailure::Empty,
        };
    }
    let mut seen: HashMap<u64, &Step> = HashMap::new();
    let mut formulas: HashMap<&Formula, u64> = HashMap::new();
    let mut last: Option<u64> = None;
    let mut unverified = Vec::new();
    for s in d.steps() {
        let fail = |reason| CheckOutcome::Failure { step: s.id, reason };
        if last.is_some_and(|l| s.id <= l) {
            return fail(CheckFailure::IdOrder);
        }
        last = Some(s.id);
        if let Some(&prev) = formulas.get(&s.formula) {
            return fail(CheckFailure::RepeatedFormula(prev));
        }
        let mut premises = Vec::new();
        for p in &s.premises {
            match seen.get(p) {
                Some(ps) => premises.push(&ps.formula),
                None => return fail(CheckFailure::UnknownPremise(*p)),
            }
        }
        match check_step(s, &premises, budget, calc) {
            Ok(true) => {}
            Ok(false) => unverified.push(s.id),
            Err(reason) => return fail(reason),
        }
        seen.insert(s.id, s);
        formulas.insert(&s.formula, s.id);
    }
    if unverified.is_empty() {
        CheckOutcome::Ok
    } else {
        CheckOutcome::StabilityUnverified(unverified)
    }
}

/// `Ok(false)` when the step is fine except for an unsettled stability check.
fn check_step(
    s: &Step,
    premises: &[&Formula],
    budget: u64,
    calc: Calculus,
) -> Result<bool, CheckFailure> {
    let f = &s.formula;
    match s.rule {
        Rule::A => {
            let verdict = classical_validity(&f.elementarize(), budget)
                .map_err(|e| CheckFailure::Classical(e.to_string()))?;
            let settled = match (verdict, calc) {
                (ValidityVerdict::Valid, Calculus::Cl2)
                | (ValidityVerdict::Invalid(_), Calculus::Dual) => true,
                (ValidityVerdict::Invalid(_), Calculus::Cl2) => return Err(CheckFailure::Instable),
                (ValidityVerdict::Valid, Calculus::Dual) => return Err(CheckFailure::Stable),
                (ValidityVerdict::Unknown, _) => false,
            };
            let obligations = match calc {
                Calculus::Cl2 => rule_a_obligations(f),
                Calculus::Dual => co_rule_a_obligations(f),
            };
            if let Some(ob) = obligations.iter().find(|ob| !discharged(ob, f, premises)) {
                return Err(CheckFailure::MissingObligation(ob.formula.to_string()));
            }
            Ok(settled)
        }
        Rule::B1 | Rule::B2 => {
            let [p] = premises else {
                return Err(CheckFailure::PremiseCount(s.rule));
            };
            check_b(s, p, calc).map(|()| true)
        }
    }
}

fn discharged(ob: &Obligation, host: &Formula, premises: &[&Formula]) -> bool {
    premises.iter().any(|p| ob.accepts(host, p))
}

/// Occurrences the B rules of `calc` may act on.
fn b_occurrences(f: &Formula, calc: Calculus, quantifier: bool) -> Vec<SurfaceOccurrence> {
    f.surface_choice_occurrences()
        .into_iter()
        .filter(|o| o.is_conjunctive_in_context() == (calc == Calculus::Dual))
        .filter(|o| o.kind.is_quantifier() == quantifier)
        .collect()
}

fn check_b(s: &Step, p: &Formula, calc: Calculus) -> Result<(), CheckFailure> {
    let f = &s.formula;
    let quantifier = s.rule == Rule::B2;
    let mut occs = b_occurrences(f, calc, quantifier);
    if let Some(spec) = &s.detail.spec {
        occs.retain(|o| &o.spec == spec);
        if occs.is_empty() {
            return Err(CheckFailure::BadDetail(format!(
                "`{spec}` is not a {} occurrence this rule acts on",
                if quantifier { "quantifier" } else { "choice" }
            )));
        }
    }
    let replace =
        |occ: &SurfaceOccurrence, g: Formula| f.replace_at(&occ.spec, g).expect("own occurrence");
    for occ in &occs {
        let ok = match (s.rule, calc) {
            (Rule::B1, _) => occ.operands().iter().enumerate().any(|(i, g)| {
                s.detail.index.is_none_or(|k| k == i as u64 + 1) && replace(occ, g.clone()) == *p
            }),
            (Rule::B2, Calculus::Cl2) => {
                let (x, body) = occ.quantified().expect("quantifier");
                let candidates: BTreeSet<Term> = match &s.detail.term {
                    Some(t) => BTreeSet::from([t.clone()]),
                    None => p
                        .free_terms()
                        .into_iter()
                        .chain(f.free_terms())
                        .chain(p.constants().into_iter().map(Term::Const))
                        .collect(),
                };
                if let Some(t) = &s.detail.term {
                    if !b2_capture_free(occ, t) {
                        return Err(CheckFailure::Capture {
                            spec: occ.spec.clone(),
                            term: t.clone(),
                        });
                    }
                }
                candidates
                    .iter()
                    .any(|t| b2_capture_free(occ, t) && replace(occ, body.instantiate(x, t)) == *p)
            }
            (Rule::B2, Calculus::Dual) => {
                let (x, body) = occ.quantified().expect("quantifier");
                let y0 = f.fresh_variable();
                let template = replace(occ, body.instantiate(x, &Term::Var(y0.clone())));
                match match_fresh(f, &template, &y0, p) {
                    None => false,
                    Some(used) => match (&s.detail.fresh, used) {
                        (None, _) => true,
                        (Some(want), Some(got)) => *want == got,
                        // the body ignores its variable; any name will do
                        (Some(_), None) => true,
                    },
                }
            }
            (Rule::A, _) => unreachable!(),
        };
        if ok {
            return Ok(());
        }
    }
    Err(CheckFailure::NoMatch(s.rule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{DerivationBuilder, Detail};
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    const EXAMPLE_1: &str = r#"{"id":1,"formula":"p(z) \\/ ~p(z)","rule":"A","premises":[]}
{"id":2,"formula":"cex y . (p(z) \\/ ~p(y))","rule":"B2","premises":[1],"detail":{"spec":"","term":"z"}}
{"id":3,"formula":"call x . cex y . (p(x) \\/ ~p(y))","rule":"A","premises":[2]}
"#;

    #[test]
    fn example_proof_checks() {
        let p = Proof(Derivation::from_jsonl(EXAMPLE_1).unwrap());
        assert_eq!(check_proof(&p, 1000), CheckOutcome::Ok);
        // without details the checker searches
        let bare = EXAMPLE_1.replace(r#","detail":{"spec":"","term":"z"}"#, "");
        let p = Proof(Derivation::from_jsonl(&bare).unwrap());
        assert_eq!(check_proof(&p, 1000), CheckOutcome::Ok);
    }

    #[test]
    fn instable_axiom_is_rejected() {
        let mut b = DerivationBuilder::new();
        let id = b.add(f("p + ~p"), Rule::A, vec![], Detail::default());
        let p = Proof(b.finish(id));
        assert_eq!(
            check_proof(&p, 1000),
            CheckOutcome::Failure {
                step: 1,
                reason: CheckFailure::Instable
            }
        );
    }

    #[test]
    fn capturing_instance_is_rejected() {
        let mut b = DerivationBuilder::new();
        let leaf = b.add(f("p(w) \\/ ~p(w)"), Rule::A, vec![], Detail::default());
        let one = b.add(
            f("call x . (p(x) \\/ ~p(x))"),
            Rule::A,
            vec![leaf],
            Detail::default(),
        );
        let two = b.add(
            f("cex y . call x . (p(x) \\/ ~p(y))"),
            Rule::B2,
            vec![one],
            Detail::term(OccurrenceSpec::root(), Term::var("x")),
        );
        let p = Proof(b.finish(two));
        match check_proof(&p, 1000) {
            CheckOutcome::Failure {
                step: 3,
                reason: CheckFailure::Capture { .. },
            } => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structural_faults() {
        let text = EXAMPLE_1.replace(r#""premises":[2]"#, r#""premises":[7]"#);
        let p = Proof(Derivation::from_jsonl(&text).unwrap());
        assert_eq!(
            check_proof(&p, 1000),
            CheckOutcome::Failure {
                step: 3,
                reason: CheckFailure::UnknownPremise(7)
            }
        );
        let text = EXAMPLE_1.replace(r#""id":2"#, r#""id":1"#);
        let p = Proof(Derivation::from_jsonl(&text).unwrap());
        assert!(matches!(
            check_proof(&p, 1000),
            CheckOutcome::Failure {
                reason: CheckFailure::IdOrder,
                ..
            }
        ));
        assert!(!check_proof(&Proof::default(), 10).is_ok());
    }

    #[test]
    fn missing_obligation_is_named() {
        let mut b = DerivationBuilder::new();
        let id = b.add(f("p(z) & q(z)"), Rule::A, vec![], Detail::default());
        match check_proof(&Proof(b.finish(id)), 100) {
            CheckOutcome::Failure {
                reason: CheckFailure::MissingObligation(m),
                ..
            } => assert_eq!(m, "p(z)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dual_rules() {
        // the `+` is a machine occurrence, so CL2° A wants both operands
        // refuted
        let mut b = DerivationBuilder::new();
        let p = b.add(f("p"), Rule::A, vec![], Detail::default());
        let np = b.add(f("~p"), Rule::A, vec![], Detail::default());
        let top = b.add(f("p + ~p"), Rule::A, vec![p, np], Detail::default());
        let r = Refutation(b.finish(top));
        assert_eq!(check_refutation(&r, 100), CheckOutcome::Ok);

        // a stable formula cannot be an A-step of CL2°
        let mut b = DerivationBuilder::new();
        let top = b.add(f("p \\/ ~p"), Rule::A, vec![], Detail::default());
        assert!(!check_refutation(&Refutation(b.finish(top)), 100).is_ok());

        // CL2° B2 at a fresh variable of any name
        let mut b = DerivationBuilder::new();
        let leaf = b.add(f("p(w) \\/ ~p(t)"), Rule::A, vec![], Detail::default());
        let top = b.add(
            f("call x . (p(x) \\/ ~p(t))"),
            Rule::B2,
            vec![leaf],
            Detail::default(),
        );
        let r = Refutation(b.finish(top));
        assert_eq!(check_refutation(&r, 100), CheckOutcome::Ok);
        let mut b = DerivationBuilder::new();
        let leaf = b.add(f("p(t) \\/ ~p(t)"), Rule::A, vec![], Detail::default());
        let top = b.add(
            f("call x . (p(x) \\/ ~p(t))"),
            Rule::B2,
            vec![leaf],
            Detail::default(),
        );
        assert!(!check_refutation(&Refutation(b.finish(top)), 100).is_ok());
    }
}
