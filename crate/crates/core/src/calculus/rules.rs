//! Premise generation for the rules of CL2 and of the dual calculus CL2°.
//!
//! Occurrences split by who moves there. Positive `&`/`call` and negative
//! `+`/`cex` are environment-move occurrences: CL2's rule A obligations live
//! there, as do the B1/B2 steps of CL2°. The remaining choice occurrences
//! are machine-move occurrences: CL2's B1/B2 and CL2°'s A obligations.

use std::collections::BTreeSet;

use crate::syntax::{Formula, OccurrenceSpec, SurfaceOccurrence, Term, Var};

/// How an obligation premise arises from its conclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObligationKind {
    /// The occurrence replaced by its `i`-th operand.
    Operand(u64),
    /// The quantifier occurrence replaced by its body at a fresh variable.
    Fresh(Var),
    /// As `Fresh`, and every free occurrence of `term` also renamed to the
    /// fresh variable (CL2° rule A, condition (iii)).
    Merge { term: Term, fresh: Var },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub spec: OccurrenceSpec,
    pub kind: ObligationKind,
    /// The premise, built with the formula's own fresh variable; any other
    /// variable not occurring in the conclusion is accepted in its place.
    pub formula: Formula,
}

impl Obligation {
    /// The variable standing for "some variable not occurring in F".
    pub fn placeholder(&self) -> Option<&Var> {
        match &self.kind {
            ObligationKind::Operand(_) => None,
            ObligationKind::Fresh(y) | ObligationKind::Merge { fresh: y, .. } => Some(y),
        }
    }

    /// Whether `premise` discharges this obligation for `host`.
    pub fn accepts(&self, host: &Formula, premise: &Formula) -> bool {
        match self.placeholder() {
            None => premise == &self.formula,
            Some(y0) => match_fresh(host, &self.formula, y0, premise).is_some(),
        }
    }
}

fn env_occurrences(f: &Formula) -> impl Iterator<Item = SurfaceOccurrence> {
    f.surface_choice_occurrences()
        .into_iter()
        .filter(SurfaceOccurrence::is_conjunctive_in_context)
}

fn machine_occurrences(f: &Formula) -> impl Iterator<Item = SurfaceOccurrence> {
    f.surface_choice_occurrences()
        .into_iter()
        .filter(|o| !o.is_conjunctive_in_context())
}

fn replace(f: &Formula, spec: &OccurrenceSpec, g: Formula) -> Formula {
    f.replace_at(spec, g)
        .expect("occurrence specs come from the formula")
}

fn operand_premises(f: &Formula, occ: &SurfaceOccurrence) -> Vec<(u64, Formula)> {
    occ.operands()
        .iter()
        .enumerate()
        .map(|(i, g)| (i as u64 + 1, replace(f, &occ.spec, g.clone())))
        .collect()
}

fn instance(f: &Formula, occ: &SurfaceOccurrence, t: &Term) -> Formula {
    let (x, body) = occ.quantified().expect("quantifier occurrence");
    replace(f, &occ.spec, body.instantiate(x, t))
}

fn obligations(f: &Formula, occs: Vec<SurfaceOccurrence>, merges: bool) -> Vec<Obligation> {
    let y0 = f.fresh_variable();
    let mut out = Vec::new();
    for occ in &occs {
        if !occ.kind.is_quantifier() {
            for (i, h) in operand_premises(f, occ) {
                out.push(Obligation {
                    spec: occ.spec.clone(),
                    kind: ObligationKind::Operand(i),
                    formula: h,
                });
            }
            continue;
        }
        let h = instance(f, occ, &Term::Var(y0.clone()));
        out.push(Obligation {
            spec: occ.spec.clone(),
            kind: ObligationKind::Fresh(y0.clone()),
            formula: h.clone(),
        });
        if merges {
            for t in f.free_terms_ordered() {
                out.push(Obligation {
                    spec: occ.spec.clone(),
                    kind: ObligationKind::Merge {
                        term: t.clone(),
                        fresh: y0.clone(),
                    },
                    formula: h.replace_term(&t, &Term::Var(y0.clone())),
                });
            }
        }
    }
    out
}

/// Premises CL2's rule A demands of `f`.
pub fn rule_a_obligations(f: &Formula) -> Vec<Obligation> {
    obligations(f, env_occurrences(f).collect(), false)
}

/// Premises CL2°'s rule A demands of `f`: conditions (i)-(iii).
pub fn co_rule_a_obligations(f: &Formula) -> Vec<Obligation> {
    obligations(f, machine_occurrences(f).collect(), true)
}

/// CL2 rule B1 premises: a machine-move `&`/`+` occurrence resolved.
pub fn enumerate_b1(f: &Formula) -> Vec<(Formula, OccurrenceSpec, u64)> {
    machine_occurrences(f)
        .filter(|o| !o.kind.is_quantifier())
        .flat_map(|o| {
            operand_premises(f, &o)
                .into_iter()
                .map(move |(i, h)| (h, o.spec.clone(), i))
        })
        .collect()
}

/// CL2° rule B1 premises: an environment-move `&`/`+` occurrence resolved.
pub fn co_enumerate_b1(f: &Formula) -> Vec<(Formula, OccurrenceSpec, u64)> {
    env_occurrences(f)
        .filter(|o| !o.kind.is_quantifier())
        .flat_map(|o| {
            operand_premises(f, &o)
                .into_iter()
                .map(move |(i, h)| (h, o.spec.clone(), i))
        })
        .collect()
}

/// Whether some free occurrence of `x` in `g` sits under a binder of `t`.
fn free_occurrence_under(g: &Formula, x: &Var, t: &Var) -> bool {
    fn go(g: &Formula, x: &Var, t: &Var, under_t: bool) -> bool {
        match g {
            Formula::Atom(a) => under_t && a.args.iter().any(|u| u.as_var() == Some(x)),
            Formula::Forall(y, h)
            | Formula::Exists(y, h)
            | Formula::ChoAll(y, h)
            | Formula::ChoEx(y, h) => y != x && go(h, x, t, under_t || y == t),
            _ => g.children().into_iter().any(|h| go(h, x, t, under_t)),
        }
    }
    go(g, x, t, false)
}

/// The side condition of B2 for a variable term `t`: neither the occurrence
/// nor the free occurrences of its variable in the body are in the scope of
/// `fa t`, `ex t`, `call t` or `cex t`.
pub fn b2_capture_free(occ: &SurfaceOccurrence, t: &Term) -> bool {
    let Term::Var(t) = t else {
        return true;
    };
    let (x, body) = occ.quantified().expect("quantifier occurrence");
    !occ.binders.contains(t) && !free_occurrence_under(body, x, t)
}

/// CL2 rule B2 premises over the supplied candidate terms, capture-filtered.
pub fn enumerate_b2(f: &Formula, candidates: &[Term]) -> Vec<(Formula, OccurrenceSpec, Term)> {
    let mut out = Vec::new();
    for occ in machine_occurrences(f).filter(|o| o.kind.is_quantifier()) {
        for t in candidates {
            if b2_capture_free(&occ, t) {
                out.push((instance(f, &occ, t), occ.spec.clone(), t.clone()));
            }
        }
    }
    out
}

/// CL2° rule B2 premises, each at `f`'s own fresh variable.
pub fn co_enumerate_b2(f: &Formula) -> Vec<(Formula, OccurrenceSpec, Var)> {
    let y0 = f.fresh_variable();
    env_occurrences(f)
        .filter(|o| o.kind.is_quantifier())
        .map(|o| (instance(f, &o, &Term::Var(y0.clone())), o.spec, y0.clone()))
        .collect()
}

/// Matches `candidate` against `template` up to the choice of the fresh
/// variable: `template` uses `y0`, which does not occur in `host`; the
/// candidate may use any single variable `y` not occurring in `host`
/// instead. Returns the variable used (`None` if the candidate has no new
/// variable at all).
pub fn match_fresh(
    host: &Formula,
    template: &Formula,
    y0: &Var,
    candidate: &Formula,
) -> Option<Option<Var>> {
    let old = host.variables();
    let new: BTreeSet<Var> = candidate.variables().difference(&old).cloned().collect();
    match new.len() {
        0 => (candidate == template && !template.variables().contains(y0)).then_some(None),
        1 => {
            let y = new.into_iter().next().unwrap();
            let renamed = candidate.replace_term(&Term::Var(y.clone()), &Term::Var(y0.clone()));
            (renamed == *template).then_some(Some(y))
        }
        _ => None,
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
    fn rule_a_obligation_examples() {
        let ob = rule_a_obligations(&f("call x . cex y . (p(x) \\/ ~p(y))"));
        assert_eq!(ob.len(), 1);
        assert_eq!(ob[0].formula, f("cex y . (p(v0) \\/ ~p(y))"));
        assert!(ob[0].accepts(
            &f("call x . cex y . (p(x) \\/ ~p(y))"),
            &f("cex y . (p(z) \\/ ~p(y))")
        ));
        assert!(rule_a_obligations(&f("p(z) \\/ ~p(z)")).is_empty());
        assert!(rule_a_obligations(&f("(p & q) -> r")).is_empty());
    }

    #[test]
    fn b1_examples() {
        let got = enumerate_b1(&f("(p & q) -> r"));
        assert_eq!(
            got,
            vec![
                (f("p -> r"), "1.".parse().unwrap(), 1),
                (f("q -> r"), "1.".parse().unwrap(), 2)
            ]
        );
        assert!(enumerate_b1(&f("p /\\ q")).is_empty());
    }

    #[test]
    fn b2_examples() {
        let got = enumerate_b2(&f("cex y . (p(z) \\/ ~p(y))"), &[Term::var("z")]);
        assert_eq!(
            got,
            vec![(f("p(z) \\/ ~p(z)"), OccurrenceSpec::root(), Term::var("z"))]
        );
    }

    #[test]
    fn b2_capture_uses_all_four_binders() {
        for text in [
            "cex y . call z . p(y,z)",
            "cex y . cex z . p(y,z)",
            "cex y . fa z . p(y,z)",
            "cex y . ex z . p(y,z)",
        ] {
            let g = f(text);
            assert!(enumerate_b2(&g, &[Term::var("z")]).is_empty(), "{text}");
            assert_eq!(enumerate_b2(&g, &[Term::var("w")]).len(), 1);
        }
        // the occurrence itself under a blind binder of the term
        let g = f("fa z . cex y . p(y,z)");
        assert!(enumerate_b2(&g, &[Term::var("z")]).is_empty());
        // constants never capture
        assert_eq!(enumerate_b2(&g, &[Term::Const(4)]).len(), 1);
        // a binder of t that does not cover the quantified variable is fine
        let g = f("cex y . (p(y) \\/ call z . q(z))");
        assert_eq!(enumerate_b2(&g, &[Term::var("z")]).len(), 1);
    }

    #[test]
    fn co_obligations_include_term_merges() {
        let g = f("call x . (p(x) \\/ ~p(t))");
        // the `call` is positive: an environment occurrence, so CL2° rule A
        // has nothing to ask
        assert!(co_rule_a_obligations(&g).is_empty());
        let g = f("cex y . (p(z) \\/ ~p(y))");
        let ob = co_rule_a_obligations(&g);
        let got: Vec<String> = ob.iter().map(|o| o.formula.to_string()).collect();
        assert_eq!(got, ["p(z) \\/ ~p(v0)", "p(v0) \\/ ~p(v0)"]);
    }

    #[test]
    fn fresh_matching() {
        let host = f("call x . p(x,z)");
        let template = f("p(v0,z)");
        let y0 = Var::new("v0");
        assert_eq!(
            match_fresh(&host, &template, &y0, &f("p(w,z)")),
            Some(Some(Var::new("w")))
        );
        assert_eq!(
            match_fresh(&host, &template, &y0, &f("p(v0,z)")),
            Some(Some(y0.clone()))
        );
        // z occurs in the host, so it is not fresh
        assert_eq!(match_fresh(&host, &template, &y0, &f("p(z,z)")), None);
        assert_eq!(match_fresh(&host, &template, &y0, &f("p(3,z)")), None);
        // no new variable needed when the body ignores its variable
        let host = f("call x . q");
        assert_eq!(match_fresh(&host, &f("q"), &y0, &f("q")), Some(None));
    }

    #[test]
    fn every_premise_has_fewer_choice_operators() {
        for text in [
            "call x . cex y . (p(x) \\/ ~p(y))",
            "(p & q) -> (r + s)",
            "cex y . call x . (p(x) \\/ ~p(y))",
        ] {
            let g = f(text);
            let n = g.choice_count();
            let all: Vec<Formula> = rule_a_obligations(&g)
                .into_iter()
                .chain(co_rule_a_obligations(&g))
                .map(|o| o.formula)
                .chain(enumerate_b1(&g).into_iter().map(|p| p.0))
                .chain(co_enumerate_b1(&g).into_iter().map(|p| p.0))
                .chain(
                    enumerate_b2(&g, &g.free_terms_ordered())
                        .into_iter()
                        .map(|p| p.0),
                )
                .chain(co_enumerate_b2(&g).into_iter().map(|p| p.0))
                .collect();
            assert!(!all.is_empty());
            assert!(all.iter().all(|h| h.choice_count() < n));
        }
    }
}
