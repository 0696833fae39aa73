//! Decision procedure for the fragment without blind quantifiers.
//!
//! `F` is provable iff one of three tests succeeds: rule A (the
//! elementarization is a tautology and every obligation is provable), rule B1
//! (some operand replacement at a machine occurrence is provable) or rule B2
//! (some instance at a machine quantifier occurrence is provable, trying a
//! fresh variable first and then every free term of `F`). Every recursive
//! call has fewer choice operators, so the recursion terminates.
//!
//! Unprovable formulas get a CL2° certificate: a stable `F` failed rule A
//! at some obligation, which becomes a CL2° B1/B2 step; an instable `F` is a
//! CL2° A step over all of its co-obligations, each of them unprovable.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::calculus::{
    check_proof, check_refutation, co_rule_a_obligations, enumerate_b1, enumerate_b2,
    rule_a_obligations, CheckOutcome, Derivation, DerivationBuilder, Detail, Obligation,
    ObligationKind, Proof, Refutation, Rule,
};
use crate::classical::is_tautology;
use crate::syntax::{parse, Formula, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("formula has blind quantifiers: {0}")]
    BlindQuantifiers(String),
    /// A co-obligation of an unprovable formula came out provable. The
    /// construction guarantees this cannot happen; reported rather than
    /// papered over.
    #[error("inconsistent refutation at {0}")]
    Inconsistent(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Provable(Proof),
    Unprovable(Refutation),
}

impl Verdict {
    pub fn is_provable(&self) -> bool {
        matches!(self, Verdict::Provable(_))
    }

    pub fn certificate(&self) -> &Derivation {
        match self {
            Verdict::Provable(p) => p,
            Verdict::Unprovable(r) => r,
        }
    }

    /// Runs the matching checker on the carried certificate.
    pub fn check(&self, budget: u64) -> CheckOutcome {
        match self {
            Verdict::Provable(p) => check_proof(p, budget),
            Verdict::Unprovable(r) => check_refutation(r, budget),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_provable() {
            "provable"
        } else {
            "unprovable"
        })
    }
}

/// The print of `f` with all variables renamed to v0, v1, ... in order of
/// first occurrence. Formulas differing by a renaming share a key.
pub fn canonical_key(f: &Formula) -> String {
    canonical_form(f).to_string()
}

pub fn canonical_form(f: &Formula) -> Formula {
    let mut names: HashMap<Var, Var> = HashMap::new();
    f.rename_variables(&mut |v| {
        let n = names.len();
        names
            .entry(v.clone())
            .or_insert_with(|| Var::canonical(n))
            .clone()
    })
}

/// Decides `f` and builds its certificate.
pub fn decide(f: &Formula) -> Result<Verdict, DecideError> {
    Decider::new().decide(f)
}

/// A decider with a memo table that persists across calls.
#[derive(Default)]
pub struct Decider {
    memo: HashMap<String, bool>,
}

impl Decider {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn decide(&mut self, f: &Formula) -> Result<Verdict, DecideError> {
        if f.has_blind_quantifiers() {
            return Err(DecideError::BlindQuantifiers(f.to_string()));
        }
        if self.provable(f) {
            let mut b = DerivationBuilder::new();
            let root = self.prove_into(f, &mut b);
            Ok(Verdict::Provable(Proof(b.finish(root))))
        } else {
            let mut b = DerivationBuilder::new();
            let root = self.refute_into(f, &mut b)?;
            Ok(Verdict::Unprovable(Refutation(b.finish(root))))
        }
    }

    /// Memoized provability; `f` must be free of blind quantifiers.
    pub fn provable(&mut self, f: &Formula) -> bool {
        let key = canonical_key(f);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.test_a(f) || self.b1_witness(f).is_some() || self.b2_witness(f).is_some();
        self.memo.insert(key, v);
        v
    }

    fn stable(f: &Formula) -> bool {
        is_tautology(&f.elementarize())
            .expect("elementarizations of blind-free formulas are elementary")
    }

    fn test_a(&mut self, f: &Formula) -> bool {
        Self::stable(f)
            && rule_a_obligations(f)
                .iter()
                .all(|ob| self.provable(&ob.formula))
    }

    fn b1_witness(&mut self, f: &Formula) -> Option<(Formula, Detail)> {
        enumerate_b1(f)
            .into_iter()
            .find(|(h, _, _)| self.provable(h))
            .map(|(h, spec, i)| (h, Detail::operand(spec, i)))
    }

    fn b2_witness(&mut self, f: &Formula) -> Option<(Formula, Detail)> {
        let fresh = [Term::Var(f.fresh_variable())];
        let step1 = enumerate_b2(f, &fresh);
        let step2 = enumerate_b2(f, &f.free_terms_ordered());
        step1
            .into_iter()
            .chain(step2)
            .find(|(h, _, _)| self.provable(h))
            .map(|(h, spec, t)| (h, Detail::term(spec, t)))
    }

    fn prove_into(&mut self, f: &Formula, b: &mut DerivationBuilder) -> u64 {
        if let Some(id) = b.get(f) {
            return id;
        }
        if self.test_a(f) {
            let mut premises: Vec<u64> = rule_a_obligations(f)
                .into_iter()
                .map(|ob| self.prove_into(&ob.formula, b))
                .collect();
            premises.sort_unstable();
            premises.dedup();
            return b.add(f.clone(), Rule::A, premises, Detail::default());
        }
        let (rule, (h, detail)) = match self.b1_witness(f) {
            Some(w) => (Rule::B1, w),
            None => (
                Rule::B2,
                self.b2_witness(f)
                    .expect("provable formulas pass some test"),
            ),
        };
        let p = self.prove_into(&h, b);
        b.add(f.clone(), rule, vec![p], detail)
    }

    fn refute_into(&mut self, f: &Formula, b: &mut DerivationBuilder) -> Result<u64, DecideError> {
        if let Some(id) = b.get(f) {
            return Ok(id);
        }
        if Self::stable(f) {
            // rule A failed on an obligation; it becomes a CL2° B step
            let ob = rule_a_obligations(f)
                .into_iter()
                .find(|ob| !self.provable(&ob.formula))
                .ok_or_else(|| DecideError::Inconsistent(f.to_string()))?;
            let p = self.refute_into(&ob.formula, b)?;
            let (rule, detail) = b_detail(&ob);
            return Ok(b.add(f.clone(), rule, vec![p], detail));
        }
        let mut premises = Vec::new();
        for ob in co_rule_a_obligations(f) {
            if self.provable(&ob.formula) {
                return Err(DecideError::Inconsistent(format!(
                    "{f} (premise {})",
                    ob.formula
                )));
            }
            premises.push(self.refute_into(&ob.formula, b)?);
        }
        premises.sort_unstable();
        premises.dedup();
        Ok(b.add(f.clone(), Rule::A, premises, Detail::default()))
    }
}

fn b_detail(ob: &Obligation) -> (Rule, Detail) {
    match &ob.kind {
        ObligationKind::Operand(i) => (Rule::B1, Detail::operand(ob.spec.clone(), *i)),
        ObligationKind::Fresh(y) => (Rule::B2, Detail::fresh(ob.spec.clone(), y.clone())),
        ObligationKind::Merge { .. } => unreachable!("CL2 rule A has no merge obligations"),
    }
}

/// One corpus entry's outcome.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub line: usize,
    pub text: String,
    pub expected: Option<bool>,
    pub outcome: Result<EntryResult, String>,
}

#[derive(Clone, Debug)]
pub struct EntryResult {
    pub verdict: Verdict,
    pub check: CheckOutcome,
    pub elapsed: Duration,
}

impl CorpusEntry {
    /// Verdict as expected (or no expectation given) and certificate ok.
    pub fn passed(&self) -> bool {
        match &self.outcome {
            Ok(r) => r.check.is_ok() && self.expected.is_none_or(|e| e == r.verdict.is_provable()),
            Err(_) => false,
        }
    }
}

/// Decides every entry of a corpus. One entry per line, optionally prefixed
/// by `provable:` or `unprovable:`; blank lines and `#` comments skipped.
/// Malformed lines are reported and do not stop the run.
pub fn decide_corpus(text: &str, budget: u64) -> Vec<CorpusEntry> {
    let mut decider = Decider::new();
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (expected, body) = if let Some(rest) = line.strip_prefix("provable:") {
            (Some(true), rest.trim())
        } else if let Some(rest) = line.strip_prefix("unprovable:") {
            (Some(false), rest.trim())
        } else {
            (None, line)
        };
        let start = Instant::now();
        let outcome = parse(body)
            .map_err(|e| e.to_string())
            .and_then(|f| decider.decide(&f).map_err(|e| e.to_string()))
            .map(|verdict| {
                let check = verdict.check(budget);
                EntryResult {
                    verdict,
                    check,
                    elapsed: start.elapsed(),
                }
            });
        out.push(CorpusEntry {
            line: n + 1,
            text: body.to_string(),
            expected,
            outcome,
        });
    }
    out
}
