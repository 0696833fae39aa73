//! CL2 proofs and CL2° refutations: rules, certificate format, checkers.
//!
//! A certificate is a list of steps, one JSON object per line:
//!
//! ```text
//! {"id":1,"formula":"p(z) \\/ ~p(z)","rule":"A","premises":[]}
//! {"id":2,"formula":"cex y . (p(z) \\/ ~p(y))","rule":"B2","premises":[1],"detail":{"spec":"","term":"z"}}
//! ```
//!
//! Premises must precede their conclusions; the last step is the theorem.
//! Steps may share premises, so a certificate is a DAG.

mod check;
mod rules;

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::syntax::{
    parse_term, parse_with_signature, Formula, OccurrenceSpec, Signature, Term, Var,
};

pub use check::{check_proof, check_refutation, CheckFailure, CheckOutcome};
pub use rules::{
    b2_capture_free, co_enumerate_b1, co_enumerate_b2, co_rule_a_obligations, enumerate_b1,
    enumerate_b2, match_fresh, rule_a_obligations, Obligation, ObligationKind,
};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Rule {
    A,
    B1,
    B2,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::A => "A",
            Rule::B1 => "B1",
            Rule::B2 => "B2",
        })
    }
}

/// Which occurrence a B-step resolved and how. Optional for rule A.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Detail {
    pub spec: Option<OccurrenceSpec>,
    /// B1: the operand chosen.
    pub index: Option<u64>,
    /// CL2 B2: the instantiating term.
    pub term: Option<Term>,
    /// CL2° B2: the fresh variable.
    pub fresh: Option<Var>,
}

impl Detail {
    pub fn operand(spec: OccurrenceSpec, index: u64) -> Self {
        Detail {
            spec: Some(spec),
            index: Some(index),
            ..Detail::default()
        }
    }

    pub fn term(spec: OccurrenceSpec, term: Term) -> Self {
        Detail {
            spec: Some(spec),
            term: Some(term),
            ..Detail::default()
        }
    }

    pub fn fresh(spec: OccurrenceSpec, fresh: Var) -> Self {
        Detail {
            spec: Some(spec),
            fresh: Some(fresh),
            ..Detail::default()
        }
    }

    fn is_empty(&self) -> bool {
        self == &Detail::default()
    }

    fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        if let Some(s) = &self.spec {
            m.insert("spec".into(), json!(s.to_string()));
        }
        if let Some(i) = self.index {
            m.insert("index".into(), json!(i));
        }
        if let Some(t) = &self.term {
            m.insert("term".into(), json!(t.to_string()));
        }
        if let Some(y) = &self.fresh {
            m.insert("fresh".into(), json!(y.to_string()));
        }
        Value::Object(m)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub id: u64,
    pub formula: Formula,
    pub rule: Rule,
    pub premises: Vec<u64>,
    pub detail: Detail,
}

impl Step {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "id": self.id,
            "formula": self.formula.to_string(),
            "rule": self.rule,
            "premises": self.premises,
        });
        if !self.detail.is_empty() {
            v["detail"] = self.detail.to_json();
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

#[derive(Deserialize)]
struct RawStep {
    id: u64,
    formula: String,
    rule: Rule,
    #[serde(default)]
    premises: Vec<u64>,
    #[serde(default)]
    detail: Option<RawDetail>,
}

#[derive(Deserialize, Default)]
struct RawDetail {
    spec: Option<String>,
    index: Option<u64>,
    term: Option<Value>,
    fresh: Option<String>,
}

/// A certificate: the common shape of proofs and refutations.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Derivation {
    steps: Vec<Step>,
}

impl Derivation {
    pub fn new(steps: Vec<Step>) -> Self {
        Derivation { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The formula of the last step.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn step(&self, id: u64) -> Option<&Step> {
        self.steps.iter().find(|s| s.id == id)
    }

    /// The step deriving `f`, if `f` is a certificate formula.
    pub fn step_for(&self, f: &Formula) -> Option<&Step> {
        self.steps.iter().find(|s| &s.formula == f)
    }

    pub fn index(&self) -> HashMap<&Formula, &Step> {
        self.steps.iter().map(|s| (&s.formula, s)).collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&s.to_json().to_string());
            out.push('\n');
        }
        out
    }

    /// Parses JSON lines; blank lines are skipped. All formulas share one
    /// arity signature.
    pub fn from_jsonl(text: &str) -> Result<Self, CertificateError> {
        let mut sig = Signature::new();
        let mut steps = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| CertificateError::Line {
                line: line_no,
                message,
            };
            let raw: RawStep = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
            let formula =
                parse_with_signature(&raw.formula, &mut sig).map_err(|e| err(e.to_string()))?;
            let d = raw.detail.unwrap_or_default();
            let spec = d
                .spec
                .map(|s| s.parse::<OccurrenceSpec>())
                .transpose()
                .map_err(|e| err(e.to_string()))?;
            let term = match d.term {
                None => None,
                Some(Value::String(s)) => Some(parse_term(&s).map_err(|e| err(e.to_string()))?),
                Some(Value::Number(n)) => Some(Term::Const(
                    n.as_u64().ok_or_else(|| err(format!("bad term {n}")))?,
                )),
                Some(other) => return Err(err(format!("bad term {other}"))),
            };
            let fresh = match d.fresh {
                None => None,
                Some(s) => match parse_term(&s).map_err(|e| err(e.to_string()))? {
                    Term::Var(v) => Some(v),
                    Term::Const(_) => return Err(err(format!("fresh `{s}` is not a variable"))),
                },
            };
            steps.push(Step {
                id: raw.id,
                formula,
                rule: raw.rule,
                premises: raw.premises,
                detail: Detail {
                    spec,
                    index: d.index,
                    term,
                    fresh,
                },
            });
        }
        Ok(Derivation { steps })
    }
}

/// A CL2 proof of its last formula.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Proof(pub Derivation);

/// A CL2° proof (a refutation in CL2's sense) of its last formula.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Refutation(pub Derivation);

impl Deref for Proof {
    type Target = Derivation;
    fn deref(&self) -> &Derivation {
        &self.0
    }
}

impl Deref for Refutation {
    type Target = Derivation;
    fn deref(&self) -> &Derivation {
        &self.0
    }
}

/// Builds a derivation bottom-up, reusing steps for repeated formulas.
#[derive(Default)]
pub struct DerivationBuilder {
    steps: Vec<Step>,
    ids: HashMap<Formula, u64>,
}

impl DerivationBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, f: &Formula) -> Option<u64> {
        self.ids.get(f).copied()
    }

    /// Adds a step unless `f` already has one; returns the step id.
    pub fn add(&mut self, f: Formula, rule: Rule, premises: Vec<u64>, detail: Detail) -> u64 {
        if let Some(id) = self.get(&f) {
            return id;
        }
        let id = self.steps.len() as u64 + 1;
        self.ids.insert(f.clone(), id);
        self.steps.push(Step {
            id,
            formula: f,
            rule,
            premises,
            detail,
        });
        id
    }

    /// The derivation with `root` as its last step: only steps reachable
    /// from it are kept, renumbered in order.
    pub fn finish(self, root: u64) -> Derivation {
        let mut keep = vec![false; self.steps.len() + 1];
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if !std::mem::replace(&mut keep[id as usize], true) {
                stack.extend(&self.steps[id as usize - 1].premises);
            }
        }
        let mut renumber = HashMap::new();
        let mut out = Vec::new();
        for s in self.steps.into_iter().filter(|s| keep[s.id as usize]) {
            let id = out.len() as u64 + 1;
            renumber.insert(s.id, id);
            out.push(Step {
                id,
                premises: s.premises.iter().map(|p| renumber[p]).collect(),
                ..s
            });
        }
        // the root's premises precede it, so it comes last once the
        // reachable steps are kept in creation order
        debug_assert_eq!(out.last().map(|s| s.id), renumber.get(&root).copied());
        Derivation { steps: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    const EXAMPLE_1: &str = r#"{"id":1,"formula":"p(z) \\/ ~p(z)","rule":"A","premises":[]}
{"id":2,"formula":"cex y . (p(z) \\/ ~p(y))","rule":"B2","premises":[1],"detail":{"spec":"","term":"z"}}
{"id":3,"formula":"call x . cex y . (p(x) \\/ ~p(y))","rule":"A","premises":[2]}
"#;

    #[test]
    fn jsonl_round_trip() {
        let d = Derivation::from_jsonl(EXAMPLE_1).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(
            d.conclusion(),
            Some(&parse("call x . cex y . (p(x) \\/ ~p(y))").unwrap())
        );
        assert_eq!(d.steps()[1].detail.term, Some(Term::var("z")));
        assert_eq!(Derivation::from_jsonl(&d.to_jsonl()).unwrap(), d);
    }

    #[test]
    fn jsonl_errors_name_the_line() {
        let bad = "{\"id\":1,\"formula\":\"p\",\"rule\":\"A\",\"premises\":[]}\n{\"id\":2,\"formula\":\"p(\",\"rule\":\"A\"}";
        match Derivation::from_jsonl(bad) {
            Err(CertificateError::Line { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let arity = "{\"id\":1,\"formula\":\"p\",\"rule\":\"A\"}\n{\"id\":2,\"formula\":\"p(x)\",\"rule\":\"A\"}";
        assert!(Derivation::from_jsonl(arity).is_err());
    }

    #[test]
    fn builder_dedups_and_prunes() {
        let mut b = DerivationBuilder::new();
        let p = parse("p \\/ ~p").unwrap();
        let a = b.add(p.clone(), Rule::A, vec![], Detail::default());
        assert_eq!(b.add(p, Rule::A, vec![], Detail::default()), a);
        let _unused = b.add(
            parse("q \\/ ~q").unwrap(),
            Rule::A,
            vec![],
            Detail::default(),
        );
        let top = b.add(
            parse("(p \\/ ~p) + r").unwrap(),
            Rule::B1,
            vec![a],
            Detail::default(),
        );
        let d = b.finish(top);
        assert_eq!(d.len(), 2);
        assert_eq!(d.steps()[1].premises, vec![1]);
    }
}
