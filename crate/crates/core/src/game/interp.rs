use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::GameError;
use crate::syntax::{Atom, Formula, Signature, Term, Var};

/// A finite map from variables to constants; every other variable is 0.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(BTreeMap<Var, u64>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: &Var) -> u64 {
        self.0.get(x).copied().unwrap_or(0)
    }

    /// The explicit entry, without the default.
    pub fn lookup(&self, x: &Var) -> Option<u64> {
        self.0.get(x).copied()
    }

    pub fn insert(&mut self, x: Var, c: u64) {
        self.0.insert(x, c);
    }

    pub fn remove(&mut self, x: &Var) {
        self.0.remove(x);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, u64)> {
        self.0.iter().map(|(x, c)| (x, *c))
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.values().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Keeps only `vars`, filling in the default explicitly, so two
    /// valuations that agree on `vars` restrict to equal values.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Valuation {
        Valuation(vars.iter().map(|x| (x.clone(), self.get(x))).collect())
    }

    /// The value of a term: constants denote themselves.
    pub fn term(&self, t: &Term) -> u64 {
        match t {
            Term::Var(x) => self.get(x),
            Term::Const(c) => *c,
        }
    }
}

impl FromIterator<(Var, u64)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Var, u64)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}/{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Table {
    arity: usize,
    // row-major, first argument most significant
    values: Vec<bool>,
}

/// Domain `0..d` plus a total truth table per predicate letter.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Interpretation {
    domain: u64,
    tables: BTreeMap<String, Table>,
}

fn rows(domain: u64, arity: usize) -> usize {
    (domain as usize).pow(arity as u32)
}

impl Interpretation {
    /// Every letter of `sig` constantly `value`.
    pub fn uniform(sig: &Signature, domain: u64, value: bool) -> Self {
        assert!(domain >= 1, "domain must be nonempty");
        let tables = sig
            .iter()
            .map(|(p, &n)| {
                let t = Table {
                    arity: n,
                    values: vec![value; rows(domain, n)],
                };
                (p.clone(), t)
            })
            .collect();
        Interpretation { domain, tables }
    }

    /// Number of table cells for `sig` over `domain`.
    pub fn table_bits(sig: &Signature, domain: u64) -> usize {
        sig.values().map(|&n| rows(domain, n)).sum()
    }

    /// The interpretation whose cells, in letter order then row order, are
    /// the low bits of `bits`.
    pub fn from_bits(sig: &Signature, domain: u64, bits: u64) -> Self {
        let mut out = Self::uniform(sig, domain, false);
        let mut k = 0;
        for t in out.tables.values_mut() {
            for v in t.values.iter_mut() {
                *v = k < 64 && bits >> k & 1 == 1;
                k += 1;
            }
        }
        out
    }

    pub fn random(sig: &Signature, domain: u64, rng: &mut impl Rng) -> Self {
        let mut out = Self::uniform(sig, domain, false);
        for t in out.tables.values_mut() {
            t.values.iter_mut().for_each(|v| *v = rng.gen());
        }
        out
    }

    /// All interpretations of `sig` over `domain`, when there are at most
    /// `2^max_bits` of them.
    pub fn enumerate(sig: &Signature, domain: u64, max_bits: usize) -> Option<Vec<Self>> {
        let bits = Self::table_bits(sig, domain);
        (bits <= max_bits && bits < 64).then(|| {
            (0..1u64 << bits)
                .map(|b| Self::from_bits(sig, domain, b))
                .collect()
        })
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    pub fn arity(&self, pred: &str) -> Option<usize> {
        self.tables.get(pred).map(|t| t.arity)
    }

    pub fn letters(&self) -> impl Iterator<Item = (&str, usize)> {
        self.tables.iter().map(|(p, t)| (p.as_str(), t.arity))
    }

    fn row(&self, args: &[u64]) -> Option<usize> {
        args.iter().try_fold(0usize, |acc, &a| {
            (a < self.domain).then(|| acc * self.domain as usize + a as usize)
        })
    }

    /// `None` when the letter is unknown, the arity is wrong or an argument
    /// lies outside the domain.
    pub fn holds(&self, pred: &str, args: &[u64]) -> Option<bool> {
        let t = self.tables.get(pred)?;
        if t.arity != args.len() {
            return None;
        }
        Some(t.values[self.row(args)?])
    }

    /// Sets one cell, adding an all-false table for a new letter.
    pub fn set(&mut self, pred: &str, args: &[u64], value: bool) -> Result<(), GameError> {
        let domain = self.domain;
        let row = self.row(args).ok_or_else(|| {
            GameError::Interpretation(format!("argument out of domain in {pred}{args:?}"))
        })?;
        let t = self
            .tables
            .entry(pred.to_string())
            .or_insert_with(|| Table {
                arity: args.len(),
                values: vec![false; rows(domain, args.len())],
            });
        if t.arity != args.len() {
            return Err(GameError::Interpretation(format!(
                "{pred} has arity {}, got {} arguments",
                t.arity,
                args.len()
            )));
        }
        t.values[row] = value;
        Ok(())
    }

    /// Checks that `f` only mentions known letters at their arity and
    /// constants inside the domain.
    pub fn fits(&self, f: &Formula) -> Result<(), GameError> {
        let mut problem = None;
        f.visit_atoms(&mut |a| {
            if problem.is_some() {
                return;
            }
            match self.arity(&a.pred) {
                None => problem = Some(format!("no table for `{}`", a.pred)),
                Some(n) if n != a.arity() => {
                    problem = Some(format!("`{}` has arity {n} in the interpretation", a.pred))
                }
                _ => {}
            }
        });
        if let Some(p) = problem {
            return Err(GameError::Mismatch(p));
        }
        if let Some(c) = f.constants().into_iter().find(|&c| c >= self.domain) {
            return Err(GameError::Mismatch(format!(
                "constant {c} outside domain 0..{}",
                self.domain
            )));
        }
        Ok(())
    }

    /// Truth of an elementary formula; blind quantifiers range over the
    /// domain. Unknown letters and out-of-domain arguments read as false.
    pub fn eval(&self, f: &Formula, e: &Valuation) -> bool {
        self.eval_in(f, e, &mut Vec::new())
    }

    pub fn eval_atom(&self, a: &Atom, e: &Valuation) -> bool {
        let args: Vec<u64> = a.args.iter().map(|t| e.term(t)).collect();
        self.holds(&a.pred, &args).unwrap_or(false)
    }

    fn eval_in(&self, f: &Formula, e: &Valuation, env: &mut Vec<(Var, u64)>) -> bool {
        match f {
            Formula::Atom(a) => {
                let args: Vec<u64> = a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(x) => env
                            .iter()
                            .rev()
                            .find(|(y, _)| y == x)
                            .map_or_else(|| e.get(x), |(_, c)| *c),
                        Term::Const(c) => *c,
                    })
                    .collect();
                self.holds(&a.pred, &args).unwrap_or(false)
            }
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Not(g) => !self.eval_in(g, e, env),
            Formula::And(gs) => gs.iter().all(|g| self.eval_in(g, e, env)),
            Formula::Or(gs) => gs.iter().any(|g| self.eval_in(g, e, env)),
            Formula::Implies(a, b) => !self.eval_in(a, e, env) || self.eval_in(b, e, env),
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                let universal = matches!(f, Formula::Forall(..));
                for c in 0..self.domain {
                    env.push((x.clone(), c));
                    let v = self.eval_in(g, e, env);
                    env.pop();
                    if v != universal {
                        return v;
                    }
                }
                universal
            }
            other => panic!("Interpretation::eval on non-elementary formula {other}"),
        }
    }

    /// `{"domain": d, "tables": {"p/2": [[[0,1], true], ...]}}`
    pub fn to_json(&self) -> Value {
        let mut tables = serde_json::Map::new();
        for (p, t) in &self.tables {
            let mut cells = Vec::new();
            let mut args = vec![0u64; t.arity];
            for &v in &t.values {
                cells.push(json!([args.clone(), v]));
                // odometer over the argument tuple, last argument fastest
                for slot in args.iter_mut().rev() {
                    *slot += 1;
                    if *slot < self.domain {
                        break;
                    }
                    *slot = 0;
                }
            }
            tables.insert(format!("{p}/{}", t.arity), Value::Array(cells));
        }
        json!({"domain": self.domain, "tables": tables})
    }

    /// Loads the JSON format of [`to_json`](Self::to_json); rejects partial
    /// or contradictory tables.
    pub fn from_json(v: &Value) -> Result<Self, GameError> {
        let bad = |m: String| GameError::Interpretation(m);
        let domain = v
            .get("domain")
            .and_then(Value::as_u64)
            .filter(|&d| d >= 1)
            .ok_or_else(|| bad("`domain` must be a positive integer".into()))?;
        let tables = v
            .get("tables")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("`tables` must be an object".into()))?;
        let mut out = Interpretation {
            domain,
            tables: BTreeMap::new(),
        };
        for (key, cells) in tables {
            let (p, n) = key
                .rsplit_once('/')
                .and_then(|(p, n)| Some((p, n.parse::<usize>().ok()?)))
                .ok_or_else(|| bad(format!("table key `{key}` is not `letter/arity`")))?;
            let cells = cells
                .as_array()
                .ok_or_else(|| bad(format!("table `{key}` must be a list")))?;
            let mut seen: Vec<Option<bool>> = vec![None; rows(domain, n)];
            for cell in cells {
                let (args, val) = cell
                    .as_array()
                    .filter(|c| c.len() == 2)
                    .and_then(|c| Some((c[0].as_array()?, c[1].as_bool()?)))
                    .ok_or_else(|| bad(format!("cell {cell} in `{key}` is not [[args], bool]")))?;
                let args: Vec<u64> = args
                    .iter()
                    .map(Value::as_u64)
                    .collect::<Option<_>>()
                    .filter(|a: &Vec<u64>| a.len() == n)
                    .ok_or_else(|| bad(format!("cell {cell} in `{key}` has bad arguments")))?;
                let row = out
                    .row(&args)
                    .ok_or_else(|| bad(format!("cell {cell} in `{key}` leaves the domain")))?;
                match seen[row] {
                    Some(old) if old != val => {
                        return Err(bad(format!("cell {cell} in `{key}` given twice")))
                    }
                    _ => seen[row] = Some(val),
                }
            }
            let values = seen
                .into_iter()
                .collect::<Option<Vec<bool>>>()
                .ok_or_else(|| bad(format!("table `{key}` is partial")))?;
            if out
                .tables
                .insert(p.to_string(), Table { arity: n, values })
                .is_some()
            {
                return Err(bad(format!("letter `{p}` has two tables")));
            }
        }
        Ok(out)
    }
}
