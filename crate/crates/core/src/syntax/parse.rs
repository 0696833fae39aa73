use super::{Atom, Formula, Signature, SyntaxError, Term, Var};

const RESERVED: &[&str] = &["top", "bot", "fa", "ex", "call", "cex", "cor", "cand"];

pub(crate) fn is_reserved(word: &str) -> bool {
    RESERVED.contains(&word)
}

pub(crate) fn is_variable_name(word: &str) -> bool {
    let mut chars = word.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !is_reserved(word)
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Arrow,
    Iff,
    Or,
    And,
    Plus,
    Amp,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Amp => "`&`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    let err = |pos: usize, message: String| SyntaxError::Parse { pos, message };
    while let Some(&(pos, c)) = it.peek() {
        let rest = &text[pos..];
        let (tok, len) = match c {
            c if c.is_whitespace() => {
                it.next();
                continue;
            }
            '♠' => return Err(err(pos, "the move token ♠ is reserved".into())),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '.' => (Tok::Dot, 1),
            '~' => (Tok::Tilde, 1),
            '+' => (Tok::Plus, 1),
            '&' => (Tok::Amp, 1),
            '-' if rest.starts_with("->") => (Tok::Arrow, 2),
            '<' if rest.starts_with("<->") => (Tok::Iff, 3),
            '\\' if rest.starts_with("\\/") => (Tok::Or, 2),
            '/' if rest.starts_with("/\\") => (Tok::And, 2),
            '0'..='9' => {
                let len = rest
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(rest.len());
                let n = rest[..len]
                    .parse()
                    .map_err(|_| err(pos, format!("constant `{}` out of range", &rest[..len])))?;
                (Tok::Num(n), len)
            }
            c if c.is_ascii_alphabetic() => {
                let len = rest
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(rest.len());
                (Tok::Ident(rest[..len].to_string()), len)
            }
            other => return Err(err(pos, format!("unexpected character `{other}`"))),
        };
        out.push((pos, tok));
        // every token is ASCII
        for _ in 0..len {
            it.next();
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    sig: &'a mut Signature,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Or,
    ChoOr,
    And,
    ChoAnd,
}

impl BinOp {
    fn build(self, operands: Vec<Formula>) -> Formula {
        match self {
            BinOp::Or => Formula::Or(operands),
            BinOp::ChoOr => Formula::ChoOr(operands),
            BinOp::And => Formula::And(operands),
            BinOp::ChoAnd => Formula::ChoAnd(operands),
        }
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            pos: self.here(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, SyntaxError> {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.implication()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            if self.peek() == Some(&Tok::Iff) {
                return self.error("`<->` is not associative; add parentheses");
            }
            return Ok(Formula::And(vec![
                Formula::implies(lhs.clone(), rhs.clone()),
                Formula::implies(rhs, lhs),
            ]));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.level(true)?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn level_op(&self, disjunctive: bool) -> Option<BinOp> {
        match (self.peek()?, disjunctive) {
            (Tok::Or, true) => Some(BinOp::Or),
            (Tok::Plus, true) => Some(BinOp::ChoOr),
            (Tok::Ident(w), true) if w == "cor" => Some(BinOp::ChoOr),
            (Tok::And, false) => Some(BinOp::And),
            (Tok::Amp, false) => Some(BinOp::ChoAnd),
            (Tok::Ident(w), false) if w == "cand" => Some(BinOp::ChoAnd),
            _ => None,
        }
    }

    /// One n-ary precedence level. Runs of the same operator are flattened;
    /// a change of operator groups everything so far as the left operand.
    fn level(&mut self, disjunctive: bool) -> Result<Formula, SyntaxError> {
        let operand = |p: &mut Self| {
            if disjunctive {
                p.level(false)
            } else {
                p.unary()
            }
        };
        let first = operand(self)?;
        let Some(mut op) = self.level_op(disjunctive) else {
            return Ok(first);
        };
        let mut operands = vec![first];
        while let Some(next) = self.level_op(disjunctive) {
            self.pos += 1;
            if next != op {
                let grouped = op.build(std::mem::take(&mut operands));
                operands.push(grouped);
                op = next;
            }
            operands.push(operand(self)?);
        }
        Ok(op.build(operands))
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::negate(self.unary()?))
            }
            Some(Tok::Ident(w)) if matches!(w.as_str(), "fa" | "ex" | "call" | "cex") => {
                let q = w.clone();
                self.pos += 1;
                let x = self.variable()?;
                self.expect(&Tok::Dot)?;
                let body = self.formula()?;
                Ok(match q.as_str() {
                    "fa" => Formula::forall(x, body),
                    "ex" => Formula::exists(x, body),
                    "call" => Formula::cho_all(x, body),
                    _ => Formula::cho_ex(x, body),
                })
            }
            _ => self.primary(),
        }
    }

    fn variable(&mut self) -> Result<Var, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(w)) if is_variable_name(w) => {
                let v = Var::new(w.clone());
                self.pos += 1;
                Ok(v)
            }
            _ => self.unexpected("a variable"),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        if let Some(Tok::Num(n)) = self.peek() {
            let n = *n;
            self.pos += 1;
            return Ok(Term::Const(n));
        }
        self.variable().map(Term::Var)
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(w)) if w == "top" => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Ident(w)) if w == "bot" => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Ident(w)) if !is_reserved(&w) => {
                self.pos += 1;
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        args.push(self.term()?);
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        self.expect(&Tok::Comma)?;
                    }
                }
                match self.sig.get(&w) {
                    Some(&n) if n != args.len() => {
                        return Err(SyntaxError::ArityConflict {
                            letter: w,
                            expected: n,
                            found: args.len(),
                        });
                    }
                    Some(_) => {}
                    None => {
                        self.sig.insert(w.clone(), args.len());
                    }
                }
                Ok(Formula::Atom(Atom::new(w, args)))
            }
            _ => self.unexpected("a formula"),
        }
    }
}

/// Parses a formula, checking predicate arities against (and extending) `sig`.
pub fn parse_with_signature(text: &str, sig: &mut Signature) -> Result<Formula, SyntaxError> {
    let toks = lex(text)?;
    let mut scratch = sig.clone();
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        sig: &mut scratch,
    };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return p.unexpected("end of input");
    }
    *sig = scratch;
    Ok(f)
}

/// Parses a formula with a fresh arity map.
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    parse_with_signature(text, &mut Signature::new())
}

/// Parses a term: a decimal constant or a variable name.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let text = text.trim();
    if let Ok(n) = text.parse::<u64>() {
        return Ok(Term::Const(n));
    }
    if is_variable_name(text) {
        return Ok(Term::var(text));
    }
    Err(SyntaxError::Parse {
        pos: 0,
        message: format!("`{text}` is not a term"),
    })
}
