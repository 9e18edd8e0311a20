//! Nonassociative monomials, multilinear identities and their text syntax.
//!
//! Syntax: variables `x1 .. xn`; products `*`, `|-`, `-|`; a statement is
//! `sum = sum` where a sum is a signed sequence of optionally scaled terms,
//! e.g. `((x1*x2)*x3)*x4 - ((x1*x3)*x2)*x4 = 0` or `2 x1*x2 - 1/2 x2*x1 = 0`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    /// The single product of an ordinary algebra.
    Circ,
    /// `⊢`
    Vdash,
    /// `⊣`
    Dashv,
}

impl Op {
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Circ => "*",
            Op::Vdash => "|-",
            Op::Dashv => "-|",
        }
    }

    pub fn is_di(self) -> bool {
        self != Op::Circ
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A binary tree whose leaves are variable indices (1-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MagmaTerm {
    Var(usize),
    Node(Op, Box<MagmaTerm>, Box<MagmaTerm>),
}

pub fn var(i: usize) -> MagmaTerm {
    MagmaTerm::Var(i)
}

pub fn node(op: Op, l: MagmaTerm, r: MagmaTerm) -> MagmaTerm {
    MagmaTerm::Node(op, Box::new(l), Box::new(r))
}

/// `l ∘ r`
pub fn mul(l: MagmaTerm, r: MagmaTerm) -> MagmaTerm {
    node(Op::Circ, l, r)
}

impl MagmaTerm {
    pub fn arity(&self) -> usize {
        match self {
            MagmaTerm::Var(_) => 1,
            MagmaTerm::Node(_, l, r) => l.arity() + r.arity(),
        }
    }

    /// Variables in left-to-right leaf order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            MagmaTerm::Var(i) => out.push(*i),
            MagmaTerm::Node(_, l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn contains_var(&self, i: usize) -> bool {
        match self {
            MagmaTerm::Var(j) => *j == i,
            MagmaTerm::Node(_, l, r) => l.contains_var(i) || r.contains_var(i),
        }
    }

    pub fn ops(&self) -> BTreeSet<Op> {
        let mut out = BTreeSet::new();
        self.collect_ops(&mut out);
        out
    }

    fn collect_ops(&self, out: &mut BTreeSet<Op>) {
        if let MagmaTerm::Node(op, l, r) = self {
            out.insert(*op);
            l.collect_ops(out);
            r.collect_ops(out);
        }
    }

    /// True iff the leaves are exactly `1..=n` in some order.
    pub fn is_multilinear(&self, n: usize) -> bool {
        let mut l = self.leaves();
        l.sort_unstable();
        l.len() == n && l.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// Replaces variable `i` by `subs[i - 1]`.
    pub fn substitute(&self, subs: &[MagmaTerm]) -> MagmaTerm {
        match self {
            MagmaTerm::Var(i) => subs[*i - 1].clone(),
            MagmaTerm::Node(op, l, r) => node(*op, l.substitute(subs), r.substitute(subs)),
        }
    }

    pub fn relabel(&self, f: &impl Fn(usize) -> usize) -> MagmaTerm {
        match self {
            MagmaTerm::Var(i) => MagmaTerm::Var(f(*i)),
            MagmaTerm::Node(op, l, r) => node(*op, l.relabel(f), r.relabel(f)),
        }
    }

    /// Replaces every product symbol.
    pub fn map_ops(&self, f: &impl Fn(Op) -> Op) -> MagmaTerm {
        match self {
            MagmaTerm::Var(i) => MagmaTerm::Var(*i),
            MagmaTerm::Node(op, l, r) => node(f(*op), l.map_ops(f), r.map_ops(f)),
        }
    }

    /// Matches `pattern` (a term in variables) at the root of `self`,
    /// filling `subs[i - 1]` with the subterm bound to variable `i`.
    pub fn match_pattern(&self, pattern: &MagmaTerm, subs: &mut [Option<MagmaTerm>]) -> bool {
        match (pattern, self) {
            (MagmaTerm::Var(i), t) => {
                subs[*i - 1] = Some(t.clone());
                true
            }
            (MagmaTerm::Node(pop, pl, pr), MagmaTerm::Node(op, l, r)) => {
                pop == op && l.match_pattern(pl, subs) && r.match_pattern(pr, subs)
            }
            _ => false,
        }
    }

    /// Number of nodes (leaves and products) in preorder.
    pub fn size(&self) -> usize {
        match self {
            MagmaTerm::Var(_) => 1,
            MagmaTerm::Node(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Subterm at preorder position `pos`.
    pub fn subterm(&self, pos: usize) -> &MagmaTerm {
        if pos == 0 {
            return self;
        }
        match self {
            MagmaTerm::Var(_) => panic!("position out of range"),
            MagmaTerm::Node(_, l, r) => {
                let ls = l.size();
                if pos <= ls {
                    l.subterm(pos - 1)
                } else {
                    r.subterm(pos - 1 - ls)
                }
            }
        }
    }

    /// Copy of `self` with the subterm at preorder position `pos` replaced.
    pub fn replace_at(&self, pos: usize, with: &MagmaTerm) -> MagmaTerm {
        if pos == 0 {
            return with.clone();
        }
        match self {
            MagmaTerm::Var(_) => panic!("position out of range"),
            MagmaTerm::Node(op, l, r) => {
                let ls = l.size();
                if pos <= ls {
                    node(*op, l.replace_at(pos - 1, with), (**r).clone())
                } else {
                    node(*op, (**l).clone(), r.replace_at(pos - 1 - ls, with))
                }
            }
        }
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        match self {
            MagmaTerm::Var(i) => write!(f, "x{i}"),
            MagmaTerm::Node(op, l, r) => {
                if !top {
                    f.write_str("(")?;
                }
                l.fmt_inner(f, false)?;
                write!(f, "{op}")?;
                r.fmt_inner(f, false)?;
                if !top {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for MagmaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f, true)
    }
}

impl fmt::Debug for MagmaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A multilinear identity `body = 0` in variables `x1..xn`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Identity {
    pub arity: usize,
    pub body: LinComb<MagmaTerm>,
}

impl Identity {
    /// Builds an identity and checks multilinearity and a consistent alphabet.
    pub fn new(body: LinComb<MagmaTerm>) -> Result<Self> {
        let arity = body.keys().map(|t| t.arity()).max().unwrap_or(0);
        for t in body.keys() {
            if !t.is_multilinear(arity) {
                return Err(Error::Mismatch(format!("term {t} is not multilinear in x1..x{arity}")));
            }
        }
        let ops = ops_of(&body);
        if ops.contains(&Op::Circ) && ops.iter().any(|o| o.is_di()) {
            return Err(Error::Mismatch("identity mixes `*` with dialgebra products".into()));
        }
        Ok(Identity { arity, body })
    }

    /// Convenience constructor from `(coefficient, term)` pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, MagmaTerm)>) -> Self {
        let body = terms.into_iter().map(|(c, t)| (t, Scalar::from_int(c))).collect();
        Identity::new(body).expect("well-formed identity")
    }

    pub fn ops(&self) -> BTreeSet<Op> {
        ops_of(&self.body)
    }

    pub fn is_di(&self) -> bool {
        self.ops().iter().any(|o| o.is_di())
    }

    /// Identity normalized so its first term has coefficient 1.
    pub fn monic(&self) -> Identity {
        match self.body.leading() {
            None => self.clone(),
            Some((_, c)) => Identity {
                arity: self.arity,
                body: self.body.scale(&c.inv().expect("nonzero")),
            },
        }
    }
}

fn ops_of(body: &LinComb<MagmaTerm>) -> BTreeSet<Op> {
    body.keys().flat_map(|t| t.ops()).collect()
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.body)
    }
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders identities in the text syntax, one per line.
pub fn render_identities(ids: &[Identity]) -> String {
    let mut s = String::new();
    for id in ids {
        s.push_str(&id.to_string());
        s.push('\n');
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Op(Op),
    Plus,
    Minus,
    Eq,
    Var(usize),
    Num(Scalar),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl Lexer<'_> {
    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: col + 1, msg: msg.into() }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let start = self.pos;
            let next = self.src.get(self.pos + 1).copied();
            let tok = match c {
                b' ' | b'\t' | b'\r' => {
                    self.pos += 1;
                    continue;
                }
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'*' => Tok::Op(Op::Circ),
                b'+' => Tok::Plus,
                b'=' => Tok::Eq,
                b'|' if next == Some(b'-') => {
                    self.pos += 1;
                    Tok::Op(Op::Vdash)
                }
                b'-' if next == Some(b'|') => {
                    self.pos += 1;
                    Tok::Op(Op::Dashv)
                }
                b'-' => Tok::Minus,
                b'x' => {
                    let mut end = self.pos + 1;
                    while end < self.src.len() && self.src[end].is_ascii_digit() {
                        end += 1;
                    }
                    let digits = std::str::from_utf8(&self.src[self.pos + 1..end]).unwrap();
                    let i: usize = digits.parse().map_err(|_| self.err(start, "expected variable index after `x`"))?;
                    if i == 0 {
                        return Err(self.err(start, "variables are numbered from x1"));
                    }
                    self.pos = end - 1;
                    Tok::Var(i)
                }
                b'0'..=b'9' => {
                    let mut end = self.pos;
                    while end < self.src.len() && (self.src[end].is_ascii_digit() || self.src[end] == b'/') {
                        end += 1;
                    }
                    let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                    let s: Scalar = text.parse().map_err(|_| self.err(start, format!("malformed scalar `{text}`")))?;
                    self.pos = end - 1;
                    Tok::Num(s)
                }
                other => return Err(self.err(start, format!("unexpected character `{}`", other as char))),
            };
            self.pos += 1;
            out.push((start, tok));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    line: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.i).map(|(c, _)| *c).unwrap_or(self.len)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.col() + 1, msg: msg.into() }
    }

    fn sum(&mut self) -> Result<LinComb<MagmaTerm>> {
        let mut out = LinComb::zero();
        let mut first = true;
        loop {
            let mut sign = Scalar::one();
            match self.peek() {
                Some(Tok::Plus) if !first => self.i += 1,
                Some(Tok::Minus) => {
                    self.i += 1;
                    sign = Scalar::from_int(-1);
                }
                _ if first => {}
                _ => break,
            }
            first = false;
            let mut coeff = sign;
            if let Some(Tok::Num(c)) = self.peek() {
                let c = c.clone();
                self.i += 1;
                if self.peek().is_none() || matches!(self.peek(), Some(Tok::Eq)) {
                    // a bare `0`
                    if c.is_zero() {
                        continue;
                    }
                    return Err(self.err("a nonzero constant is not a multilinear term"));
                }
                coeff = coeff * c;
            }
            let t = self.product()?;
            out.add_term(t, coeff);
        }
        Ok(out)
    }

    fn product(&mut self) -> Result<MagmaTerm> {
        let l = self.atom()?;
        if let Some(Tok::Op(op)) = self.peek() {
            let op = *op;
            self.i += 1;
            let r = self.atom()?;
            if let Some(Tok::Op(_)) = self.peek() {
                return Err(self.err("ambiguous product; add parentheses"));
            }
            return Ok(node(op, l, r));
        }
        Ok(l)
    }

    fn atom(&mut self) -> Result<MagmaTerm> {
        match self.peek().cloned() {
            Some(Tok::Var(i)) => {
                self.i += 1;
                Ok(var(i))
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let t = self.product()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.i += 1;
                        Ok(t)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            _ => Err(self.err("expected a variable or `(`")),
        }
    }
}

/// Parses one statement (no comments).
pub fn parse_identity_line(src: &str, line: usize) -> Result<Identity> {
    let toks = Lexer { src: src.as_bytes(), pos: 0, line }.tokens()?;
    let mut p = Parser { toks, i: 0, line, len: src.len() };
    let lhs = p.sum()?;
    let rhs = match p.peek() {
        Some(Tok::Eq) => {
            p.i += 1;
            p.sum()?
        }
        None => LinComb::zero(),
        _ => return Err(p.err("expected `=` or end of statement")),
    };
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    let body = lhs - rhs;
    Identity::new(body).map_err(|e| Error::Parse { line, column: 1, msg: e.to_string() })
}

pub fn parse_identity(src: &str) -> Result<Identity> {
    parse_identity_line(src, 1)
}

/// Parses an identity file: one statement per line, `#` starts a comment.
pub fn parse_identities(src: &str) -> Result<Vec<Identity>> {
    let mut out = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        if text.trim().is_empty() {
            continue;
        }
        out.push(parse_identity_line(text, k + 1)?);
    }
    Ok(out)
}
