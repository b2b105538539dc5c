//! Line-oriented construction scripts.
//!
//! ```text
//! point A = (0, 0)
//! point B = (1, 0)
//! circle C = circle(A, B)     ; center, then a point on the circle
//! circle D = circle(B, A)
//! point P = meet(C, D) #1     ; or near(0.5, 0.9)
//! line L = line(A, P)
//! ```
//!
//! Names are single-assignment and must be defined before use. Comments run
//! from `;` to the end of the line.

use std::collections::HashMap;
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::numeric::{parse_decimal, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    Index(usize),
    Near(Rational, Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Point { name: String, x: Rational, y: Rational },
    Line { name: String, p: String, q: String },
    Circle { name: String, center: String, through: String },
    Meet { name: String, first: String, second: String, selector: Selector },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub line: usize,
    pub column: usize,
    pub kind: StmtKind,
}

impl Statement {
    pub fn name(&self) -> &str {
        match &self.kind {
            StmtKind::Point { name, .. }
            | StmtKind::Line { name, .. }
            | StmtKind::Circle { name, .. }
            | StmtKind::Meet { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Statement>,
    /// Hex SHA-256 of the source text.
    pub source_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptErrorKind {
    Syntax(String),
    UndefinedName(String),
    Redefinition(String),
    KindMismatch { name: String, expected: &'static str },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ScriptError {
    pub line: usize,
    pub column: usize,
    pub kind: ScriptErrorKind,
}

impl fmt::Display for ScriptErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptErrorKind::Syntax(m) => write!(f, "{m}"),
            ScriptErrorKind::UndefinedName(n) => write!(f, "undefined name `{n}`"),
            ScriptErrorKind::Redefinition(n) => write!(f, "`{n}` is already defined"),
            ScriptErrorKind::KindMismatch { name, expected } => write!(f, "`{name}` is not a {expected}"),
        }
    }
}

pub fn hash_source(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Point,
    Line,
    Circle,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Punct(char),
}

struct Lexer<'a> {
    line: usize,
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(line: usize, src: &'a str) -> Self {
        let body = src.split(';').next().unwrap_or("");
        Lexer { line, chars: body.chars().enumerate().collect(), pos: 0, src }
    }

    fn err(&self, column: usize, msg: impl Into<String>) -> ScriptError {
        ScriptError { line: self.line, column, kind: ScriptErrorKind::Syntax(msg.into()) }
    }

    /// Next token with its 1-based column, or `None` at end of line.
    fn next(&mut self) -> Result<Option<(usize, Tok)>, ScriptError> {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
        let Some(&(i, c)) = self.chars.get(self.pos) else { return Ok(None) };
        let col = i + 1;
        let take = |lx: &mut Self, pred: &dyn Fn(char) -> bool| {
            let start = lx.pos;
            while lx.pos < lx.chars.len() && pred(lx.chars[lx.pos].1) {
                lx.pos += 1;
            }
            lx.chars[start..lx.pos].iter().map(|&(_, c)| c).collect::<String>()
        };
        if c.is_alphabetic() || c == '_' {
            return Ok(Some((col, Tok::Ident(take(self, &|c| c.is_alphanumeric() || c == '_')))));
        }
        if c.is_ascii_digit() || c == '.' {
            return Ok(Some((col, Tok::Number(take(self, &|c| c.is_ascii_digit() || c == '.')))));
        }
        if "=(),#/-+".contains(c) {
            self.pos += 1;
            return Ok(Some((col, Tok::Punct(c))));
        }
        Err(self.err(col, format!("unexpected character {c:?}")))
    }

    fn end_column(&self) -> usize {
        self.src.split(';').next().unwrap_or("").trim_end().chars().count() + 1
    }
}

struct StmtParser<'a> {
    lx: Lexer<'a>,
    peeked: Option<(usize, Tok)>,
}

impl<'a> StmtParser<'a> {
    fn peek(&mut self) -> Result<Option<&(usize, Tok)>, ScriptError> {
        if self.peeked.is_none() {
            self.peeked = self.lx.next()?;
        }
        Ok(self.peeked.as_ref())
    }

    fn bump(&mut self) -> Result<Option<(usize, Tok)>, ScriptError> {
        self.peek()?;
        Ok(self.peeked.take())
    }

    fn expect_any(&mut self, what: &str) -> Result<(usize, Tok), ScriptError> {
        match self.bump()? {
            Some(t) => Ok(t),
            None => Err(self.lx.err(self.lx.end_column(), format!("expected {what}, found end of line"))),
        }
    }

    fn punct(&mut self, p: char) -> Result<(), ScriptError> {
        match self.expect_any(&format!("'{p}'"))? {
            (_, Tok::Punct(q)) if q == p => Ok(()),
            (col, t) => Err(self.lx.err(col, format!("expected '{p}', found {}", describe(&t)))),
        }
    }

    fn ident(&mut self) -> Result<(usize, String), ScriptError> {
        match self.expect_any("a name")? {
            (col, Tok::Ident(s)) => Ok((col, s)),
            (col, t) => Err(self.lx.err(col, format!("expected a name, found {}", describe(&t)))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ScriptError> {
        match self.expect_any(&format!("`{kw}`"))? {
            (_, Tok::Ident(s)) if s == kw => Ok(()),
            (col, t) => Err(self.lx.err(col, format!("expected `{kw}`, found {}", describe(&t)))),
        }
    }

    fn signed_number(&mut self) -> Result<(usize, bool, String), ScriptError> {
        let (col, t) = self.expect_any("a number")?;
        let (neg, t, col_n) = match t {
            Tok::Punct('-') => {
                let (c2, t2) = self.expect_any("a number")?;
                (true, t2, c2)
            }
            Tok::Punct('+') => {
                let (c2, t2) = self.expect_any("a number")?;
                (false, t2, c2)
            }
            t => (false, t, col),
        };
        match t {
            Tok::Number(s) => Ok((col, neg, s)),
            t => Err(self.lx.err(col_n, format!("expected a number, found {}", describe(&t)))),
        }
    }

    fn decimal(&mut self) -> Result<Rational, ScriptError> {
        let (col, neg, s) = self.signed_number()?;
        let q = parse_decimal(&s).map_err(|_| self.lx.err(col, format!("malformed number {s:?}")))?;
        Ok(if neg { -q } else { q })
    }

    fn rational(&mut self) -> Result<Rational, ScriptError> {
        let (col, neg, s) = self.signed_number()?;
        let bad = |lx: &Lexer| lx.err(col, format!("expected an integer or fraction, found {s:?}"));
        if s.contains('.') {
            return Err(bad(&self.lx));
        }
        let n: num_bigint::BigInt = s.parse().map_err(|_| bad(&self.lx))?;
        let mut q = Rational::from_integer(if neg { -n } else { n });
        if let Some((_, Tok::Punct('/'))) = self.peek()? {
            self.bump()?;
            let (dcol, t) = self.expect_any("a denominator")?;
            let d: num_bigint::BigInt = match &t {
                Tok::Number(ds) if !ds.contains('.') => ds.parse().map_err(|_| bad(&self.lx))?,
                t => return Err(self.lx.err(dcol, format!("expected a denominator, found {}", describe(t)))),
            };
            if d == 0.into() {
                return Err(self.lx.err(dcol, "zero denominator"));
            }
            q /= Rational::from_integer(d);
        }
        Ok(q)
    }

    fn finish(&mut self) -> Result<(), ScriptError> {
        match self.bump()? {
            None => Ok(()),
            Some((col, t)) => Err(self.lx.err(col, format!("unexpected {} after statement", describe(&t)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(s) => format!("number {s}"),
        Tok::Punct(c) => format!("'{c}'"),
    }
}

/// Parses a whole script and checks names: every referenced name must be
/// defined on an earlier line with the right kind, and no name is defined
/// twice.
pub fn parse_script(text: &str) -> Result<Script, ScriptError> {
    let mut statements = Vec::new();
    let mut kinds: HashMap<String, Kind> = HashMap::new();
    for (idx, src) in text.lines().enumerate() {
        let line = idx + 1;
        let mut sp = StmtParser { lx: Lexer::new(line, src), peeked: None };
        let Some((column, head)) = sp.bump()? else { continue };
        let Tok::Ident(head) = head else {
            return Err(sp.lx.err(column, format!("expected `point`, `line` or `circle`, found {}", describe(&head))));
        };
        let (name_col, name) = sp.ident()?;
        sp.punct('=')?;
        let mut refs: Vec<(usize, String, &'static [Kind])> = Vec::new();
        let (kind, k) = match head.as_str() {
            "point" => {
                if let Some((_, Tok::Punct('('))) = sp.peek()? {
                    sp.bump()?;
                    let x = sp.rational()?;
                    sp.punct(',')?;
                    let y = sp.rational()?;
                    sp.punct(')')?;
                    (StmtKind::Point { name: name.clone(), x, y }, Kind::Point)
                } else {
                    sp.keyword("meet")?;
                    sp.punct('(')?;
                    let (c1, first) = sp.ident()?;
                    sp.punct(',')?;
                    let (c2, second) = sp.ident()?;
                    sp.punct(')')?;
                    refs.push((c1, first.clone(), &[Kind::Line, Kind::Circle]));
                    refs.push((c2, second.clone(), &[Kind::Line, Kind::Circle]));
                    let selector = match sp.bump()? {
                        None => Selector::Index(0),
                        Some((_, Tok::Punct('#'))) => match sp.expect_any("an index")? {
                            (col, Tok::Number(s)) => {
                                Selector::Index(s.parse().map_err(|_| sp.lx.err(col, format!("bad index {s:?}")))?)
                            }
                            (col, t) => {
                                return Err(sp.lx.err(col, format!("expected an index, found {}", describe(&t))))
                            }
                        },
                        Some((_, Tok::Ident(s))) if s == "near" => {
                            sp.punct('(')?;
                            let x = sp.decimal()?;
                            sp.punct(',')?;
                            let y = sp.decimal()?;
                            sp.punct(')')?;
                            Selector::Near(x, y)
                        }
                        Some((col, t)) => {
                            return Err(sp.lx.err(col, format!("expected a selector, found {}", describe(&t))))
                        }
                    };
                    (StmtKind::Meet { name: name.clone(), first, second, selector }, Kind::Point)
                }
            }
            "line" | "circle" => {
                sp.keyword(&head)?;
                sp.punct('(')?;
                let (c1, p) = sp.ident()?;
                sp.punct(',')?;
                let (c2, q) = sp.ident()?;
                sp.punct(')')?;
                refs.push((c1, p.clone(), &[Kind::Point]));
                refs.push((c2, q.clone(), &[Kind::Point]));
                if head == "line" {
                    (StmtKind::Line { name: name.clone(), p, q }, Kind::Line)
                } else {
                    (StmtKind::Circle { name: name.clone(), center: p, through: q }, Kind::Circle)
                }
            }
            _ => {
                return Err(sp.lx.err(column, format!("expected `point`, `line` or `circle`, found `{head}`")));
            }
        };
        sp.finish()?;
        for (col, r, allowed) in refs {
            match kinds.get(&r) {
                None => return Err(ScriptError { line, column: col, kind: ScriptErrorKind::UndefinedName(r) }),
                Some(k) if !allowed.contains(k) => {
                    let expected = if allowed.contains(&Kind::Point) { "point" } else { "line or circle" };
                    return Err(ScriptError {
                        line,
                        column: col,
                        kind: ScriptErrorKind::KindMismatch { name: r, expected },
                    });
                }
                Some(_) => {}
            }
        }
        if kinds.insert(name.clone(), k).is_some() {
            return Err(ScriptError { line, column: name_col, kind: ScriptErrorKind::Redefinition(name) });
        }
        statements.push(Statement { line, column, kind });
    }
    Ok(Script { statements, source_hash: hash_source(text) })
}
