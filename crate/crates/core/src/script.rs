//! A small script language over the group operations.
//!
//! ```text
//! ring gf 5 vars x:4 y:6 z:5
//! curve y^2 - x^3 - 1; z^2 - x*y - 1
//! let A = reduce(point(2,2,0) * point(4,0,1) * point(0,1,4) * point(0,4,1))
//! assert multi(A, 654) == unit
//! print multi(A, 327)
//! ```
//!
//! `#` starts a comment. Statements are free-form; a statement ends where
//! its grammar does.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde_json::json;
use thiserror::Error;

use crate::curve::{ideal_degree, CurveError, CurveRing};
use crate::field::{FieldError, FieldSpec};
use crate::jacobian::{IdealHandle, JacobianError};
use crate::polyring::{PolyError, PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {col}: expected {expected}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("undefined name `{0}`")]
    Name(String),
    #[error("no ring declared")]
    NoRing,
    #[error("no curve declared")]
    NoCurve,
    #[error("type error: {0}")]
    Type(String),
    #[error("invalid ring: {0}")]
    Ring(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {source}")]
pub struct EvalError {
    pub line: usize,
    pub col: usize,
    #[source]
    pub source: ScriptError,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldDecl {
    Rationals,
    Prime(u64),
}

/// Source text of a polynomial or scalar, re-parsed once the ring is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snippet {
    pub text: String,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Point(Vec<Snippet>),
    Ideal(Vec<Snippet>),
    Unit,
    Name(String),
    Add(Box<Expr>, Box<Expr>),
    Double(Box<Expr>),
    Inv(Box<Expr>),
    Reduce(Box<Expr>),
    Multi(Box<Expr>, i64),
    Product(Box<Expr>, Box<Expr>),
    Degree(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementKind {
    Ring {
        field: FieldDecl,
        vars: Vec<(String, u64)>,
    },
    Curve(Vec<Snippet>),
    Let(String, Expr),
    Print(Expr),
    Assert(Expr, Expr),
    Quit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub line: usize,
    pub col: usize,
    pub kind: StatementKind,
}

const KEYWORDS: &[&str] = &[
    "ring", "q", "gf", "vars", "curve", "let", "print", "assert", "quit", "point", "ideal", "unit",
    "add", "double", "inv", "reduce", "multi", "degree",
];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Int(s) => f.write_str(s),
            Tok::Sym(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(src: &str) -> Result<(Vec<Token>, (usize, usize)), SyntaxError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(bump(&mut chars));
            }
            out.push(Token {
                tok: Tok::Int(s),
                line: l,
                col: k,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
            {
                s.push(bump(&mut chars));
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line: l,
                col: k,
            });
        } else {
            bump(&mut chars);
            let sym = match c {
                '=' if chars.peek() == Some(&'=') => {
                    bump(&mut chars);
                    "=="
                }
                '=' => "=",
                '(' => "(",
                ')' => ")",
                ',' => ",",
                ';' => ";",
                ':' => ":",
                '*' => "*",
                '+' => "+",
                '-' => "-",
                '/' => "/",
                '^' => "^",
                _ => {
                    return Err(SyntaxError {
                        line: l,
                        col: k,
                        expected: format!("a valid character, found {c:?}"),
                    })
                }
            };
            out.push(Token {
                tok: Tok::Sym(sym),
                line: l,
                col: k,
            });
        }
    }
    Ok((out, (line, col)))
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.eof, |t| (t.line, t.col))
    }

    fn fail<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        let (line, col) = self.here();
        let found = match self.peek() {
            Some(t) => format!("`{t}`"),
            None => "end of input".to_string(),
        };
        Err(SyntaxError {
            line,
            col,
            expected: format!("{expected}, found {found}"),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == s)
    }

    fn sym(&mut self, s: &str) -> Result<(), SyntaxError> {
        if self.is_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn kw(&mut self, s: &str) -> Result<(), SyntaxError> {
        if self.is_kw(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("an identifier"),
        }
    }

    fn int(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Int(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("an integer"),
        }
    }

    fn uint<T: std::str::FromStr>(&mut self) -> Result<T, SyntaxError> {
        let here = self.here();
        let s = self.int()?;
        s.parse().map_err(|_| SyntaxError {
            line: here.0,
            col: here.1,
            expected: format!("an integer in range, found `{s}`"),
        })
    }

    fn script(&mut self) -> Result<Vec<Statement>, SyntaxError> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            out.push(self.statement()?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> Result<Statement, SyntaxError> {
        let (line, col) = self.here();
        let kind = match self.peek() {
            Some(Tok::Ident(k)) => match k.as_str() {
                "ring" => {
                    self.pos += 1;
                    let field = if self.is_kw("q") {
                        self.pos += 1;
                        FieldDecl::Rationals
                    } else if self.is_kw("gf") {
                        self.pos += 1;
                        FieldDecl::Prime(self.uint()?)
                    } else {
                        return self.fail("`q` or `gf`");
                    };
                    self.kw("vars")?;
                    let mut vars = Vec::new();
                    loop {
                        let name = self.ident()?;
                        self.sym(":")?;
                        vars.push((name, self.uint()?));
                        let more = matches!(self.peek(), Some(Tok::Ident(_)))
                            && matches!(self.peek_at(1), Some(Tok::Sym(":")));
                        if !more {
                            break;
                        }
                    }
                    StatementKind::Ring { field, vars }
                }
                "curve" => {
                    self.pos += 1;
                    let mut polys = vec![self.poly()?];
                    while self.is_sym(";") {
                        self.pos += 1;
                        polys.push(self.poly()?);
                    }
                    StatementKind::Curve(polys)
                }
                "let" => {
                    self.pos += 1;
                    if matches!(self.peek(), Some(Tok::Ident(s)) if KEYWORDS.contains(&s.as_str()))
                    {
                        return self.fail("a non-reserved name");
                    }
                    let name = self.ident()?;
                    self.sym("=")?;
                    StatementKind::Let(name, self.expr()?)
                }
                "print" => {
                    self.pos += 1;
                    StatementKind::Print(self.expr()?)
                }
                "assert" => {
                    self.pos += 1;
                    let lhs = self.expr()?;
                    self.sym("==")?;
                    StatementKind::Assert(lhs, self.expr()?)
                }
                "quit" => {
                    self.pos += 1;
                    StatementKind::Quit
                }
                _ => return self.fail("a statement"),
            },
            _ => return self.fail("a statement"),
        };
        Ok(Statement { line, col, kind })
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.primary()?;
        while self.is_sym("*") {
            self.pos += 1;
            let rhs = self.primary()?;
            lhs = Expr::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self, f: fn(Box<Expr>) -> Expr) -> Result<Expr, SyntaxError> {
        self.sym("(")?;
        let e = self.expr()?;
        self.sym(")")?;
        Ok(f(Box::new(e)))
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.fail("an expression"),
        };
        self.pos += 1;
        match name.as_str() {
            "unit" => Ok(Expr::Unit),
            "point" => {
                self.sym("(")?;
                let mut coords = vec![self.scalar()?];
                while self.is_sym(",") {
                    self.pos += 1;
                    coords.push(self.scalar()?);
                }
                self.sym(")")?;
                Ok(Expr::Point(coords))
            }
            "ideal" => {
                self.sym("(")?;
                let mut gens = vec![self.poly()?];
                while self.is_sym(",") {
                    self.pos += 1;
                    gens.push(self.poly()?);
                }
                self.sym(")")?;
                Ok(Expr::Ideal(gens))
            }
            "add" => {
                self.sym("(")?;
                let a = self.expr()?;
                self.sym(",")?;
                let b = self.expr()?;
                self.sym(")")?;
                Ok(Expr::Add(Box::new(a), Box::new(b)))
            }
            "multi" => {
                self.sym("(")?;
                let a = self.expr()?;
                self.sym(",")?;
                let negative = self.is_sym("-");
                if negative {
                    self.pos += 1;
                }
                let m: i64 = self.uint()?;
                self.sym(")")?;
                Ok(Expr::Multi(Box::new(a), if negative { -m } else { m }))
            }
            "double" => self.unary(Expr::Double),
            "inv" => self.unary(Expr::Inv),
            "reduce" => self.unary(Expr::Reduce),
            "degree" => self.unary(Expr::Degree),
            _ if KEYWORDS.contains(&name.as_str()) => {
                self.pos -= 1;
                self.fail("an expression")
            }
            _ => Ok(Expr::Name(name)),
        }
    }

    /// Consumes tokens matching the polynomial grammar and returns their text.
    fn poly(&mut self) -> Result<Snippet, SyntaxError> {
        let start = self.pos;
        let (line, col) = self.here();
        if self.is_sym("+") || self.is_sym("-") {
            self.pos += 1;
        }
        loop {
            self.term()?;
            if self.is_sym("+") || self.is_sym("-") {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(self.snippet(start, line, col))
    }

    fn term(&mut self) -> Result<(), SyntaxError> {
        if matches!(self.peek(), Some(Tok::Int(_))) {
            self.pos += 1;
            if self.is_sym("/") {
                self.pos += 1;
                self.int()?;
            }
            if !self.is_sym("*") {
                return Ok(());
            }
            self.pos += 1;
        }
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) => self.pos += 1,
                _ => return self.fail("a coefficient or variable"),
            }
            if self.is_sym("^") {
                self.pos += 1;
                self.int()?;
            }
            if !self.is_sym("*") {
                return Ok(());
            }
            self.pos += 1;
        }
    }

    fn scalar(&mut self) -> Result<Snippet, SyntaxError> {
        let start = self.pos;
        let (line, col) = self.here();
        if self.is_sym("+") || self.is_sym("-") {
            self.pos += 1;
        }
        self.int()?;
        if self.is_sym("/") {
            self.pos += 1;
            self.int()?;
        }
        Ok(self.snippet(start, line, col))
    }

    fn snippet(&self, start: usize, line: usize, col: usize) -> Snippet {
        let text = self.toks[start..self.pos]
            .iter()
            .map(|t| t.tok.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        Snippet { text, line, col }
    }
}

pub fn parse_script(text: &str) -> Result<Vec<Statement>, SyntaxError> {
    let (toks, eof) = tokenize(text)?;
    Parser { toks, pos: 0, eof }.script()
}

#[derive(Debug, Clone)]
pub enum Value {
    Ideal(IdealHandle),
    Int(u64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Ideal(i) => write!(f, "{}", format_ideal(i)),
            Value::Int(n) => write!(f, "{n}"),
        }
    }
}

/// Canonical rendering: `ideal 1`, `ideal 0`, or `ideal (g1, g2, …)`.
pub fn format_ideal(ideal: &IdealHandle) -> String {
    ideal.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Printed {
        line: usize,
        text: String,
        json: serde_json::Value,
    },
    Assertion {
        line: usize,
        passed: bool,
        lhs: String,
        rhs: String,
    },
}

impl Entry {
    pub fn render_text(&self) -> String {
        match self {
            Entry::Printed { text, .. } => text.clone(),
            Entry::Assertion {
                line, passed: true, ..
            } => format!("assert (line {line}): ok"),
            Entry::Assertion {
                line,
                passed: false,
                lhs,
                rhs,
            } => {
                format!("assert (line {line}): FAILED: {lhs} != {rhs}")
            }
        }
    }

    pub fn render_json(&self) -> String {
        match self {
            Entry::Printed { json, .. } => json.to_string(),
            Entry::Assertion {
                line,
                passed,
                lhs,
                rhs,
            } => json!({ "assert": line, "passed": passed, "lhs": lhs, "rhs": rhs }).to_string(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Transcript {
    pub entries: Vec<Entry>,
    pub error: Option<EvalError>,
}

impl Transcript {
    pub fn all_passed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| !matches!(e, Entry::Assertion { passed: false, .. }))
    }

    /// 0 on success, 1 on a failed assertion, 2 on an evaluation error.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            2
        } else if !self.all_passed() {
            1
        } else {
            0
        }
    }
}

/// Interpreter state: the current ring, curve and named values.
#[derive(Debug, Default)]
pub struct Session {
    ring: Option<Arc<PolyRing>>,
    curve: Option<Arc<CurveRing>>,
    env: HashMap<String, Value>,
    quit: bool,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn has_quit(&self) -> bool {
        self.quit
    }

    /// Executes one statement, returning a transcript entry for `print` and `assert`.
    pub fn execute(&mut self, stmt: &Statement) -> Result<Option<Entry>, EvalError> {
        let at = |source: ScriptError| EvalError {
            line: stmt.line,
            col: stmt.col,
            source,
        };
        match &stmt.kind {
            StatementKind::Ring { field, vars } => {
                let field = match field {
                    FieldDecl::Rationals => FieldSpec::rationals(),
                    FieldDecl::Prime(p) => FieldSpec::prime(*p).map_err(|e| at(e.into()))?,
                };
                let names = vars.iter().map(|(v, _)| v.clone()).collect();
                let weights = vars.iter().map(|(_, w)| *w).collect();
                let ring = PolyRing::new(field, names, weights)
                    .map_err(|e| at(ScriptError::Ring(e.to_string())))?;
                self.ring = Some(ring);
                self.curve = None;
                self.env.clear();
                Ok(None)
            }
            StatementKind::Curve(polys) => {
                let ring = self.ring.clone().ok_or_else(|| at(ScriptError::NoRing))?;
                let gens = polys
                    .iter()
                    .map(|s| parse_snippet(s, &ring))
                    .collect::<Result<Vec<_>, _>>()?;
                self.curve = Some(CurveRing::new(ring, gens).map_err(|e| at(e.into()))?);
                self.env.clear();
                Ok(None)
            }
            StatementKind::Let(name, e) => {
                let v = self.eval(e).map_err(at)?;
                self.env.insert(name.clone(), v);
                Ok(None)
            }
            StatementKind::Print(e) => {
                let v = self.eval(e).map_err(at)?;
                let json = match &v {
                    Value::Ideal(i) => json!({
                        "generators": i.display_generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                        "curve": i.curve().describe(),
                        "field": i.curve().field().to_string(),
                    }),
                    Value::Int(n) => json!({ "value": n }),
                };
                Ok(Some(Entry::Printed {
                    line: stmt.line,
                    text: v.to_string(),
                    json,
                }))
            }
            StatementKind::Assert(a, b) => {
                let (va, vb) = (self.eval(a).map_err(at)?, self.eval(b).map_err(at)?);
                let passed = match (&va, &vb) {
                    (Value::Ideal(x), Value::Ideal(y)) => {
                        x.ideal_equal(y).map_err(|e| at(e.into()))?
                    }
                    (Value::Int(x), Value::Int(y)) => x == y,
                    _ => {
                        return Err(at(ScriptError::Type(
                            "cannot compare an ideal with an integer".into(),
                        )))
                    }
                };
                Ok(Some(Entry::Assertion {
                    line: stmt.line,
                    passed,
                    lhs: va.to_string(),
                    rhs: vb.to_string(),
                }))
            }
            StatementKind::Quit => {
                self.quit = true;
                Ok(None)
            }
        }
    }

    fn curve(&self) -> Result<&Arc<CurveRing>, ScriptError> {
        self.curve.as_ref().ok_or(ScriptError::NoCurve)
    }

    fn eval_ideal(&self, e: &Expr) -> Result<IdealHandle, ScriptError> {
        match self.eval(e)? {
            Value::Ideal(i) => Ok(i),
            Value::Int(_) => Err(ScriptError::Type(
                "expected an ideal, found an integer".into(),
            )),
        }
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, ScriptError> {
        let ideal = |i: IdealHandle| Ok(Value::Ideal(i));
        match e {
            Expr::Point(coords) => {
                let curve = self.curve()?;
                let values = coords
                    .iter()
                    .map(|s| curve.field().parse_value(&s.text))
                    .collect::<Result<Vec<_>, _>>()?;
                ideal(curve.point_ideal(&values)?)
            }
            Expr::Ideal(gens) => {
                let curve = self.curve()?;
                let polys = gens
                    .iter()
                    .map(|s| Polynomial::parse(&s.text, curve.ring()))
                    .collect::<Result<Vec<_>, _>>()?;
                ideal(IdealHandle::new(curve, polys)?)
            }
            Expr::Unit => ideal(IdealHandle::unit(self.curve()?)),
            Expr::Name(n) => self
                .env
                .get(n)
                .cloned()
                .ok_or_else(|| ScriptError::Name(n.clone())),
            Expr::Add(a, b) => ideal(self.eval_ideal(a)?.add(&self.eval_ideal(b)?)?),
            Expr::Double(a) => ideal(self.eval_ideal(a)?.double()?),
            Expr::Inv(a) => ideal(self.eval_ideal(a)?.inv()?),
            Expr::Reduce(a) => ideal(self.eval_ideal(a)?.reduce()?),
            Expr::Multi(a, m) => ideal(self.eval_ideal(a)?.multi(*m)?),
            Expr::Product(a, b) => ideal(self.eval_ideal(a)?.product(&self.eval_ideal(b)?)?),
            Expr::Degree(a) => Ok(Value::Int(ideal_degree(&self.eval_ideal(a)?)?)),
        }
    }

    /// Runs statements until the end, a `quit`, or the first error.
    pub fn run(&mut self, stmts: &[Statement], transcript: &mut Transcript) {
        for s in stmts {
            match self.execute(s) {
                Ok(entry) => transcript.entries.extend(entry),
                Err(e) => {
                    transcript.error = Some(e);
                    return;
                }
            }
            if self.quit {
                return;
            }
        }
    }
}

fn parse_snippet(s: &Snippet, ring: &Arc<PolyRing>) -> Result<Polynomial, EvalError> {
    Polynomial::parse(&s.text, ring).map_err(|e| EvalError {
        line: s.line,
        col: s.col,
        source: e.into(),
    })
}

pub fn run_script(stmts: &[Statement]) -> Transcript {
    let mut transcript = Transcript::default();
    Session::new().run(stmts, &mut transcript);
    transcript
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> Transcript {
        run_script(&parse_script(src).unwrap())
    }

    #[test]
    fn parses_ring_declaration() {
        let s = parse_script("ring gf 5 vars x:4 y:6 z:5").unwrap();
        assert_eq!(
            s[0].kind,
            StatementKind::Ring {
                field: FieldDecl::Prime(5),
                vars: vec![("x".into(), 4), ("y".into(), 6), ("z".into(), 5)],
            }
        );
    }

    #[test]
    fn parses_product_chain() {
        let s = parse_script("let A = reduce(J*K*L*M)").unwrap();
        let n = |s: &str| Box::new(Expr::Name(s.into()));
        let chain = Expr::Product(
            Box::new(Expr::Product(
                Box::new(Expr::Product(n("J"), n("K"))),
                n("L"),
            )),
            n("M"),
        );
        assert_eq!(
            s[0].kind,
            StatementKind::Let("A".into(), Expr::Reduce(Box::new(chain)))
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_script("let A = reduce(").unwrap_err();
        assert_eq!((e.line, e.col), (1, 16));
        assert!(e.expected.contains("end of input"), "{e}");
        let e = parse_script("ring q vars x:2 y:3\nprint ideal(x +)").unwrap_err();
        assert_eq!((e.line, e.col), (2, 16));
        let e = parse_script("print $").unwrap_err();
        assert_eq!((e.line, e.col), (1, 7));
        assert!(parse_script("let add = unit").is_err());
        assert!(parse_script("ring r vars x:1").is_err());
    }

    #[test]
    fn curve_statement_ends_at_next_keyword() {
        let s = parse_script("ring q vars x:2 y:3\ncurve y^2 - x^3 - 3*x # elliptic\nprint unit")
            .unwrap();
        assert_eq!(s.len(), 3);
        match &s[1].kind {
            StatementKind::Curve(p) => assert_eq!(p[0].text, "y ^ 2 - x ^ 3 - 3 * x"),
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn unit_prints_as_ideal_one() {
        let t = run("ring q vars x:2 y:3\ncurve y^2 - x^3 - 3*x\nprint unit");
        assert_eq!(t.entries[0].render_text(), "ideal 1");
        assert_eq!(t.exit_code(), 0);
    }

    #[test]
    fn elliptic_session() {
        let t = run("ring q vars x:2 y:3
             curve y^2 - x^3 - 3*x
             let J = ideal(x, y)
             let K = point(1, 2)
             print J*K
             print inv(J*K)
             assert add(J, K) == ideal(x - 3, y + 6)
             assert degree(J*K) == degree(point(1,2)*point(0,0))
             print degree(J*K)");
        assert!(t.error.is_none(), "{:?}", t.error);
        let lines: Vec<String> = t.entries.iter().map(Entry::render_text).collect();
        assert_eq!(
            lines,
            [
                "ideal (y - 2*x, x^2 - x)",
                "ideal (x - 3, y - 6)",
                "assert (line 7): ok",
                "assert (line 8): ok",
                "2"
            ]
        );
    }

    #[test]
    fn failures_and_errors() {
        let t = run("ring q vars x:2 y:3\ncurve y^2 - x^3 - 3*x\nassert point(0,0) == unit");
        assert_eq!(t.exit_code(), 1);
        let t = run("ring q vars x:2 y:3\ncurve y^2 - x^3 - 3*x\nprint J");
        assert_eq!(t.exit_code(), 2);
        let err = t.error.unwrap();
        assert_eq!(err.line, 3);
        assert_eq!(err.source, ScriptError::Name("J".into()));
        let t = run("print unit");
        assert_eq!(t.error.unwrap().source, ScriptError::NoCurve);
        let t = run("ring q vars x:2 y:3\ncurve y^2 - x^3 - 3*x\nprint point(1, 1)");
        assert!(matches!(
            t.error.unwrap().source,
            ScriptError::Curve(CurveError::PointNotOnCurve { .. })
        ));
        let t = run("ring q vars x:2 y:3\ncurve y^2 - x^3 - 3*w");
        assert!(matches!(
            t.error.unwrap().source,
            ScriptError::Poly(PolyError::UnknownVariable(_))
        ));
        let t = run("ring q vars x:2 y:3\ncurve y^2 - x^3\nassert degree(unit) == unit");
        assert!(matches!(t.error.unwrap().source, ScriptError::Type(_)));
    }

    #[test]
    fn quit_stops_execution() {
        let t = run("ring q vars x:2 y:3\ncurve y^2 - x^3 - 3*x\nquit\nprint J");
        assert!(t.error.is_none());
        assert!(t.entries.is_empty());
    }

    #[test]
    fn json_rendering() {
        let t = run("ring gf 5 vars x:2 y:3\ncurve y^2 - x^3 - 3*x\nprint point(1, 2)\nprint degree(point(1,2))");
        let v: serde_json::Value = serde_json::from_str(&t.entries[0].render_json()).unwrap();
        assert_eq!(v["generators"], json!(["x + 4", "y + 3"]));
        assert_eq!(v["field"], "GF(5)");
        assert_eq!(v["curve"], "y^2 + 4*x^3 + 2*x");
        assert_eq!(t.entries[1].render_json(), r#"{"value":1}"#);
    }
}
