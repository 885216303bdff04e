//! A small language for writing gate products.
//!
//! ```text
//! expr := term { ("(x)" | "⊗") term }
//! term := atom [ ("^(x)" | "^⊗") integer ]
//! atom := ident [ "(" real { "," real } ")" ]
//!       | "kron" "(" expr "," expr ")"
//!       | "file" "(" path ")"
//!       | "(" expr ")"
//! ```
//!
//! `(x)` is left-associative. Whitespace is insignificant. A path may be
//! bare (everything up to the closing parenthesis) or double-quoted.

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::catalog::{Catalog, CatalogError};
use crate::matrix::io::{matrix_from_file, MatrixFormat};
use crate::matrix::{kron_with_limit, ComplexMatrix, MatrixError, DEFAULT_MAX_DIM};

#[derive(Clone, Debug, PartialEq)]
pub enum GateExpr {
    Gate { name: String, params: Vec<f64> },
    Kron(Box<GateExpr>, Box<GateExpr>),
    /// `base ⊗ base ⊗ ... ⊗ base`, `count >= 1` factors.
    KronPower { base: Box<GateExpr>, count: u32 },
    MatrixFile(PathBuf),
}

impl GateExpr {
    pub fn gate(name: impl Into<String>) -> Self {
        GateExpr::Gate {
            name: name.into(),
            params: Vec::new(),
        }
    }

    pub fn gate_with(name: impl Into<String>, params: Vec<f64>) -> Self {
        GateExpr::Gate {
            name: name.into(),
            params,
        }
    }

    pub fn kron(left: GateExpr, right: GateExpr) -> Self {
        GateExpr::Kron(Box::new(left), Box::new(right))
    }

    pub fn kron_power(base: GateExpr, count: u32) -> Self {
        assert!(count >= 1, "kron power count must be at least 1");
        GateExpr::KronPower {
            base: Box::new(base),
            count,
        }
    }

    fn is_atom(&self) -> bool {
        matches!(self, GateExpr::Gate { .. } | GateExpr::MatrixFile(_))
    }
}

/// Prints in the surface syntax; the output parses back to an equal tree.
impl fmt::Display for GateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateExpr::Gate { name, params } => {
                f.write_str(name)?;
                if !params.is_empty() {
                    let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
                    write!(f, "({})", ps.join(", "))?;
                }
                Ok(())
            }
            GateExpr::Kron(left, right) => {
                write!(f, "{left} (x) ")?;
                if matches!(**right, GateExpr::Kron(..)) {
                    write!(f, "({right})")
                } else {
                    write!(f, "{right}")
                }
            }
            GateExpr::KronPower { base, count } => {
                if base.is_atom() {
                    write!(f, "{base} ^(x) {count}")
                } else {
                    write!(f, "({base}) ^(x) {count}")
                }
            }
            GateExpr::MatrixFile(path) => write!(f, "file(\"{}\")", path.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message} (expected {expected})")]
pub struct ParseError {
    pub message: String,
    /// Character (not byte) position in the input.
    pub offset: usize,
    pub expected: String,
}

pub fn parse(input: &str) -> Result<GateExpr, ParseError> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected input", "`(x)` or end of input"));
    }
    Ok(expr)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str, expected: &str) -> ParseError {
        let message = if self.pos >= self.chars.len() {
            format!("{message}: reached end of input")
        } else {
            format!("{message}: found `{}`", self.chars[self.pos])
        };
        ParseError {
            message,
            offset: self.pos,
            expected: expected.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    /// Looks for `token` at the current position, ignoring whitespace inside it.
    fn lookahead(&self, token: &str) -> Option<usize> {
        let mut pos = self.pos;
        for (k, want) in token.chars().enumerate() {
            if k > 0 {
                while self.chars.get(pos).is_some_and(|c| c.is_whitespace()) {
                    pos += 1;
                }
            }
            if self.chars.get(pos) != Some(&want) {
                return None;
            }
            pos += 1;
        }
        Some(pos)
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        match self.lookahead(token) {
            Some(end) => {
                self.pos = end;
                true
            }
            None => false,
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error("unexpected input", &format!("`{token}`")))
        }
    }

    fn at_kron_operator(&mut self) -> bool {
        self.skip_ws();
        self.lookahead("(x)").is_some() || self.peek() == Some('⊗')
    }

    fn expr(&mut self) -> Result<GateExpr, ParseError> {
        let mut left = self.term()?;
        while self.eat("(x)") || self.eat("⊗") {
            let right = self.term()?;
            left = GateExpr::kron(left, right);
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<GateExpr, ParseError> {
        let base = self.atom()?;
        if self.eat("^(x)") || self.eat("^⊗") {
            let count = self.integer()?;
            return Ok(GateExpr::kron_power(base, count));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<GateExpr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(")")?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_lowercase() || c == '_' => {
                let name = self.ident();
                match name.as_str() {
                    "kron" => {
                        self.expect("(")?;
                        let left = self.expr()?;
                        self.expect(",")?;
                        let right = self.expr()?;
                        self.expect(")")?;
                        Ok(GateExpr::kron(left, right))
                    }
                    "file" => {
                        self.expect("(")?;
                        let path = self.path()?;
                        self.expect(")")?;
                        Ok(GateExpr::MatrixFile(path))
                    }
                    _ => {
                        let mut params = Vec::new();
                        if !self.at_kron_operator() && self.eat("(") {
                            params.push(self.real()?);
                            while self.eat(",") {
                                params.push(self.real()?);
                            }
                            self.expect(")")?;
                        }
                        Ok(GateExpr::Gate { name, params })
                    }
                }
            }
            _ => Err(self.error("unexpected input", "term")),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn path(&mut self) -> Result<PathBuf, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let text: String = if self.peek() == Some('"') {
            self.pos += 1;
            let body = self.pos;
            while self.peek().is_some_and(|c| c != '"') {
                self.pos += 1;
            }
            if self.peek().is_none() {
                return Err(self.error("unterminated path", "`\"`"));
            }
            let s = self.chars[body..self.pos].iter().collect();
            self.pos += 1;
            s
        } else {
            while self.peek().is_some_and(|c| c != ')') {
                self.pos += 1;
            }
            self.chars[start..self.pos].iter().collect::<String>().trim_end().to_string()
        };
        if text.is_empty() {
            self.pos = start;
            return Err(self.error("empty path", "file path"));
        }
        Ok(PathBuf::from(text))
    }

    fn real(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        if matches!(self.peek(), Some('+' | '-')) {
            self.pos += 1;
        }
        let mut mantissa = digits(self);
        if self.peek() == Some('.') {
            self.pos += 1;
            mantissa += digits(self);
        }
        if mantissa == 0 {
            self.pos = start;
            return Err(self.error("invalid number", "real number"));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let before_exp = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = before_exp;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>().map_err(|_| {
            self.pos = start;
            self.error("invalid number", "real number")
        })
    }

    fn integer(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<u32>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => {
                self.pos = start;
                Err(self.error("invalid kron power", "positive integer"))
            }
        }
    }
}

/// Settings for [`evaluate`].
#[derive(Clone, Debug)]
pub struct EvalContext<'a> {
    pub catalog: &'a Catalog,
    pub max_dim: usize,
    /// Relative `file(...)` paths resolve against this directory when set.
    pub base_dir: Option<PathBuf>,
}

impl<'a> EvalContext<'a> {
    pub fn new(catalog: &'a Catalog) -> Self {
        Self {
            catalog,
            max_dim: DEFAULT_MAX_DIM,
            base_dir: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum EvalErrorKind {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("cannot tell the matrix format of `{0}` (use a .json or .csv extension)")]
    UnknownFileFormat(String),
}

/// Evaluation failure and where in the tree it happened, e.g. `$.left.base`.
#[derive(Debug, Error)]
#[error("at {path}: {kind}")]
pub struct EvalError {
    pub path: String,
    #[source]
    pub kind: EvalErrorKind,
}

impl EvalError {
    pub fn is_limit(&self) -> bool {
        match &self.kind {
            EvalErrorKind::Matrix(e) => e.is_limit(),
            EvalErrorKind::Catalog(CatalogError::Matrix(e)) => e.is_limit(),
            _ => false,
        }
    }
}

pub fn evaluate(expr: &GateExpr, ctx: &EvalContext<'_>) -> Result<ComplexMatrix, EvalError> {
    eval_at(expr, ctx, &mut vec!["$"])
}

fn eval_at(
    expr: &GateExpr,
    ctx: &EvalContext<'_>,
    path: &mut Vec<&'static str>,
) -> Result<ComplexMatrix, EvalError> {
    let fail = |path: &Vec<&'static str>, kind: EvalErrorKind| EvalError {
        path: path.join("."),
        kind,
    };
    let m = match expr {
        GateExpr::Gate { name, params } => ctx
            .catalog
            .build_gate(name, params)
            .map_err(|e| fail(path, e.into()))?,
        GateExpr::MatrixFile(file) => {
            let resolved = resolve(file, ctx.base_dir.as_deref());
            let format = MatrixFormat::from_path(&resolved).ok_or_else(|| {
                fail(path, EvalErrorKind::UnknownFileFormat(file.display().to_string()))
            })?;
            matrix_from_file(&resolved, format).map_err(|e| fail(path, e.into()))?
        }
        GateExpr::Kron(left, right) => {
            path.push("left");
            let a = eval_at(left, ctx, path)?;
            path.pop();
            path.push("right");
            let b = eval_at(right, ctx, path)?;
            path.pop();
            kron_with_limit(&a, &b, ctx.max_dim).map_err(|e| fail(path, e.into()))?
        }
        GateExpr::KronPower { base, count } => {
            path.push("base");
            let b = eval_at(base, ctx, path)?;
            path.pop();
            let mut acc = b.clone();
            for _ in 1..*count {
                acc = kron_with_limit(&acc, &b, ctx.max_dim).map_err(|e| fail(path, e.into()))?;
            }
            acc
        }
    };
    if m.dim() > ctx.max_dim {
        return Err(fail(
            path,
            MatrixError::DimensionLimit {
                requested: m.dim(),
                limit: ctx.max_dim,
            }
            .into(),
        ));
    }
    Ok(m)
}

fn resolve(file: &Path, base_dir: Option<&Path>) -> PathBuf {
    match base_dir {
        Some(dir) if file.is_relative() => dir.join(file),
        _ => file.to_path_buf(),
    }
}
