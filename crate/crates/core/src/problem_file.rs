//! Line-oriented problem files.
//!
//! ```text
//! # first example
//! name  = ex1
//! f     = 1 + 2*x - y
//! K     = x*(1 + 2*x)*exp(t*(x - t))*y
//! x0    = 0
//! y0    = 1
//! exact = exp(x^2)
//! ```
//!
//! Each non-blank line is `key = value`. Everything from `#` to the end of a
//! line is a comment. Keys are case-sensitive; `name`, `f`, `K`, `x0` and
//! `y0` are required and `exact` is optional, each at most once. `x0` and
//! `y0` are decimal floating-point literals; `f`, `K` and `exact` use the
//! expression grammar.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::expr::{parse, Expression, ParseError};
use crate::problem::{ProblemError, VideProblem};

const KEYS: [&str; 6] = ["name", "f", "K", "x0", "y0", "exact"];
const REQUIRED: [&str; 5] = ["name", "f", "K", "x0", "y0"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemFileErrorKind {
    #[error("expected 'key = value'")]
    MissingEquals,
    #[error("unknown key '{0}' (expected one of name, f, K, x0, y0, exact)")]
    UnknownKey(String),
    #[error("duplicate key '{key}' (first set on line {first})")]
    DuplicateKey { key: String, first: usize },
    #[error("empty value for '{0}'")]
    EmptyValue(String),
    #[error("missing required key '{0}'")]
    MissingKey(&'static str),
    #[error("'{key}' must be a finite number, got '{text}'")]
    BadNumber { key: String, text: String },
    #[error("expression for '{key}' {source}")]
    Expression { key: String, source: ParseError },
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFileError {
    /// 1-based line number, absent for whole-file errors.
    pub line: Option<usize>,
    pub kind: ProblemFileErrorKind,
}

impl fmt::Display for ProblemFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl std::error::Error for ProblemFileError {}

fn at(line: usize, kind: ProblemFileErrorKind) -> ProblemFileError {
    ProblemFileError {
        line: Some(line),
        kind,
    }
}

/// Parses problem file text into a validated problem.
pub fn parse_problem_file(text: &str) -> Result<VideProblem, ProblemFileError> {
    // (value, line) per key, in KEYS order
    let mut slots: [Option<(String, usize)>; 6] = Default::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| at(line, ProblemFileErrorKind::MissingEquals))?;
        let (key, value) = (key.trim(), value.trim());
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| at(line, ProblemFileErrorKind::UnknownKey(key.to_string())))?;
        if let Some((_, first)) = &slots[slot] {
            return Err(at(
                line,
                ProblemFileErrorKind::DuplicateKey {
                    key: key.to_string(),
                    first: *first,
                },
            ));
        }
        if value.is_empty() {
            return Err(at(line, ProblemFileErrorKind::EmptyValue(key.to_string())));
        }
        slots[slot] = Some((value.to_string(), line));
    }
    for key in REQUIRED {
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .expect("required key is known");
        if slots[slot].is_none() {
            return Err(ProblemFileError {
                line: None,
                kind: ProblemFileErrorKind::MissingKey(key),
            });
        }
    }
    let [name, f, k, x0, y0, exact] = slots;
    let expression =
        |key: &str, (value, line): (String, usize)| -> Result<Expression, ProblemFileError> {
            parse(&value).map_err(|source| {
                at(
                    line,
                    ProblemFileErrorKind::Expression {
                        key: key.to_string(),
                        source,
                    },
                )
            })
        };
    let number = |key: &str, (value, line): (String, usize)| -> Result<f64, ProblemFileError> {
        f64::from_str(&value)
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| {
                at(
                    line,
                    ProblemFileErrorKind::BadNumber {
                        key: key.to_string(),
                        text: value,
                    },
                )
            })
    };
    let (name, _) = name.expect("checked above");
    let f = expression("f", f.expect("checked above"))?;
    let k = expression("K", k.expect("checked above"))?;
    let x0 = number("x0", x0.expect("checked above"))?;
    let y0 = number("y0", y0.expect("checked above"))?;
    let exact = exact.map(|e| expression("exact", e)).transpose()?;
    VideProblem::new(name, f, k, x0, y0, exact).map_err(|e| ProblemFileError {
        line: None,
        kind: e.into(),
    })
}
