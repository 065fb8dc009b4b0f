//! Scalar expression language used to write `f(x, y)`, `K(x, t, y)` and exact
//! solutions as text.
//!
//! Grammar (EBNF, whitespace insignificant):
//!
//! ```text
//! expr    = term , { ("+" | "-") , term } ;
//! term    = unary , { ("*" | "/") , unary } ;
//! unary   = "-" , unary | power ;
//! power   = primary , [ "^" , unary ] ;
//! primary = number | variable | func , "(" , expr , ")" | "(" , expr , ")" ;
//! number  = digits , [ "." , [ digits ] ] , [ exponent ]
//!         | "." , digits , [ exponent ] ;
//! exponent = ("e" | "E") , [ "+" | "-" ] , digits ;
//! variable = "x" | "t" | "y" ;
//! func    = "sin" | "cos" | "tan" | "exp" | "log" | "sqrt" | "abs" ;
//! ```
//!
//! `^` binds tighter than unary minus (`-2^2 = -4`) and is right-associative
//! (`2^3^2 = 512`). `log` is the natural logarithm. There is no implicit
//! multiplication.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{evaluate, Environment, EvalError};
pub use parse::{parse, ParseError};

/// One of the three variables an expression may mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    T,
    Y,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::T, Var::Y];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::T => "t",
            Var::Y => "y",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "x" => Some(Var::X),
            "t" => Some(Var::T),
            "y" => Some(Var::Y),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|func| func.name() == name)
    }
}

/// A node of the syntax tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

impl Node {
    fn precedence(&self) -> u8 {
        match self {
            Node::Binary(op, _, _) => op.precedence(),
            Node::Neg(_) => PREC_NEG,
            Node::Num(_) | Node::Var(_) | Node::Call(_, _) => PREC_ATOM,
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Node::Num(_) => {}
            Node::Var(v) => {
                out.insert(*v);
            }
            Node::Neg(inner) | Node::Call(_, inner) => inner.collect_vars(out),
            Node::Binary(_, lhs, rhs) => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

// Prints with the minimum parentheses needed for `parse` to rebuild the same tree.
impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(value) => write!(f, "{value}"),
            Node::Var(v) => write!(f, "{v}"),
            Node::Neg(inner) => {
                f.write_str("-")?;
                inner.write_child(f, inner.precedence() < PREC_NEG)
            }
            Node::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Node::Binary(BinOp::Pow, base, exponent) => {
                base.write_child(f, base.precedence() <= BinOp::Pow.precedence())?;
                f.write_str("^")?;
                exponent.write_child(f, exponent.precedence() < PREC_NEG)
            }
            Node::Binary(op, lhs, rhs) => {
                let prec = op.precedence();
                lhs.write_child(f, lhs.precedence() < prec)?;
                write!(f, " {} ", op.symbol())?;
                rhs.write_child(f, rhs.precedence() <= prec)
            }
        }
    }
}

/// A parsed, immutable expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
}

impl Expression {
    pub fn new(root: Node) -> Self {
        Expression { root }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Exact set of variables occurring in the tree.
    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut vars = BTreeSet::new();
        self.root.collect_vars(&mut vars);
        vars
    }

    pub fn evaluate(&self, env: &Environment) -> Result<f64, EvalError> {
        evaluate(self, env)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl std::str::FromStr for Expression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

pub fn free_variables(e: &Expression) -> BTreeSet<Var> {
    e.free_variables()
}
