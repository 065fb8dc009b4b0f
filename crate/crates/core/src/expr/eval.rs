use thiserror::Error;

use super::{BinOp, Expression, Func, Node, Var};

/// Values bound to `x`, `t` and `y`. One slot per variable, so a variable can
/// never be bound twice.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Environment {
    slots: [Option<f64>; 3],
}

fn slot(var: Var) -> usize {
    match var {
        Var::X => 0,
        Var::T => 1,
        Var::Y => 2,
    }
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: Var, value: f64) -> Self {
        self.bind(var, value);
        self
    }

    pub fn bind(&mut self, var: Var, value: f64) {
        self.slots[slot(var)] = Some(value);
    }

    pub fn get(&self, var: Var) -> Option<f64> {
        self.slots[slot(var)]
    }

    pub fn x(x: f64) -> Self {
        Self::new().with(Var::X, x)
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Self::new().with(Var::X, x).with(Var::Y, y)
    }

    pub fn xty(x: f64, t: f64, y: f64) -> Self {
        Self::new().with(Var::X, x).with(Var::T, t).with(Var::Y, y)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("variable '{0}' is not bound")]
    Unbound(Var),
    #[error("domain error: {func}({arg}) is undefined")]
    Domain { func: &'static str, arg: f64 },
    #[error("domain error: division by zero ({numerator} / 0)")]
    DivisionByZero { numerator: f64 },
    #[error("domain error: {base}^{exponent} is not a real number")]
    Power { base: f64, exponent: f64 },
}

fn apply(func: Func, arg: f64) -> Result<f64, EvalError> {
    let domain = || EvalError::Domain {
        func: func.name(),
        arg,
    };
    match func {
        Func::Sin => Ok(arg.sin()),
        Func::Cos => Ok(arg.cos()),
        Func::Tan => Ok(arg.tan()),
        Func::Exp => Ok(arg.exp()),
        Func::Abs => Ok(arg.abs()),
        Func::Log if arg > 0.0 => Ok(arg.ln()),
        Func::Sqrt if arg >= 0.0 => Ok(arg.sqrt()),
        Func::Log | Func::Sqrt => Err(domain()),
    }
}

fn eval_node(node: &Node, env: &Environment) -> Result<f64, EvalError> {
    match node {
        Node::Num(value) => Ok(*value),
        Node::Var(var) => env.get(*var).ok_or(EvalError::Unbound(*var)),
        Node::Neg(inner) => Ok(-eval_node(inner, env)?),
        Node::Call(func, arg) => apply(*func, eval_node(arg, env)?),
        Node::Binary(op, lhs, rhs) => {
            let a = eval_node(lhs, env)?;
            let b = eval_node(rhs, env)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div if b == 0.0 => Err(EvalError::DivisionByZero { numerator: a }),
                BinOp::Div => Ok(a / b),
                BinOp::Pow => {
                    let value = a.powf(b);
                    if value.is_nan() && !a.is_nan() && !b.is_nan() {
                        Err(EvalError::Power {
                            base: a,
                            exponent: b,
                        })
                    } else {
                        Ok(value)
                    }
                }
            }
        }
    }
}

/// Evaluates `e` in double precision.
///
/// Domain violations (`log` of a non-positive number, `sqrt` of a negative
/// number, division by zero, negative base with a fractional exponent) are
/// errors rather than NaN. Overflow to infinity is not an error here.
pub fn evaluate(e: &Expression, env: &Environment) -> Result<f64, EvalError> {
    eval_node(e.root(), env)
}
