use std::collections::BTreeSet;

use thiserror::Error;

use crate::expr::{Environment, EvalError, Expression, Var};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("{role} may only use variables {{{allowed}}}, found '{found}'")]
    ForbiddenVariable {
        role: &'static str,
        allowed: String,
        found: Var,
    },
    #[error("initial {what} must be finite, got {value}")]
    NonFiniteInitial { what: &'static str, value: f64 },
}

/// Initial-value problem `y'(x) = f(x, y) + ∫_{x0}^{x} K(x, t, y(t)) dt`,
/// `y(x0) = y0`, with an optional closed-form solution for error reporting.
///
/// The method assumes `f` and `K` are continuous and Lipschitz in `y`; this is
/// not checked.
#[derive(Debug, Clone, PartialEq)]
pub struct VideProblem {
    name: String,
    f: Expression,
    kernel: Expression,
    x0: f64,
    y0: f64,
    exact: Option<Expression>,
}

fn check_vars(role: &'static str, e: &Expression, allowed: &[Var]) -> Result<(), ProblemError> {
    let allowed_set: BTreeSet<Var> = allowed.iter().copied().collect();
    if let Some(&found) = e.free_variables().difference(&allowed_set).next() {
        return Err(ProblemError::ForbiddenVariable {
            role,
            allowed: allowed
                .iter()
                .map(|v| v.name())
                .collect::<Vec<_>>()
                .join(", "),
            found,
        });
    }
    Ok(())
}

impl VideProblem {
    pub fn new(
        name: impl Into<String>,
        f: Expression,
        kernel: Expression,
        x0: f64,
        y0: f64,
        exact: Option<Expression>,
    ) -> Result<Self, ProblemError> {
        check_vars("f", &f, &[Var::X, Var::Y])?;
        check_vars("K", &kernel, &[Var::X, Var::T, Var::Y])?;
        if let Some(exact) = &exact {
            check_vars("exact", exact, &[Var::X])?;
        }
        for (what, value) in [("x0", x0), ("y0", y0)] {
            if !value.is_finite() {
                return Err(ProblemError::NonFiniteInitial { what, value });
            }
        }
        Ok(VideProblem {
            name: name.into(),
            f,
            kernel,
            x0,
            y0,
            exact,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn f(&self) -> &Expression {
        &self.f
    }

    pub fn kernel(&self) -> &Expression {
        &self.kernel
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn exact(&self) -> Option<&Expression> {
        self.exact.as_ref()
    }

    pub fn eval_f(&self, x: f64, y: f64) -> Result<f64, EvalError> {
        self.f.evaluate(&Environment::xy(x, y))
    }

    pub fn eval_kernel(&self, x: f64, t: f64, y: f64) -> Result<f64, EvalError> {
        self.kernel.evaluate(&Environment::xty(x, t, y))
    }

    /// `None` when the problem carries no exact solution.
    pub fn eval_exact(&self, x: f64) -> Option<Result<f64, EvalError>> {
        self.exact.as_ref().map(|e| e.evaluate(&Environment::x(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn p(text: &str) -> Expression {
        parse(text).unwrap()
    }

    #[test]
    fn accepts_permitted_variables() {
        let problem = VideProblem::new("ok", p("x+y"), p("x*t*y"), 0.0, 1.0, Some(p("x"))).unwrap();
        assert_eq!(problem.eval_f(1.0, 2.0), Ok(3.0));
        assert_eq!(problem.eval_kernel(1.0, 2.0, 3.0), Ok(6.0));
        assert_eq!(problem.eval_exact(0.5), Some(Ok(0.5)));
    }

    #[test]
    fn rejects_t_in_f() {
        let err = VideProblem::new("bad", p("x+t"), p("1"), 0.0, 1.0, None).unwrap_err();
        assert_eq!(
            err,
            ProblemError::ForbiddenVariable {
                role: "f",
                allowed: "x, y".into(),
                found: Var::T
            }
        );
    }

    #[test]
    fn rejects_y_in_exact() {
        let err = VideProblem::new("bad", p("1"), p("1"), 0.0, 1.0, Some(p("x*y"))).unwrap_err();
        assert!(matches!(
            err,
            ProblemError::ForbiddenVariable {
                role: "exact",
                found: Var::Y,
                ..
            }
        ));
    }

    #[test]
    fn rejects_non_finite_initial_values() {
        let err = VideProblem::new("bad", p("1"), p("1"), 0.0, f64::NAN, None).unwrap_err();
        assert!(matches!(
            err,
            ProblemError::NonFiniteInitial { what: "y0", .. }
        ));
    }
}
