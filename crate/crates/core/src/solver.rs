//! Trapezium + DJM time stepping on a uniform grid.
//!
//! Integrating the equation over `[x_j, x_{j+1}]` and applying the trapezium
//! rule to both the outer integral and the memory integral gives an implicit
//! relation `y_{j+1} = g + N(y_{j+1})`, where `g` (called `M1` below) depends
//! only on values already computed and
//!
//! ```text
//! N(z) = h/2 f(x_{j+1}, z) + h²/4 K(x_{j+1}, x_{j+1}, z).
//! ```
//!
//! The implicit relation is resolved by a truncated Daftardar-Gejji–Jafari
//! series. Because the linear part of the decomposition is zero, the k-term
//! truncation telescopes to the nested form `s_{k-1}` with `s_0 = g` and
//! `s_{m+1} = g + N(s_m)`. The default three terms give
//! `y_{j+1} = M1 + N(M2)` with `M2 = M1 + N(M1)`.

use std::fmt;

use thiserror::Error;

use crate::expr::EvalError;
use crate::problem::VideProblem;

pub const DEFAULT_DJM_DEPTH: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("step size must be positive and finite, got {0}")]
    StepSize(f64),
    #[error("number of steps must be at least 1")]
    NoSteps,
    #[error("DJM depth must be at least 1")]
    Depth,
}

/// Step size, step count and DJM truncation depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    h: f64,
    steps: usize,
    djm_depth: usize,
}

impl SolverConfig {
    /// Three-term DJM, the method's default.
    pub fn new(h: f64, steps: usize) -> Result<Self, ConfigError> {
        Self::with_depth(h, steps, DEFAULT_DJM_DEPTH)
    }

    pub fn with_depth(h: f64, steps: usize, djm_depth: usize) -> Result<Self, ConfigError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(ConfigError::StepSize(h));
        }
        if steps == 0 {
            return Err(ConfigError::NoSteps);
        }
        if djm_depth == 0 {
            return Err(ConfigError::Depth);
        }
        Ok(SolverConfig {
            h,
            steps,
            djm_depth,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn djm_depth(&self) -> usize {
        self.djm_depth
    }
}

/// Grid nodes `x_j = x0 + j·h` and the computed approximations `y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    problem_name: String,
    h: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl Trajectory {
    pub fn problem_name(&self) -> &str {
        &self.problem_name
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of grid points, `steps + 1`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> (f64, f64) {
        let n = self.values.len() - 1;
        (self.nodes[n], self.values[n])
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.values.iter().copied())
    }
}

/// `M1` and `M2` of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepIntermediates {
    pub m1: f64,
    /// First corrected value `M1 + N(M1)`; equal to `m1` when the depth is 1.
    pub m2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    M1,
    /// DJM partial sum `s_m`, m ≥ 1.
    Term(usize),
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::M1 => f.write_str("M1"),
            Stage::Term(1) => f.write_str("M2"),
            Stage::Term(m) => write!(f, "DJM partial sum s_{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("f({x}, {y}): {source}")]
    Rhs { x: f64, y: f64, source: EvalError },
    #[error("K({x}, {t}, {y}){}: {source}", .index.map(|i| format!(" at history index {i}")).unwrap_or_default())]
    Kernel {
        index: Option<usize>,
        x: f64,
        t: f64,
        y: f64,
        source: EvalError,
    },
    #[error("{stage} is not finite ({value})")]
    NonFinite { stage: Stage, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("step {step} failed with {computed} values computed: {source}")]
    Step {
        step: usize,
        computed: usize,
        source: StepError,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefineError<E> {
    #[error("DJM partial sum s_{term} is not finite ({value})")]
    NonFinite { term: usize, value: f64 },
    #[error("functional evaluation failed: {0}")]
    Functional(E),
}

#[inline]
fn node(x0: f64, i: usize, h: f64) -> f64 {
    x0 + i as f64 * h
}

fn kernel_at(
    p: &VideProblem,
    index: Option<usize>,
    x: f64,
    t: f64,
    y: f64,
) -> Result<f64, StepError> {
    p.eval_kernel(x, t, y).map_err(|source| StepError::Kernel {
        index,
        x,
        t,
        y,
        source,
    })
}

fn rhs_at(p: &VideProblem, x: f64, y: f64) -> Result<f64, StepError> {
    p.eval_f(x, y)
        .map_err(|source| StepError::Rhs { x, y, source })
}

/// The two history sums of `M1`:
/// `Σ_{i=1}^{j-1} K(x_j, x_i, y_i)` and `Σ_{i=1}^{j} K(x_{j+1}, x_i, y_i)`.
///
/// `values` must hold at least `y_0..=y_j`. Empty sums are zero.
pub fn kernel_lag_sums(
    p: &VideProblem,
    values: &[f64],
    j: usize,
    h: f64,
) -> Result<(f64, f64), StepError> {
    assert!(values.len() > j, "history must contain y_0..=y_{j}");
    let x0 = p.x0();
    let xj = node(x0, j, h);
    let xj1 = node(x0, j + 1, h);
    let mut inner = 0.0;
    let mut outer = 0.0;
    for (i, &yi) in values.iter().enumerate().take(j + 1).skip(1) {
        let xi = node(x0, i, h);
        if i < j {
            inner += kernel_at(p, Some(i), xj, xi, yi)?;
        }
        outer += kernel_at(p, Some(i), xj1, xi, yi)?;
    }
    Ok((inner, outer))
}

/// Explicit part `M1` of step `j → j+1`, applied verbatim for every `j`
/// (at `j = 0` the corner `K(x_0, x_0, y_0)` is counted twice).
pub fn compute_m1(p: &VideProblem, values: &[f64], j: usize, h: f64) -> Result<f64, StepError> {
    let x0 = p.x0();
    let y0 = p.y0();
    let xj = node(x0, j, h);
    let xj1 = node(x0, j + 1, h);
    let yj = values[j];
    let (inner, outer) = kernel_lag_sums(p, values, j, h)?;
    let corners = kernel_at(p, None, xj, x0, y0)?
        + kernel_at(p, None, xj, xj, yj)?
        + kernel_at(p, None, xj1, x0, y0)?;
    let m1 =
        yj + h / 2.0 * rhs_at(p, xj, yj)? + h * h / 4.0 * corners + h * h / 2.0 * (inner + outer);
    if !m1.is_finite() {
        return Err(StepError::NonFinite {
            stage: Stage::M1,
            value: m1,
        });
    }
    Ok(m1)
}

/// `N(z) = h/2 f(x_{j+1}, z) + h²/4 K(x_{j+1}, x_{j+1}, z)`.
pub fn implicit_part(p: &VideProblem, z: f64, j: usize, h: f64) -> Result<f64, StepError> {
    let xj1 = node(p.x0(), j + 1, h);
    Ok(h / 2.0 * rhs_at(p, xj1, z)? + h * h / 4.0 * kernel_at(p, None, xj1, xj1, z)?)
}

/// `M2 = M1 + N(M1)`.
pub fn compute_m2(p: &VideProblem, m1: f64, j: usize, h: f64) -> Result<f64, StepError> {
    let m2 = m1 + implicit_part(p, m1, j, h)?;
    if !m2.is_finite() {
        return Err(StepError::NonFinite {
            stage: Stage::Term(1),
            value: m2,
        });
    }
    Ok(m2)
}

/// Runs the DJM recursion and returns `(s_1, s_{depth-1})`; `s_1` is `g`
/// when `depth == 1`.
fn djm_series<F, E>(g: f64, depth: usize, mut n: F) -> Result<(f64, f64), RefineError<E>>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    assert!(depth >= 1, "DJM depth must be at least 1");
    if !g.is_finite() {
        return Err(RefineError::NonFinite { term: 0, value: g });
    }
    let mut first = g;
    let mut s = g;
    for term in 1..depth {
        s = g + n(s).map_err(RefineError::Functional)?;
        if !s.is_finite() {
            return Err(RefineError::NonFinite { term, value: s });
        }
        if term == 1 {
            first = s;
        }
    }
    Ok((first, s))
}

/// k-term DJM value for `u = g + N(u)` (no linear part): `s_{k-1}` with
/// `s_0 = g`, `s_{m+1} = g + N(s_m)`.
pub fn djm_refine<F, E>(g: f64, depth: usize, n: F) -> Result<f64, RefineError<E>>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    djm_series(g, depth, n).map(|(_, last)| last)
}

/// Advances from `y_j` to `y_{j+1}` using a `depth`-term DJM correction.
pub fn djm_step(
    p: &VideProblem,
    values: &[f64],
    j: usize,
    h: f64,
    depth: usize,
) -> Result<(f64, StepIntermediates), StepError> {
    let m1 = compute_m1(p, values, j, h)?;
    let (m2, next) = djm_series(m1, depth, |z| implicit_part(p, z, j, h)).map_err(|e| match e {
        RefineError::NonFinite { term, value } => StepError::NonFinite {
            stage: Stage::Term(term),
            value,
        },
        RefineError::Functional(inner) => inner,
    })?;
    Ok((next, StepIntermediates { m1, m2 }))
}

/// Solves on `x_j = x0 + j·h`, `j = 0..=steps`.
///
/// Every step recomputes both history sums, so a solve costs O(steps²) kernel
/// evaluations.
pub fn solve(p: &VideProblem, cfg: &SolverConfig) -> Result<Trajectory, SolveError> {
    let h = cfg.h();
    let n = cfg.steps();
    let mut values = Vec::with_capacity(n + 1);
    values.push(p.y0());
    for j in 0..n {
        let (next, _) =
            djm_step(p, &values, j, h, cfg.djm_depth()).map_err(|source| SolveError::Step {
                step: j,
                computed: values.len(),
                source,
            })?;
        values.push(next);
    }
    let nodes = (0..=n).map(|j| node(p.x0(), j, h)).collect();
    Ok(Trajectory {
        problem_name: p.name().to_string(),
        h,
        nodes,
        values,
    })
}
