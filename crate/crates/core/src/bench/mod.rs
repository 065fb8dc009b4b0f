//! Built-in example problems with known solutions, error tables and
//! empirical convergence orders.

pub mod literature;

use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{parse, EvalError};
use crate::problem::VideProblem;
use crate::solver::{solve, ConfigError, SolveError, SolverConfig, Trajectory};

/// Report points must lie within this distance of a grid node.
pub const GRID_TOLERANCE: f64 = 1e-9;

pub const BUILTIN_NAMES: [&str; 4] = ["ex1", "ex2", "ex3", "ex4"];

// (name, f, K, y0, exact); all start at x0 = 0
const BUILTINS: [(&str, &str, &str, f64, &str); 4] = [
    (
        "ex1",
        "1 + 2*x - y",
        "x*(1 + 2*x)*exp(t*(x - t))*y",
        1.0,
        "exp(x^2)",
    ),
    ("ex2", "2*x - sin(x^4)/2", "x^2*t*cos(x^2*y)", 0.0, "x^2"),
    ("ex3", "1 - x/2 + x*exp(-x^2)/2", "x*t*exp(-y^2)", 0.0, "x"),
    ("ex4", "1", "exp(-t)*y^2", 1.0, "exp(x)"),
];

fn build(entry: &(&str, &str, &str, f64, &str)) -> VideProblem {
    let (name, f, k, y0, exact) = *entry;
    let p = |s: &str| parse(s).expect("built-in expression parses");
    VideProblem::new(name, p(f), p(k), 0.0, y0, Some(p(exact)))
        .expect("built-in problem is well formed")
}

pub fn builtin_problems() -> Vec<VideProblem> {
    BUILTINS.iter().map(build).collect()
}

pub fn builtin(name: &str) -> Option<VideProblem> {
    BUILTINS.iter().find(|e| e.0 == name).map(build)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("problem '{0}' has no exact solution")]
    NoExact(String),
    #[error("x = {x} is not on the grid x0 + j*{h}, j = 0..={steps}")]
    OffGrid { x: f64, h: f64, steps: usize },
    #[error("exact solution at x = {x}: {source}")]
    Exact { x: f64, source: EvalError },
    #[error("need at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("need at least 2 levels, got {0}")]
    TooFewLevels(usize),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub x: f64,
    pub computed: f64,
    pub exact: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable {
    pub problem: String,
    pub h: f64,
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub fn max_abs_error(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.abs_error))
    }

    pub fn row_at(&self, x: f64) -> Option<&ErrorRow> {
        self.rows.iter().find(|r| (r.x - x).abs() <= GRID_TOLERANCE)
    }
}

fn exact_at(p: &VideProblem, x: f64) -> Result<f64, BenchError> {
    match p.eval_exact(x) {
        None => Err(BenchError::NoExact(p.name().to_string())),
        Some(r) => r.map_err(|source| BenchError::Exact { x, source }),
    }
}

fn grid_index(p: &VideProblem, x: f64, h: f64, steps: usize) -> Result<usize, BenchError> {
    let off_grid = BenchError::OffGrid { x, h, steps };
    let k = ((x - p.x0()) / h).round();
    if !(k >= 0.0 && k <= steps as f64) {
        return Err(off_grid);
    }
    let i = k as usize;
    if (p.x0() + i as f64 * h - x).abs() > GRID_TOLERANCE {
        return Err(off_grid);
    }
    Ok(i)
}

fn row(p: &VideProblem, traj: &Trajectory, i: usize) -> Result<ErrorRow, BenchError> {
    let (x, computed) = (traj.nodes()[i], traj.values()[i]);
    let exact = exact_at(p, x)?;
    Ok(ErrorRow {
        x,
        computed,
        exact,
        abs_error: (computed - exact).abs(),
    })
}

/// Solves with `steps` steps of size `h` and reports errors at the grid
/// nodes nearest `report_points` (sorted by `x`).
pub fn error_table(
    p: &VideProblem,
    h: f64,
    steps: usize,
    report_points: &[f64],
) -> Result<ErrorTable, BenchError> {
    let cfg = SolverConfig::new(h, steps)?;
    if p.exact().is_none() {
        return Err(BenchError::NoExact(p.name().to_string()));
    }
    let mut indices = report_points
        .iter()
        .map(|&x| grid_index(p, x, h, steps))
        .collect::<Result<Vec<_>, _>>()?;
    indices.sort_unstable();
    let traj = solve(p, &cfg)?;
    let rows = indices
        .into_iter()
        .map(|i| row(p, &traj, i))
        .collect::<Result<_, _>>()?;
    Ok(ErrorTable {
        problem: p.name().to_string(),
        h,
        rows,
    })
}

/// Errors at every node of a `steps`-step solve.
pub fn full_error_table(p: &VideProblem, h: f64, steps: usize) -> Result<ErrorTable, BenchError> {
    let cfg = SolverConfig::new(h, steps)?;
    if p.exact().is_none() {
        return Err(BenchError::NoExact(p.name().to_string()));
    }
    let traj = solve(p, &cfg)?;
    let rows = (0..traj.len())
        .map(|i| row(p, &traj, i))
        .collect::<Result<_, _>>()?;
    Ok(ErrorTable {
        problem: p.name().to_string(),
        h,
        rows,
    })
}

/// Maximum error over `nodes` equispaced nodes on `[x0, x0 + 1]`.
pub fn max_abs_error(p: &VideProblem, nodes: usize) -> Result<f64, BenchError> {
    if nodes < 2 {
        return Err(BenchError::TooFewNodes(nodes));
    }
    let steps = nodes - 1;
    Ok(full_error_table(p, 1.0 / steps as f64, steps)?.max_abs_error())
}

/// Errors below this are indistinguishable from rounding.
fn noise_floor(exact: f64) -> f64 {
    64.0 * f64::EPSILON * exact.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderEstimate {
    pub hs: Vec<f64>,
    pub errors: Vec<f64>,
    /// `log2(e(h) / e(h/2))` per consecutive pair; `None` where either
    /// error is at the rounding floor.
    pub estimates: Vec<Option<f64>>,
    /// Median of the defined estimates.
    pub summary: Option<f64>,
}

impl OrderEstimate {
    pub fn undefined_pairs(&self) -> usize {
        self.estimates.iter().filter(|e| e.is_none()).count()
    }
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    Some(if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    })
}

/// Error at `x_end` for `h0, h0/2, …` (`levels` values).
pub fn estimate_order(
    p: &VideProblem,
    h0: f64,
    levels: usize,
    x_end: f64,
) -> Result<OrderEstimate, BenchError> {
    if levels < 2 {
        return Err(BenchError::TooFewLevels(levels));
    }
    let exact = exact_at(p, x_end)?;
    let floor = noise_floor(exact);
    let hs: Vec<f64> = (0..levels).map(|l| h0 / (1u64 << l) as f64).collect();
    let errors = hs
        .par_iter()
        .map(|&h| {
            SolverConfig::new(h, 1)?;
            let steps = ((x_end - p.x0()) / h).round().max(0.0) as usize;
            let i = grid_index(p, x_end, h, steps)?;
            let cfg = SolverConfig::new(h, i)?;
            let (_, y) = solve(p, &cfg)?.last();
            Ok((y - exact).abs())
        })
        .collect::<Result<Vec<f64>, BenchError>>()?;
    let estimates: Vec<Option<f64>> = errors
        .windows(2)
        .map(|w| (w[0] > floor && w[1] > floor).then(|| (w[0] / w[1]).log2()))
        .collect();
    let summary = median(estimates.iter().flatten().copied().collect());
    Ok(OrderEstimate {
        hs,
        errors,
        estimates,
        summary,
    })
}

/// Maximum error on `[x0, x0 + 1]` for `h0, h0/2, …`; `1/h0` must be an
/// integer.
pub fn convergence_sweep(
    p: &VideProblem,
    h0: f64,
    levels: usize,
) -> Result<Vec<(f64, f64)>, BenchError> {
    (0..levels)
        .into_par_iter()
        .map(|l| {
            let h = h0 / (1u64 << l) as f64;
            SolverConfig::new(h, 1)?;
            let steps = (1.0 / h).round() as usize;
            grid_index(p, p.x0() + 1.0, h, steps)?;
            Ok((h, full_error_table(p, h, steps)?.max_abs_error()))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthRow {
    pub depth: usize,
    pub max_abs_error: f64,
}

/// Maximum error over the grid for DJM depths 1, 2 and 3.
pub fn depth_comparison(
    p: &VideProblem,
    h: f64,
    steps: usize,
) -> Result<Vec<DepthRow>, BenchError> {
    if p.exact().is_none() {
        return Err(BenchError::NoExact(p.name().to_string()));
    }
    (1..=3)
        .map(|depth| {
            let cfg = SolverConfig::with_depth(h, steps, depth)?;
            let traj = solve(p, &cfg)?;
            let mut max = 0.0f64;
            for i in 0..traj.len() {
                max = max.max(row(p, &traj, i)?.abs_error);
            }
            Ok(DepthRow {
                depth,
                max_abs_error: max,
            })
        })
        .collect()
}
