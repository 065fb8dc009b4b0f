//! The `vide` command-line front end.
//!
//! Output is CSV (comma-separated, header row, `\n` line endings) with every
//! real number written as `{:.16e}` (17 significant digits). Errors go to
//! stderr as one line `error[<kind>]: <reason>`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or validation
//! error, 3 solver failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand};

use crate::analysis::{bifurcation_thresholds, classify_bifurcation, stability_region};
use crate::bench::literature::{self, REPORT_XS};
use crate::bench::{builtin, error_table, max_abs_error, BenchError, BUILTIN_NAMES};
use crate::problem::VideProblem;
use crate::problem_file::parse_problem_file;
use crate::solver::{solve, SolveError, SolverConfig, DEFAULT_DJM_DEPTH};
use crate::verify;

#[derive(Debug, Parser)]
#[command(
    name = "vide",
    version,
    about = "Solve and analyse Volterra integro-differential equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem and write j,x,y[,exact,abs_error] rows.
    #[command(group(ArgGroup::new("source").required(true).args(["problem", "example"])))]
    Solve {
        /// Problem file (key = value lines).
        #[arg(long, value_name = "PATH")]
        problem: Option<PathBuf>,
        /// Built-in example: ex1, ex2, ex3 or ex4.
        #[arg(long, value_name = "NAME")]
        example: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
        #[arg(long)]
        steps: usize,
        /// Number of DJM terms.
        #[arg(long, default_value_t = DEFAULT_DJM_DEPTH)]
        depth: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Error table of a built-in example with published comparator columns.
    Table {
        #[arg(long, value_name = "NAME")]
        example: String,
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
    },
    /// Stability grid over (u, v) = (h*alpha, h^2*beta).
    Stability {
        #[arg(long, value_name = "A:B", allow_hyphen_values = true)]
        u_range: String,
        #[arg(long, value_name = "A:B", allow_hyphen_values = true)]
        v_range: String,
        /// Cells per axis.
        #[arg(long)]
        resolution: usize,
    },
    /// Bifurcation thresholds and per-alpha region labels.
    Bifurcation {
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
        #[arg(long, value_name = "A:B", allow_hyphen_values = true)]
        alpha_range: String,
        #[arg(long)]
        samples: usize,
        /// Half-width of the boundary bands around each threshold.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run the acceptance checks.
    Verify {
        /// Print check names without running them.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum CliError {
    Usage(String),
    Input(String),
    Solver(String),
    Io(String),
    Verify(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) | CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Solver(_) => 3,
        }
    }

    fn line(&self) -> String {
        let (kind, msg) = match self {
            CliError::Usage(m) => ("usage", m),
            CliError::Input(m) => ("input", m),
            CliError::Solver(m) => ("solver", m),
            CliError::Io(m) => ("io", m),
            CliError::Verify(m) => ("verify", m),
        };
        format!("error[{kind}]: {}", msg.replace('\n', " "))
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Solve(SolveError::Step { .. }) => CliError::Solver(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let msg = first.strip_prefix("error: ").unwrap_or(first);
            let err = CliError::Usage(format!("{msg} (see --help)"));
            let _ = writeln!(stderr, "{}", err.line());
            return err.code();
        }
    };
    let result = match cli.command {
        Command::Solve {
            problem,
            example,
            h,
            steps,
            depth,
            out,
        } => cmd_solve(problem, example, h, steps, depth, out, stdout),
        Command::Table { example, h } => cmd_table(&example, h, stdout),
        Command::Stability {
            u_range,
            v_range,
            resolution,
        } => cmd_stability(&u_range, &v_range, resolution, stdout),
        Command::Bifurcation {
            h,
            alpha_range,
            samples,
            tol,
        } => cmd_bifurcation(h, &alpha_range, samples, tol, stdout),
        Command::Verify { list } => cmd_verify(list, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.line());
            e.code()
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn emit(stdout: &mut dyn Write, csv: &str) -> Result<(), CliError> {
    stdout
        .write_all(csv.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| CliError::Io(format!("writing output: {e}")))
}

fn example_problem(name: &str) -> Result<VideProblem, CliError> {
    builtin(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown example '{name}' (expected one of {})",
            BUILTIN_NAMES.join(", ")
        ))
    })
}

/// Parses `a:b` with decimal endpoints.
fn parse_range(flag: &str, text: &str) -> Result<(f64, f64), CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--{flag} expects A:B with decimal endpoints, got '{text}'"
        ))
    };
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    if a >= b {
        return Err(CliError::Usage(format!(
            "--{flag} needs A < B, got '{text}'"
        )));
    }
    Ok((a, b))
}

fn cmd_solve(
    problem: Option<PathBuf>,
    example: Option<String>,
    h: f64,
    steps: usize,
    depth: usize,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let p = match (problem, example) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Input(format!("reading {}: {e}", path.display())))?;
            parse_problem_file(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => example_problem(&name)?,
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --problem, --example".into(),
            ))
        }
    };
    let cfg =
        SolverConfig::with_depth(h, steps, depth).map_err(|e| CliError::Usage(e.to_string()))?;
    let traj = solve(&p, &cfg).map_err(|e| CliError::Solver(e.to_string()))?;

    let mut csv = String::from(if p.exact().is_some() {
        "j,x,y,exact,abs_error\n"
    } else {
        "j,x,y\n"
    });
    for (j, (x, y)) in traj.iter().enumerate() {
        let _ = write!(csv, "{j},{},{}", num(x), num(y));
        if let Some(exact) = p.eval_exact(x) {
            let exact =
                exact.map_err(|e| CliError::Input(format!("exact solution at x = {x}: {e}")))?;
            let _ = write!(csv, ",{},{}", num(exact), num((y - exact).abs()));
        }
        csv.push('\n');
    }
    match out {
        Some(path) => std::fs::write(&path, csv)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display()))),
        None => emit(stdout, &csv),
    }
}

/// `Some(k)` when `span = k·h` within the grid tolerance.
fn divides(h: f64, span: f64) -> Option<usize> {
    if !(h > 0.0 && h.is_finite()) {
        return None;
    }
    let k = (span / h).round();
    (k >= 1.0 && (k * h - span).abs() <= crate::bench::GRID_TOLERANCE).then_some(k as usize)
}

fn cmd_table(example: &str, h: f64, stdout: &mut dyn Write) -> Result<(), CliError> {
    let p = example_problem(example)?;
    let csv = match literature::max_error(example) {
        Some(published) => {
            let steps = divides(h, 1.0).ok_or_else(|| {
                CliError::Usage(format!("--h must divide 1 for {example}, got {h}"))
            })?;
            let nodes = steps + 1;
            let err = max_abs_error(&p, nodes)?;
            let mut csv = String::from("n,h,max_abs_error,reported,reported_time_s");
            for c in published.comparators {
                let _ = write!(csv, ",{},{}_time_s[{}]", c.header(), c.key, c.source);
            }
            csv.push('\n');
            let _ = write!(csv, "{nodes},{},{}", num(1.0 / steps as f64), num(err));
            let row = published.row(nodes);
            let cell = |v: Option<f64>| v.map(num).unwrap_or_default();
            let _ = write!(
                csv,
                ",{},{}",
                cell(row.map(|r| published.reported[r])),
                cell(row.map(|r| published.reported_times[r]))
            );
            for c in published.comparators {
                let _ = write!(
                    csv,
                    ",{},{}",
                    cell(row.map(|r| c.values[r])),
                    cell(row.and_then(|r| c.times.map(|t| t[r])))
                );
            }
            csv.push('\n');
            csv
        }
        None => {
            divides(h, 0.1).ok_or_else(|| {
                CliError::Usage(format!("--h must divide 0.1 within 1e-9, got {h}"))
            })?;
            let steps = divides(h, 1.0).expect("h divides 0.1");
            let table = error_table(&p, h, steps, &REPORT_XS)?;
            let has_literature = example == "ex1";
            let published = literature::pointwise(example, h);
            let mut csv = String::from("x,computed,exact,abs_error");
            if has_literature {
                csv.push_str(",reported,reported_note");
                for c in literature::EX1_H_0_1.comparators {
                    let _ = write!(csv, ",{}", c.header());
                }
            }
            csv.push('\n');
            for (i, r) in table.rows.iter().enumerate() {
                let _ = write!(
                    csv,
                    "{},{},{},{}",
                    num(r.x),
                    num(r.computed),
                    num(r.exact),
                    num(r.abs_error)
                );
                if has_literature {
                    match published {
                        Some(t) => {
                            let note = if t.suspect_rows.contains(&i) {
                                "suspected-misprint"
                            } else {
                                ""
                            };
                            let _ = write!(csv, ",{},{note}", num(t.reported[i]));
                            for c in t.comparators {
                                let _ = write!(csv, ",{}", num(c.values[i]));
                            }
                        }
                        None => {
                            csv.push_str(",,");
                            for _ in literature::EX1_H_0_1.comparators {
                                csv.push(',');
                            }
                        }
                    }
                }
                csv.push('\n');
            }
            csv
        }
    };
    emit(stdout, &csv)
}

fn cmd_stability(
    u_range: &str,
    v_range: &str,
    resolution: usize,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let (u0, u1) = parse_range("u-range", u_range)?;
    let (v0, v1) = parse_range("v-range", v_range)?;
    let grid =
        stability_region(u0, u1, v0, v1, resolution).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut csv = String::from("u,v,re_r1,im_r1,re_r2,im_r2,stable\n");
    for a in &grid.cells {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            num(a.u),
            num(a.v),
            num(a.r1.re),
            num(a.r1.im),
            num(a.r2.re),
            num(a.r2.im),
            a.stable
        );
    }
    emit(stdout, &csv)
}

fn cmd_bifurcation(
    h: f64,
    alpha_range: &str,
    samples: usize,
    tol: f64,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let (a0, a1) = parse_range("alpha-range", alpha_range)?;
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tol must be a finite non-negative number, got {tol}"
        )));
    }
    let t = bifurcation_thresholds(h).map_err(|e| CliError::Input(e.to_string()))?;
    let mut csv = String::new();
    let _ = writeln!(csv, "# h = {}", num(h));
    let _ = writeln!(csv, "# alpha0 = {:.11e}", t.alpha0);
    let _ = writeln!(csv, "# alpha1 = {:.11e}", t.alpha1);
    let _ = writeln!(csv, "# alpha2 = {:.11e}", t.alpha2);
    csv.push_str("alpha,region,|r1|,|r2|\n");
    for i in 0..samples {
        let alpha = if samples == 1 {
            a0
        } else {
            a0 + (a1 - a0) * i as f64 / (samples - 1) as f64
        };
        let r = classify_bifurcation(alpha, h, tol).map_err(|e| CliError::Input(e.to_string()))?;
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            num(alpha),
            r.region.label(),
            num(r.r1.norm()),
            num(r.r2.norm())
        );
    }
    emit(stdout, &csv)
}

fn cmd_verify(list: bool, stdout: &mut dyn Write) -> Result<(), CliError> {
    let checks = verify::checks();
    let mut text = String::new();
    if list {
        for c in &checks {
            let _ = writeln!(text, "{}\t{}", c.name, c.summary);
        }
        return emit(stdout, &text);
    }
    let mut failed = Vec::new();
    for c in &checks {
        let report = c.run();
        let _ = writeln!(text, "{report}");
        if !report.passed {
            failed.push(report.name);
        }
    }
    let _ = writeln!(
        text,
        "{} of {} checks passed",
        checks.len() - failed.len(),
        checks.len()
    );
    emit(stdout, &text)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(format!(
            "{} of {} checks failed: {}",
            failed.len(),
            checks.len(),
            failed.join(", ")
        )))
    }
}
