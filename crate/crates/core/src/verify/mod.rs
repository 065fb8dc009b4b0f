//! Acceptance checks, shared by `vide verify` and the `acceptance` test target.

pub mod fuzz;
pub mod oracle;

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    assess_stability, bifurcation_thresholds, classify_bifurcation, observe_sequence,
    simulate_difference,
};
use crate::bench::{builtin, builtin_problems, convergence_sweep, estimate_order};
use crate::expr::{parse, Environment};
use crate::solver::{djm_step, solve, SolverConfig, DEFAULT_DJM_DEPTH};

use self::fuzz::ExprFuzzer;
use self::oracle::{ScriptedScheme, EXAMPLES};

/// Produces `y_0..=y_steps` for a built-in example.
pub trait ExampleSolver {
    fn trajectory(&self, example: &str, h: f64, steps: usize) -> Result<Vec<f64>, String>;
}

/// The library solver on the parsed built-in problems.
pub struct LibrarySolver;

impl ExampleSolver for LibrarySolver {
    fn trajectory(&self, example: &str, h: f64, steps: usize) -> Result<Vec<f64>, String> {
        let p = builtin(example).ok_or_else(|| format!("unknown example '{example}'"))?;
        let cfg = SolverConfig::new(h, steps).map_err(|e| e.to_string())?;
        let traj = solve(&p, &cfg).map_err(|e| e.to_string())?;
        Ok(traj.values().to_vec())
    }
}

impl ExampleSolver for ScriptedScheme {
    fn trajectory(&self, example: &str, h: f64, steps: usize) -> Result<Vec<f64>, String> {
        let ex = oracle::example(example).ok_or_else(|| format!("unknown example '{example}'"))?;
        Ok(self.solve(&ex, h, steps))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            passed,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        CheckOutcome::new(false, detail)
    }
}

pub struct Check {
    pub name: &'static str,
    pub summary: &'static str,
    pub time_limit: Option<Duration>,
    run: fn() -> CheckOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({:.3} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

impl Check {
    /// Runs the check; a panic counts as a failure.
    pub fn run(&self) -> CheckReport {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(self.run)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            CheckOutcome::fail(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let mut passed = outcome.passed;
        let mut detail = outcome.detail;
        if let Some(limit) = self.time_limit {
            if elapsed > limit {
                passed = false;
                detail.push_str(&format!(
                    "; exceeded time limit {:.1} s",
                    limit.as_secs_f64()
                ));
            }
        }
        CheckReport {
            name: self.name,
            passed,
            detail,
            elapsed,
        }
    }
}

pub fn checks() -> Vec<Check> {
    let secs = |s: u64| Some(Duration::from_secs(s));
    vec![
        Check {
            name: "ex1-pointwise-h0.1",
            summary: "ex1 at h = 0.1: errors at x = 0.1 and 1.0 within factor 2 of 2.3e-5 and 1.0e-2",
            time_limit: secs(1),
            run: || check_ex1_coarse(&LibrarySolver),
        },
        Check {
            name: "ex1-pointwise-h0.025",
            summary: "ex1 at h = 0.025: errors at x = 1.0 and 0.5 within factor 2 of 6.6e-4 and 7.0e-5",
            time_limit: secs(2),
            run: || check_ex1_fine(&LibrarySolver),
        },
        Check {
            name: "ex2-max-error",
            summary: "ex2 on [0,1]: max error <= 5e-6 at 129 nodes, within factor 2 of 1.49e-3 at 5 nodes",
            time_limit: secs(2),
            run: || check_ex2_max(&LibrarySolver),
        },
        Check {
            name: "ex3-max-error",
            summary: "ex3 on [0,1]: max error <= 2.1e-6 at 129 nodes",
            time_limit: secs(2),
            run: || check_ex3_max(&LibrarySolver),
        },
        Check {
            name: "convergence-order",
            summary: "max error decreases over h = 0.1 .. 0.0125 for every example; order >= 1.8 on ex1 and ex4",
            time_limit: None,
            run: check_convergence,
        },
        Check {
            name: "stability-sanity",
            summary: "roots {1,1} at the origin; roots {1, 1+u+u^2/2+u^3/8} on v = 0",
            time_limit: None,
            run: check_stability,
        },
        Check {
            name: "bifurcation-thresholds",
            summary: "threshold limits at h = 0.01; unit-modulus pair at alpha0",
            time_limit: None,
            run: check_thresholds,
        },
        Check {
            name: "classifier-simulator",
            summary: "50 sampled (alpha, h): simulated behaviour matches the region label",
            time_limit: None,
            run: check_classifier_simulator,
        },
        Check {
            name: "one-step-oracle",
            summary: "first solver step matches a scripted evaluation to 1e-13 relative",
            time_limit: None,
            run: check_one_step,
        },
        Check {
            name: "parser-fuzz",
            summary: "1000 fuzzed expressions: no crash, print/parse round trip, evaluation matches a text evaluator",
            time_limit: None,
            run: check_parser_fuzz,
        },
    ]
}

pub fn run_all() -> Vec<CheckReport> {
    checks().iter().map(Check::run).collect()
}

fn within_factor(value: f64, reference: f64, factor: f64) -> bool {
    value <= reference * factor && value >= reference / factor
}

fn error_at(
    solver: &dyn ExampleSolver,
    example: &str,
    h: f64,
    steps: usize,
    indices: &[usize],
) -> Result<Vec<f64>, String> {
    let exact = oracle::example(example).ok_or("unknown example")?.exact;
    let ys = solver.trajectory(example, h, steps)?;
    Ok(indices
        .iter()
        .map(|&i| (ys[i] - exact(i as f64 * h)).abs())
        .collect())
}

fn max_error(solver: &dyn ExampleSolver, example: &str, nodes: usize) -> Result<f64, String> {
    let steps = nodes - 1;
    let all: Vec<usize> = (0..nodes).collect();
    let errors = error_at(solver, example, 1.0 / steps as f64, steps, &all)?;
    Ok(errors.into_iter().fold(0.0, f64::max))
}

fn pointwise(
    solver: &dyn ExampleSolver,
    h: f64,
    steps: usize,
    expected: &[(usize, f64, f64)],
) -> CheckOutcome {
    let indices: Vec<usize> = expected.iter().map(|e| e.0).collect();
    let errors = match error_at(solver, "ex1", h, steps, &indices) {
        Ok(e) => e,
        Err(e) => return CheckOutcome::fail(e),
    };
    let mut passed = true;
    let mut parts = Vec::new();
    for (&(_, x, reference), &err) in expected.iter().zip(&errors) {
        let ok = within_factor(err, reference, 2.0);
        passed &= ok;
        parts.push(format!(
            "x={x}: {err:.3e} vs {reference:.1e}{}",
            if ok { "" } else { " (off)" }
        ));
    }
    CheckOutcome::new(passed, parts.join(", "))
}

pub fn check_ex1_coarse(solver: &dyn ExampleSolver) -> CheckOutcome {
    pointwise(solver, 0.1, 10, &[(1, 0.1, 2.3e-5), (10, 1.0, 1.0e-2)])
}

pub fn check_ex1_fine(solver: &dyn ExampleSolver) -> CheckOutcome {
    pointwise(solver, 0.025, 40, &[(40, 1.0, 6.6e-4), (20, 0.5, 7.0e-5)])
}

pub fn check_ex2_max(solver: &dyn ExampleSolver) -> CheckOutcome {
    let (fine, coarse) = match (max_error(solver, "ex2", 129), max_error(solver, "ex2", 5)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return CheckOutcome::fail(e),
    };
    CheckOutcome::new(
        fine <= 5e-6 && within_factor(coarse, 1.49e-3, 2.0),
        format!("129 nodes: {fine:.3e} (bound 5e-6); 5 nodes: {coarse:.3e} vs 1.49e-3"),
    )
}

pub fn check_ex3_max(solver: &dyn ExampleSolver) -> CheckOutcome {
    match max_error(solver, "ex3", 129) {
        Ok(e) => CheckOutcome::new(e <= 2.1e-6, format!("129 nodes: {e:.3e} (bound 2.1e-6)")),
        Err(e) => CheckOutcome::fail(e),
    }
}

fn check_convergence() -> CheckOutcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for p in builtin_problems() {
        match convergence_sweep(&p, 0.1, 4) {
            Ok(sweep) => {
                let decreasing = sweep.windows(2).all(|w| w[1].1 < w[0].1);
                passed &= decreasing;
                if !decreasing {
                    parts.push(format!("{} not decreasing: {sweep:?}", p.name()));
                }
            }
            Err(e) => return CheckOutcome::fail(format!("{}: {e}", p.name())),
        }
    }
    for name in ["ex1", "ex4"] {
        let p = builtin(name).expect("built-in");
        let est = match estimate_order(&p, 0.1, 4, 1.0) {
            Ok(est) => est,
            Err(e) => return CheckOutcome::fail(format!("{name}: {e}")),
        };
        let order = est.summary.unwrap_or(f64::NAN);
        passed &= order >= 1.8;
        parts.push(format!("{name} order {order:.3}"));
        if name == "ex1" {
            let ratio = est.errors[0] / est.errors[2];
            passed &= (10.0..=25.0).contains(&ratio);
            parts.push(format!("ex1 e(0.1)/e(0.025) = {ratio:.2}"));
        }
    }
    CheckOutcome::new(passed, parts.join(", "))
}

fn check_stability() -> CheckOutcome {
    let origin = assess_stability(0.0, 0.0);
    let unit = |r: crate::analysis::Complex| (r.re - 1.0).abs() < 1e-12 && r.im == 0.0;
    if !(unit(origin.r1) && unit(origin.r2) && !origin.stable) {
        return CheckOutcome::fail(format!(
            "origin: {} {} stable={}",
            origin.r1, origin.r2, origin.stable
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let u: f64 = rng.random_range(-2.0..=0.0);
        let a = assess_stability(u, 0.0);
        let g = 1.0 + u + u * u / 2.0 + u * u * u / 8.0;
        if a.r1.im != 0.0 || a.r2.im != 0.0 {
            return CheckOutcome::fail(format!("u = {u}: complex roots {} {}", a.r1, a.r2));
        }
        let (lo, hi) = (a.r1.re.min(a.r2.re), a.r1.re.max(a.r2.re));
        let (elo, ehi) = (g.min(1.0), g.max(1.0));
        worst = worst.max((lo - elo).abs()).max((hi - ehi).abs());
    }
    CheckOutcome::new(
        worst <= 1e-12,
        format!("origin ok; max root deviation on v = 0: {worst:.2e}"),
    )
}

fn check_thresholds() -> CheckOutcome {
    let t = match bifurcation_thresholds(0.01) {
        Ok(t) => t,
        Err(e) => return CheckOutcome::fail(e.to_string()),
    };
    let mut passed =
        t.alpha0 < 1e-9 && (t.alpha1 - 2.0).abs() < 0.05 && (t.alpha2 + 2.0).abs() < 0.05;
    let mut parts = vec![format!(
        "h=0.01: alpha0={:.3e} alpha1={:.6} alpha2={:.6}",
        t.alpha0, t.alpha1, t.alpha2
    )];
    for h in [0.05, 0.1, 0.2] {
        let report =
            match bifurcation_thresholds(h).and_then(|t| classify_bifurcation(t.alpha0, h, 0.0)) {
                Ok(r) => r,
                Err(e) => return CheckOutcome::fail(e.to_string()),
            };
        let dev = (report.r1.norm() - 1.0)
            .abs()
            .max((report.r2.norm() - 1.0).abs());
        let ok = report.r1.im != 0.0 && dev <= 1e-10;
        passed &= ok;
        parts.push(format!("h={h}: ||r|-1| = {dev:.1e}"));
    }
    CheckOutcome::new(passed, parts.join(", "))
}

pub const CROSS_CHECK_SAMPLES: usize = 50;
pub const CROSS_CHECK_STEPS: usize = 2000;
pub const CROSS_CHECK_MARGIN: f64 = 0.05;

/// Draws `(alpha, h)` from `[-3, 3] × [0.05, 0.3]` at distance greater than
/// the margin from every threshold.
pub fn cross_check_samples(seed: u64, count: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let h: f64 = rng.random_range(0.05..=0.3);
        let alpha: f64 = rng.random_range(-3.0..=3.0);
        let t = bifurcation_thresholds(h).expect("h is inside the threshold domain");
        if [t.alpha0, t.alpha1, t.alpha2]
            .iter()
            .all(|a| (alpha - a).abs() > CROSS_CHECK_MARGIN)
        {
            out.push((alpha, h));
        }
    }
    out
}

/// Whether the simulated recurrence agrees with the classified region.
pub fn cross_check(alpha: f64, h: f64) -> Result<bool, String> {
    let report = classify_bifurcation(alpha, h, 0.0).map_err(|e| e.to_string())?;
    let seq =
        simulate_difference(alpha, h, 1.0, 1.0, CROSS_CHECK_STEPS).map_err(|e| e.to_string())?;
    let seen = observe_sequence(&seq);
    Ok(seen.oscillates == report.region.oscillates() && seen.decays == report.region.converges())
}

fn check_classifier_simulator() -> CheckOutcome {
    let samples = cross_check_samples(0x5eed_0008, CROSS_CHECK_SAMPLES);
    let mut mismatches = Vec::new();
    for &(alpha, h) in &samples {
        match cross_check(alpha, h) {
            Ok(true) => {}
            Ok(false) => mismatches.push(format!("(alpha={alpha:.4}, h={h:.4})")),
            Err(e) => return CheckOutcome::fail(e),
        }
    }
    let agree = samples.len() - mismatches.len();
    let mut detail = format!("{agree}/{} agree", samples.len());
    if !mismatches.is_empty() {
        detail.push_str(&format!("; mismatches {}", mismatches.join(" ")));
    }
    CheckOutcome::new(mismatches.is_empty(), detail)
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

fn check_one_step() -> CheckOutcome {
    let mut worst = 0.0f64;
    for ex in &EXAMPLES {
        let p = builtin(ex.name).expect("built-in");
        for h in [0.1, 0.05, 0.025] {
            let (m1, m2, y1) = ScriptedScheme::FAITHFUL.step(ex, &[ex.y0], 0, h);
            let (next, inter) = match djm_step(&p, &[p.y0()], 0, h, DEFAULT_DJM_DEPTH) {
                Ok(r) => r,
                Err(e) => return CheckOutcome::fail(format!("{}: {e}", ex.name)),
            };
            for (what, got, want) in [("M1", inter.m1, m1), ("M2", inter.m2, m2), ("y1", next, y1)]
            {
                if !rel_close(got, want, 1e-13) {
                    return CheckOutcome::fail(format!(
                        "{} h={h}: {what} = {got:e}, scripted {want:e}",
                        ex.name
                    ));
                }
                if want != 0.0 {
                    worst = worst.max((got - want).abs() / want.abs());
                }
            }
        }
    }
    CheckOutcome::new(
        true,
        format!("4 examples x 3 steps; worst relative deviation {worst:.1e}"),
    )
}

pub const FUZZ_CASES: usize = 1000;

fn check_parser_fuzz() -> CheckOutcome {
    let mut fuzzer = ExprFuzzer::new(0x5eed_0010, 5);
    let (mut evaluated, mut domain) = (0, 0);
    for case in 0..FUZZ_CASES {
        let text = fuzzer.expression();
        let fail = |why: String| CheckOutcome::fail(format!("case {case} '{text}': {why}"));
        let e1 = match parse(&text) {
            Ok(e) => e,
            Err(e) => return fail(format!("rejected: {e}")),
        };
        let printed = e1.to_string();
        match parse(&printed) {
            Ok(e2) if e2 == e1 => {}
            Ok(_) => return fail(format!("round trip changed structure via '{printed}'")),
            Err(e) => return fail(format!("printed form '{printed}' rejected: {e}")),
        }
        let (x, t, y) = fuzzer.point();
        let ours = e1.evaluate(&Environment::xty(x, t, y));
        let reference = match oracle::eval_text(&text, x, t, y) {
            Ok(r) => r,
            Err(e) => return fail(format!("text evaluator: {e}")),
        };
        match (ours, reference) {
            (Ok(a), Some(b)) if rel_close(a, b, 1e-14) || (a.is_nan() && b.is_nan()) => {
                evaluated += 1
            }
            (Err(_), None) => domain += 1,
            (a, b) => return fail(format!("evaluation {a:?} vs text evaluator {b:?}")),
        }

        let corrupted = fuzzer.corrupted();
        if catch_unwind(|| parse(&corrupted)).is_err() {
            return CheckOutcome::fail(format!("parser panicked on '{corrupted}'"));
        }
    }
    CheckOutcome::new(
        true,
        format!(
            "{FUZZ_CASES} cases: {evaluated} evaluated, {domain} agreed domain errors, {FUZZ_CASES} corrupted inputs survived"
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let names: std::collections::BTreeSet<_> = checks().iter().map(|c| c.name).collect();
        assert_eq!(names.len(), 10);
    }

    #[test]
    fn scripted_scheme_matches_library_trajectory() {
        let lib = LibrarySolver.trajectory("ex1", 0.1, 10).unwrap();
        let scripted = ScriptedScheme::FAITHFUL.trajectory("ex1", 0.1, 10).unwrap();
        for (a, b) in lib.iter().zip(&scripted) {
            assert!(rel_close(*a, *b, 1e-13), "{a} vs {b}");
        }
    }

    #[test]
    fn tampered_corner_weight_fails_pointwise_check() {
        assert!(check_ex1_coarse(&ScriptedScheme::FAITHFUL).passed);
        let tampered = ScriptedScheme { corner_weight: 0.5 };
        assert!(!check_ex1_coarse(&tampered).passed);
    }

    #[test]
    fn panicking_check_is_reported() {
        let check = Check {
            name: "boom",
            summary: "",
            time_limit: None,
            run: || panic!("kaboom"),
        };
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let report = check.run();
        std::panic::set_hook(prev);
        assert!(!report.passed);
        assert!(report.detail.contains("kaboom"));
    }
}
