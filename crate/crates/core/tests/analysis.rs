//! The recurrences behind the stability and bifurcation analyses, checked
//! against actual solver trajectories on the two linear test equations.

use vide_core::analysis::{bifurcation_coefficients, stability_coefficients};
use vide_core::expr::parse;
use vide_core::problem::VideProblem;
use vide_core::solver::{solve, SolverConfig};

fn trajectory(f: &str, k: &str, h: f64, steps: usize) -> Vec<f64> {
    let p = VideProblem::new("test", parse(f).unwrap(), parse(k).unwrap(), 0.0, 1.0, None).unwrap();
    solve(&p, &SolverConfig::new(h, steps).unwrap())
        .unwrap()
        .values()
        .to_vec()
}

#[test]
fn exponential_kernel_follows_bifurcation_recurrence() {
    for (alpha, h) in [
        (3.0, 0.1),
        (1.0, 0.1),
        (0.0, 0.2),
        (-1.0, 0.1),
        (-3.0, 0.05),
        (0.7, 0.5),
    ] {
        let ys = trajectory("0", &format!("-exp(-({alpha})*(x - t))*y"), h, 60);
        let c = bifurcation_coefficients(alpha, h);
        for j in 1..ys.len() - 2 {
            let residual = ys[j + 2] - c.b1 * ys[j + 1] + c.b2 * ys[j];
            let scale = ys[j..j + 3].iter().fold(1.0f64, |m, y| m.max(y.abs()));
            assert!(
                residual.abs() < 1e-13 * scale,
                "alpha {alpha} h {h} j {j}: {residual:e}"
            );
        }
    }
}

#[test]
fn one_step_relation_coefficients() {
    // y_{j+1} = -a0 E^j y0 - a1 Σ_{i=1}^{j-1} E^{j-i} y_i + a2 y_j, j >= 1
    let (alpha, h) = (0.8, 0.2);
    let ys = trajectory("0", &format!("-exp(-({alpha})*(x - t))*y"), h, 12);
    let c = bifurcation_coefficients(alpha, h);
    let e = (-alpha * h).exp();
    for j in 1..ys.len() - 1 {
        let lag: f64 = (1..j).map(|i| e.powi((j - i) as i32) * ys[i]).sum();
        let predicted = -c.a0 * e.powi(j as i32) * ys[0] - c.a1 * lag + c.a2 * ys[j];
        assert!((predicted - ys[j + 1]).abs() < 1e-13, "j {j}");
    }
}

#[test]
fn linear_test_equation_follows_stability_recurrence() {
    for (a, b, h) in [
        (-1.0, -2.0, 0.1),
        (0.5, -1.0, 0.2),
        (-3.0, 0.0, 0.1),
        (-2.0, -8.0, 0.25),
    ] {
        let ys = trajectory(&format!("({a})*y"), &format!("({b})*y"), h, 60);
        let (b1, b2) = stability_coefficients(h * a, h * h * b);
        for j in 3..ys.len() {
            let residual = ys[j] - b1 * ys[j - 1] - b2 * ys[j - 2];
            let scale = ys[j - 2..=j].iter().fold(1.0f64, |m, y| m.max(y.abs()));
            assert!(
                residual.abs() < 1e-13 * scale,
                "a {a} b {b} h {h} j {j}: {residual:e}"
            );
        }
    }
}
