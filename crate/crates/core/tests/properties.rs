use proptest::prelude::*;

use vide_core::analysis::{
    assess_stability, bifurcation_coefficients, bifurcation_thresholds, quadratic_roots,
    stability_region,
};
use vide_core::expr::{parse, BinOp, Environment, Expression, Func, Node, Var};
use vide_core::problem::VideProblem;
use vide_core::solver::{djm_refine, solve, SolverConfig};

fn node() -> impl Strategy<Value = Node> {
    let leaf = prop_oneof![
        (0.0f64..1e6).prop_map(Node::Num),
        prop::sample::select(Var::ALL.to_vec()).prop_map(Node::Var),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        let op = prop::sample::select(vec![
            BinOp::Add,
            BinOp::Sub,
            BinOp::Mul,
            BinOp::Div,
            BinOp::Pow,
        ]);
        prop_oneof![
            inner.clone().prop_map(|n| Node::Neg(Box::new(n))),
            (prop::sample::select(Func::ALL.to_vec()), inner.clone())
                .prop_map(|(f, n)| Node::Call(f, Box::new(n))),
            (op, inner.clone(), inner).prop_map(|(op, a, b)| Node::Binary(
                op,
                Box::new(a),
                Box::new(b)
            )),
        ]
    })
}

fn problem(f: &str, k: &str, y0: f64) -> VideProblem {
    VideProblem::new("p", parse(f).unwrap(), parse(k).unwrap(), 0.0, y0, None).unwrap()
}

proptest! {
    #[test]
    fn print_parse_round_trip(root in node()) {
        let e = Expression::new(root);
        let printed = e.to_string();
        let back = parse(&printed).unwrap();
        prop_assert_eq!(&back, &e, "printed as {}", printed);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn parser_never_panics(text in "[-+*/^() .0-9a-z,eE]{0,40}") {
        let _ = parse(&text);
    }

    #[test]
    fn evaluation_is_deterministic(root in node(), x in -2.0f64..2.0, t in -2.0f64..2.0, y in -2.0f64..2.0) {
        let e = Expression::new(root);
        let env = Environment::xty(x, t, y);
        let a = e.evaluate(&env);
        let b = e.evaluate(&env);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!(a.to_bits() == b.to_bits()),
            (a, b) => prop_assert_eq!(format!("{a:?}"), format!("{b:?}")),
        }
    }

    #[test]
    fn zero_dynamics_stay_put(y0 in -10.0f64..10.0, h in 1e-3f64..1.0, steps in 1usize..40) {
        let traj = solve(&problem("0", "0", y0), &SolverConfig::new(h, steps).unwrap()).unwrap();
        prop_assert!(traj.values().iter().all(|&y| y == y0));
        prop_assert_eq!(traj.len(), steps + 1);
    }

    #[test]
    fn constant_rhs_is_integrated_exactly(c in -5.0f64..5.0, h in 1e-2f64..0.5, steps in 1usize..30) {
        let traj = solve(&problem(&format!("{c}"), "0", 1.0), &SolverConfig::new(h, steps).unwrap()).unwrap();
        for (x, y) in traj.iter() {
            prop_assert!((y - (1.0 + c * x)).abs() < 1e-12 * (1.0 + (c * x).abs()));
        }
    }

    #[test]
    fn constant_kernel_has_constant_start_defect(c in -5.0f64..5.0, h in 1e-2f64..0.5, steps in 1usize..30) {
        // y' = ∫ c dt, y = 1 + c x²/2; the doubled corner term at j = 0 adds
        // c h²/2 once and every later step is exact
        let traj = solve(&problem("0", &format!("{c}"), 1.0), &SolverConfig::new(h, steps).unwrap()).unwrap();
        for (x, y) in traj.iter().skip(1) {
            let exact = 1.0 + c * x * x / 2.0;
            let defect = c * h * h / 2.0;
            prop_assert!((y - exact - defect).abs() < 1e-12 * (1.0 + exact.abs()), "x {} y {} exact {}", x, y, exact);
        }
    }

    #[test]
    fn djm_on_linear_map_is_truncated_geometric_series(g in -10.0f64..10.0, c in -0.9f64..0.9, depth in 1usize..6) {
        let value = djm_refine::<_, ()>(g, depth, |z| Ok(c * z)).unwrap();
        let expected: f64 = (0..depth).map(|m| g * c.powi(m as i32)).sum();
        prop_assert!((value - expected).abs() < 1e-12 * (1.0 + expected.abs()));
    }

    #[test]
    fn quadratic_roots_satisfy_polynomial(p1 in -50.0f64..50.0, p0 in -50.0f64..50.0) {
        let (r1, r2) = quadratic_roots(p1, p0);
        for r in [r1, r2] {
            let residual = (r * r + r.scale(p1) + p0).norm();
            prop_assert!(residual < 1e-9 * (1.0 + r.norm_sqr() + p1.abs() * r.norm() + p0.abs()));
        }
        let sum = r1 + r2;
        prop_assert!((sum.re + p1).abs() < 1e-9 * (1.0 + p1.abs()));
        prop_assert!(sum.im.abs() < 1e-9 * (1.0 + r1.norm()));
    }

    #[test]
    fn stability_roots_match_coefficients(u in -4.0f64..1.0, v in -4.0f64..1.0) {
        let a = assess_stability(u, v);
        prop_assert_eq!(a.stable, a.max_modulus() < 1.0);
        let product = a.r1 * a.r2;
        prop_assert!((product.re + a.b2).abs() < 1e-9 * (1.0 + a.b2.abs()));
    }

    #[test]
    fn stability_grid_shape(res in 1usize..12) {
        let grid = stability_region(-1.0, 1.0, -1.0, 1.0, res).unwrap();
        prop_assert_eq!(grid.cells.len(), res * res);
        for row in 0..res {
            for col in 1..res {
                prop_assert!(grid.get(col - 1, row).u < grid.get(col, row).u);
                prop_assert_eq!(grid.get(col - 1, row).v, grid.get(col, row).v);
            }
        }
    }

    #[test]
    fn thresholds_are_ordered(h in 1e-3f64..1.999) {
        let t = bifurcation_thresholds(h).unwrap();
        prop_assert!(t.alpha2 < t.alpha0 && t.alpha0 < t.alpha1);
    }

    #[test]
    fn b2_equals_summed_coefficients(alpha in -5.0f64..5.0, h in 1e-3f64..1.999) {
        let c = bifurcation_coefficients(alpha, h);
        let e = (-alpha * h).exp();
        // a1 + a2 cancels terms of size h²E
        let tolerance = 1e-14 * e * (1.0 + h * h * e);
        prop_assert!(((c.a1 + c.a2) * e - c.b2).abs() <= tolerance);
        prop_assert_eq!(c.a1, 2.0 * c.a0);
    }
}
