//! One test per acceptance criterion, each printing a PASS/FAIL line.

use vide_core::verify::checks;

fn criterion(name: &str) {
    let all = checks();
    let check = all
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no check named {name}"));
    let report = check.run();
    println!("{report}");
    assert!(report.passed, "{report}");
}

macro_rules! criteria {
    ($($test:ident => $name:literal),* $(,)?) => {
        $(
            #[test]
            fn $test() {
                criterion($name);
            }
        )*

        #[test]
        fn every_check_is_covered() {
            let covered = [$($name),*];
            let names: Vec<&str> = checks().iter().map(|c| c.name).collect();
            assert_eq!(names, covered);
        }
    };
}

criteria! {
    c01_ex1_pointwise_coarse => "ex1-pointwise-h0.1",
    c02_ex1_pointwise_fine => "ex1-pointwise-h0.025",
    c03_ex2_max_error => "ex2-max-error",
    c04_ex3_max_error => "ex3-max-error",
    c05_convergence_order => "convergence-order",
    c06_stability_sanity => "stability-sanity",
    c07_bifurcation_thresholds => "bifurcation-thresholds",
    c08_classifier_simulator => "classifier-simulator",
    c09_one_step_oracle => "one-step-oracle",
    c10_parser_fuzz => "parser-fuzz",
}
