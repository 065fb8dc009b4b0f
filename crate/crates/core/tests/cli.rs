use std::io::Write;
use std::process::{Command, Output};

fn vide(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vide"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn field(row: &[String], i: usize) -> f64 {
    row[i].parse().unwrap()
}

fn assert_one_line_error(o: &Output, code: i32, kind: &str) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error[{kind}]: ")), "{err}");
}

#[test]
fn solve_ex4_reaches_e() {
    let o = vide(&["solve", "--example", "ex4", "--h", "0.01", "--steps", "100"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("j,x,y,exact,abs_error\n"));
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 101);
    let last = rows.last().unwrap();
    assert!((field(last, 1) - 1.0).abs() < 1e-12);
    assert!((field(last, 2) - std::f64::consts::E).abs() < 1e-3);
}

#[test]
fn solve_ex1_final_error() {
    let o = vide(&["solve", "--example", "ex1", "--h", "0.1", "--steps", "10"]);
    let rows = csv_rows(&stdout(&o));
    let err = field(rows.last().unwrap(), 4);
    assert!((5e-3..=2e-2).contains(&err), "{err}");
    assert_eq!(field(&rows[0], 4), 0.0);
}

#[test]
fn solve_problem_file_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("decay.vide");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(
        f,
        "# pure decay\nname = decay\nf = -y\nK = 0\nx0 = 0\ny0 = 1"
    )
    .unwrap();
    let out = dir.path().join("out.csv");
    let o = vide(&[
        "solve",
        "--problem",
        path.to_str().unwrap(),
        "--h",
        "0.1",
        "--steps",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(out).unwrap();
    assert!(csv.starts_with("j,x,y\n"));
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn solve_errors() {
    assert_one_line_error(
        &vide(&["solve", "--example", "ex4", "--steps", "10"]),
        2,
        "usage",
    );
    assert_one_line_error(
        &vide(&["solve", "--example", "ex9", "--h", "0.1", "--steps", "10"]),
        2,
        "usage",
    );
    assert_one_line_error(
        &vide(&["solve", "--example", "ex4", "--h", "-0.1", "--steps", "10"]),
        2,
        "usage",
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.vide");
    std::fs::write(&bad, "name = bad\nf = 1 +\nK = 0\nx0 = 0\ny0 = 0\n").unwrap();
    let o = vide(&[
        "solve",
        "--problem",
        bad.to_str().unwrap(),
        "--h",
        "0.1",
        "--steps",
        "2",
    ]);
    assert_one_line_error(&o, 2, "input");
    assert!(stderr(&o).contains("line 2"));

    // the kernel leaves its domain once x exceeds 0.75
    let blowup = dir.path().join("sqrt.vide");
    std::fs::write(
        &blowup,
        "name = s\nf = 0\nK = sqrt(0.75 - x)\nx0 = 0\ny0 = 1\n",
    )
    .unwrap();
    let o = vide(&[
        "solve",
        "--problem",
        blowup.to_str().unwrap(),
        "--h",
        "0.1",
        "--steps",
        "10",
    ]);
    assert_one_line_error(&o, 3, "solver");
    assert!(stderr(&o).contains("step 7"), "{}", stderr(&o));
}

#[test]
fn table_layouts() {
    let o = vide(&["table", "--example", "ex1", "--h", "0.1"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 10);
    let first = field(&rows[0], 3);
    assert!((2.3e-5 / 2.0..=2.3e-5 * 2.0).contains(&first));

    let o = vide(&["table", "--example", "ex1", "--h", "0.025"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 10);
    let mid = field(&rows[4], 3);
    assert!((7.0e-5 / 2.0..=7.0e-5 * 2.0).contains(&mid));

    let o = vide(&["table", "--example", "ex2", "--h", "0.25"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0][0], "5");
    let max = field(&rows[0], 2);
    assert!((1.49e-3 / 2.0..=1.49e-3 * 2.0).contains(&max));

    assert_one_line_error(
        &vide(&["table", "--example", "ex1", "--h", "0.03"]),
        2,
        "usage",
    );
    assert_one_line_error(
        &vide(&["table", "--example", "ex2", "--h", "0.3"]),
        2,
        "usage",
    );
}

#[test]
fn stability_grid() {
    let o = vide(&[
        "stability",
        "--u-range",
        "-0.1:0.1",
        "--v-range",
        "-0.1:0.1",
        "--resolution",
        "1",
    ]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][6], "false");

    let o = vide(&[
        "stability",
        "--u-range",
        "-4:1",
        "--v-range",
        "-4:1",
        "--resolution",
        "100",
    ]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 10_000);
    assert!(rows.iter().any(|r| r[6] == "true"));
    assert!(rows.iter().any(|r| r[6] == "false"));
    // row-major: u varies fastest
    assert!(field(&rows[0], 0) < field(&rows[1], 0));
    assert_eq!(rows[0][1], rows[1][1]);

    assert_one_line_error(
        &vide(&[
            "stability",
            "--u-range",
            "1:0",
            "--v-range",
            "0:1",
            "--resolution",
            "3",
        ]),
        2,
        "usage",
    );
    assert_one_line_error(
        &vide(&[
            "stability",
            "--u-range",
            "0:1",
            "--v-range",
            "0:1",
            "--resolution",
            "0",
        ]),
        2,
        "usage",
    );
}

#[test]
fn bifurcation_output() {
    let o = vide(&[
        "bifurcation",
        "--h",
        "0.01",
        "--alpha-range",
        "-3:3",
        "--samples",
        "7",
    ]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let header: Vec<&str> = csv.lines().take_while(|l| l.starts_with('#')).collect();
    assert_eq!(header.len(), 4);
    let value = |key: &str| -> f64 {
        let line = header
            .iter()
            .find(|l| l.starts_with(&format!("# {key} = ")))
            .unwrap();
        line.rsplit(' ').next().unwrap().parse().unwrap()
    };
    assert!((value("alpha1") - 2.0).abs() < 0.05);
    assert!((value("alpha2") + 2.0).abs() < 0.05);
    assert!(csv.contains("\nalpha,region,|r1|,|r2|\n"));

    let o = vide(&[
        "bifurcation",
        "--h",
        "0.1",
        "--alpha-range",
        "-3:3",
        "--samples",
        "2",
    ]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0][1], "IV");
    assert_eq!(rows[1][1], "I");

    let o = vide(&[
        "bifurcation",
        "--h",
        "2.5",
        "--alpha-range",
        "-3:3",
        "--samples",
        "2",
    ]);
    assert_one_line_error(&o, 2, "input");
    assert!(stderr(&o).contains("0 < h < 2"));
}

#[test]
fn outputs_are_deterministic() {
    let args = [
        "stability",
        "--u-range",
        "-4:1",
        "--v-range",
        "-4:1",
        "--resolution",
        "60",
    ];
    assert_eq!(vide(&args).stdout, vide(&args).stdout);
    let args = ["table", "--example", "ex1", "--h", "0.025"];
    assert_eq!(vide(&args).stdout, vide(&args).stdout);
}

#[test]
fn verify_list_and_run() {
    let o = vide(&["verify", "--list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 10);

    // exit status follows the checks; the report covers every check either way
    let o = vide(&["verify"]);
    let out = stdout(&o);
    assert_eq!(
        out.lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .count(),
        10
    );
    let all_pass = !out.contains("FAIL ");
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
    if !all_pass {
        assert!(stderr(&o).starts_with("error[verify]: "));
    }
}

#[test]
fn help_exits_zero() {
    let o = vide(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("bifurcation"));
}
