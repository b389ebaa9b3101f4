mod common;

use std::collections::BTreeMap;
use std::process::Output;

use common::minscat;

fn run(args: &[&str]) -> Output {
    minscat().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Data rows of a CSV table, split into cells.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn cell(csv: &str, row: usize, col: usize) -> f64 {
    rows(csv)[row][col].parse().unwrap()
}

fn meta(csv: &str) -> BTreeMap<String, String> {
    csv.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[test]
fn dispersion_examples() {
    let out = run(&["dispersion", "--k", "1"]);
    assert!(out.status.success());
    assert_eq!(cell(&stdout(&out), 0, 1), 0.5);

    let out = run(&["dispersion", "--k", "1", "--beta-prime", "0.01"]);
    assert!((cell(&stdout(&out), 0, 1) - 0.505).abs() < 1e-15);

    let out = run(&["dispersion", "--energy", "0.505", "--beta-prime", "0.01"]);
    assert!((cell(&stdout(&out), 0, 0) - 1.0).abs() < 1e-15);

    let out = run(&["dispersion", "--k", "0.5,1,2"]);
    let table = rows(&stdout(&out));
    assert_eq!(table.len(), 3);
    assert_eq!(table[2][0], "2.0000000000000000e0");
}

#[test]
fn dcs_examples() {
    let out = run(&[
        "dcs",
        "--potential",
        "coulomb",
        "--k",
        "1",
        "--theta-min",
        "pi/2",
        "--n-angles",
        "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!((cell(&stdout(&out), 0, 1) - 1.0).abs() < 1e-14);

    let out = run(&[
        "dcs",
        "--potential",
        "coulomb",
        "--k",
        "1",
        "--theta-min",
        "pi/2",
        "--n-angles",
        "1",
        "--beta",
        "0.01",
        "--beta-prime",
        "0.01",
    ]);
    assert!((cell(&stdout(&out), 0, 1) - 0.89856).abs() < 1e-4);

    // q = 2k sin(θ/2) = 1 at θ = π/3
    let out = run(&[
        "dcs",
        "--potential",
        "yukawa",
        "--lambda",
        "1",
        "--k",
        "1",
        "--theta-min",
        "pi/3",
        "--n-angles",
        "1",
    ]);
    assert!((cell(&stdout(&out), 0, 1) - 1.0).abs() < 1e-14);
}

#[test]
fn dcs_rows_ascend_and_flag_breakdown() {
    let out = run(&[
        "dcs",
        "--potential",
        "coulomb",
        "--k",
        "1",
        "--beta",
        "0.05",
        "--beta-prime",
        "0.01",
        "--theta-min",
        "0.05",
        "--n-angles",
        "20",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let table = rows(&stdout(&out));
    let thetas: Vec<f64> = table.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(thetas.windows(2).all(|w| w[0] < w[1]));
    let flags: Vec<&str> = table.iter().map(|r| r[2].as_str()).collect();
    assert!(
        flags.contains(&"perturbative_validity_exceeded"),
        "{flags:?}"
    );
    assert!(flags.contains(&"ok"), "{flags:?}");
}

#[test]
fn phases_examples() {
    let out = run(&["phases", "--k", "1", "--lambda", "2", "--lmax", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = stdout(&out);
    assert!((cell(&csv, 0, 3) - 0.346574).abs() < 1e-6);
    assert_eq!(rows(&csv).len(), 4);

    let out = run(&[
        "phases",
        "--k",
        "1",
        "--lambda",
        "2",
        "--lmax",
        "0",
        "--beta-prime",
        "0.1",
    ]);
    assert!((cell(&stdout(&out), 0, 3) - 0.288811).abs() < 1e-6);

    let out = run(&["phases", "--k", "1", "--e2", "0", "--lmax", "4"]);
    for row in rows(&stdout(&out)) {
        for value in &row[1..4] {
            assert_eq!(value.parse::<f64>().unwrap(), 0.0);
        }
    }
}

#[test]
fn phases_flag_born_breakdown_per_row() {
    let out = run(&[
        "phases", "--k", "1", "--lambda", "0.1", "--e2", "5", "--lmax", "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let table = rows(&stdout(&out));
    assert_eq!(table.len(), 3);
    assert_eq!(table[0][4], "born_validity_exceeded");
    assert_eq!(table[0][1], "NaN");
    assert!(table[0][3].parse::<f64>().unwrap() > 1.0);
}

#[test]
fn phases_selects_lmax_from_tail_tolerance() {
    let out = run(&["phases", "--k", "1", "--lambda", "2", "--tail-tol", "1e-6"]);
    let table = rows(&stdout(&out));
    let last: f64 = table.last().unwrap()[3].parse().unwrap();
    let before: f64 = table[table.len() - 2][3].parse().unwrap();
    assert!(last.abs() < 1e-6 && before.abs() >= 1e-6);
}

#[test]
fn sigma_examples() {
    let out = run(&["sigma", "--k", "1", "--inject-phases", "pi/2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = stdout(&out);
    let four_pi = 4.0 * std::f64::consts::PI;
    assert!((cell(&csv, 0, 2) - four_pi).abs() < 1e-12 * four_pi);
    assert!((cell(&csv, 0, 3) - four_pi).abs() < 1e-12 * four_pi);
    assert!(cell(&csv, 0, 4) <= 1e-12);

    let out = run(&["sigma", "--k", "1", "--inject-phases", "0,0,0"]);
    assert_eq!(cell(&stdout(&out), 0, 2), 0.0);

    let out = run(&["sigma", "--k", "1", "--lambda", "5", "--e2", "0.1"]);
    let csv = stdout(&out);
    let (a, b) = (cell(&csv, 0, 2), cell(&csv, 0, 3));
    assert!((a - b).abs() <= 1e-8 * a);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["dispersion", "--k", "1"]), 0);
    assert_eq!(code(&["dispersion", "--k", "-1"]), 2);
    assert_eq!(code(&["dispersion"]), 2);
    assert_eq!(code(&["dcs", "--k", "1", "--theta-min", "0"]), 2);
    assert_eq!(code(&["phases", "--potential", "coulomb", "--k", "1"]), 2);
    assert_eq!(code(&["dcs", "--k", "1,2"]), 2);
    assert_eq!(code(&["dcs", "--k", "1", "--no-such-flag", "1"]), 2);
    // log argument of the deformed Coulomb term is negative
    assert_eq!(
        code(&[
            "dcs",
            "--potential",
            "coulomb",
            "--k",
            "1",
            "--beta-prime",
            "0.1"
        ]),
        3
    );
    assert_eq!(
        code(&[
            "dcs",
            "--potential",
            "coulomb",
            "--coulomb-mode",
            "limit",
            "--k",
            "1",
            "--lambdas",
            "0.1,0.2,0.05"
        ]),
        3
    );
}

#[test]
fn error_messages_name_the_key() {
    let out = run(&["dispersion", "--k", "1", "--beta", "-0.5"]);
    assert!(stderr(&out).contains("beta"), "{}", stderr(&out));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "k = 1\nlambada = 2\n").unwrap();
    let out = run(&["dispersion", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("lambada"));

    let out = run(&[
        "dcs",
        "--potential",
        "coulomb",
        "--k",
        "1",
        "--beta-prime",
        "0.1",
    ]);
    assert!(stderr(&out).contains("log argument"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# file values\nk = 2\nbeta_prime = 0.01\n").unwrap();
    let config = path.to_str().unwrap();

    let csv = stdout(&run(&["dispersion", "--config", config]));
    assert_eq!(cell(&csv, 0, 0), 2.0);

    let csv = stdout(&run(&["dispersion", "--config", config, "--k", "1"]));
    assert_eq!(cell(&csv, 0, 0), 1.0);
    assert!((cell(&csv, 0, 1) - 0.505).abs() < 1e-15);

    // an energy flag replaces k from the file
    let csv = stdout(&run(&[
        "dispersion",
        "--config",
        config,
        "--energy",
        "0.505",
    ]));
    assert!((cell(&csv, 0, 0) - 1.0).abs() < 1e-15);
}

#[test]
fn echoed_metadata_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec![
            "phases",
            "--k",
            "1.3",
            "--lambda",
            "1.7",
            "--beta-prime",
            "0.02",
            "--beta",
            "0.05",
            "--lmax",
            "4",
        ],
        vec![
            "dcs",
            "--potential",
            "coulomb",
            "--k",
            "2",
            "--beta",
            "0.02",
            "--beta-prime",
            "0.01",
            "--theta-min",
            "pi/7",
        ],
        vec![
            "sigma",
            "--energy",
            "0.7,1.9",
            "--lambda",
            "3",
            "--e2",
            "0.4",
            "--sign",
            "repulsive",
        ],
    ] {
        let first = stdout(&run(&args));
        let echoed: String = meta(&first)
            .into_iter()
            .filter(|(k, _)| k != "k_resolved")
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        let path = dir.path().join("echo.conf");
        std::fs::write(&path, echoed).unwrap();
        let second = stdout(&run(&[args[0], "--config", path.to_str().unwrap()]));
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn json_output_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let out = run(&[
        "sigma",
        "--k",
        "1,2",
        "--lambda",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value["meta"]["command"], "sigma");
    assert_eq!(value["meta"]["format"], "json");
    let rows = value["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["k"], 2.0);
    assert!(rows[0]["sigma_phase_sum"].as_f64().unwrap() > 0.0);
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["phases", "--k", "0.8", "--lambda", "1.5", "--e2", "0.3"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}
