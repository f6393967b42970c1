//! End-to-end runs of the `sumsets` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn sumsets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumsets"))
        .args(args)
        .env_remove("SUMSETS_BUDGET")
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("JSON report")
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn fpw_densities_are_exact() {
    let o = sumsets(&[
        "density",
        "--construct",
        "fpw(3)",
        "--N",
        "1..10",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 10);
    for (i, row) in rows.iter().enumerate() {
        let p = 3u64.pow(i as u32 + 1);
        let (num, den) = ((p - 1) / 2, p);
        assert_eq!(
            (
                row[3].parse::<u64>().unwrap(),
                row[4].parse::<u64>().unwrap()
            ),
            (num, den)
        );
    }
}

#[test]
fn appendix_example_passes() {
    let o = sumsets(&[
        "verify",
        "appendix",
        "--group",
        "Z^1 x T2^1",
        "--recipe",
        "tri_lger(1,1)",
        "--N",
        "1..3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    let rows = doc["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r["passed"], true);
        assert_eq!(r["half_over_even"], "2");
    }
}

#[test]
fn intro_table_matches_claims() {
    let o = sumsets(&["table", "intro", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    let claims: Vec<&str> = rows.iter().map(|r| r[5].as_str()).collect();
    assert_eq!(claims, ["1", "1/2", "1", "1"]);
    assert!(rows.iter().all(|r| r[7] == "true"));
}

#[test]
fn reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["group", "info", "--group", "Z^2 x T2^1"],
        &["folner", "defects", "--recipe", "box(1)", "--N", "1..4"],
        &["alpha", "--recipe", "dyadic(1)", "--N", "1..5"],
        &["density", "--construct", "torus(1)", "--N", "9,11,13"],
        &["construct", "product", "1", "1"],
        &["search", "--construct", "fpw(3)", "--N", "2", "--k", "3"],
        &["verify", "appendix", "--recipe", "box(1)", "--N", "10,20"],
        &["plot-data", "sec45", "--format", "json"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let mut full = args.to_vec();
        full.extend(["-o", path.to_str().unwrap()]);
        let o = sumsets(&full);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let v = sumsets(&["validate", path.to_str().unwrap()]);
        assert_eq!(
            v.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&v.stderr)
        );
    }
}

#[test]
fn tampered_report_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let o = sumsets(&[
        "density",
        "--construct",
        "fpw(3)",
        "--N",
        "1..3",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = std::fs::read_to_string(&path)
        .unwrap()
        .replace("\"13/27\"", "\"1/2\"");
    std::fs::write(&path, text).unwrap();
    assert_eq!(
        sumsets(&["validate", path.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn outputs_are_deterministic() {
    let args = [
        "search",
        "--construct",
        "torus(1)",
        "--N",
        "3",
        "--k",
        "3",
        "--certify",
    ];
    let strip = |o: &Output| -> String {
        stdout(o)
            .lines()
            .filter(|l| !l.contains("\"generated_at\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&sumsets(&args)), strip(&sumsets(&args)));
}

#[test]
fn exit_codes() {
    assert_eq!(
        sumsets(&["group", "info", "--group", "Q^1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sumsets(&["density", "--construct", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sumsets(&["density", "--construct", "fpw(3)", "--N", "40"])
            .status
            .code(),
        Some(3)
    );
    let budget = [
        "search",
        "--construct",
        "odd_coset",
        "--group",
        "Z^1",
        "--N",
        "40",
        "--k",
        "6",
        "--budget",
        "1000",
    ];
    assert_eq!(sumsets(&budget).status.code(), Some(4));
    assert_eq!(
        sumsets(&["density", "--construct", "zd(1)", "--N", "1..6"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        sumsets(&[
            "search",
            "--construct",
            "fpw(3)",
            "--N",
            "2",
            "--format",
            "csv"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_sumsets"))
        .args([
            "search",
            "--construct",
            "odd_coset",
            "--group",
            "Z^1",
            "--N",
            "40",
            "--k",
            "6",
        ])
        .env("SUMSETS_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn search_expectations() {
    let found = [
        "search",
        "--construct",
        "fpw(3)",
        "--N",
        "3",
        "--k",
        "2",
        "--expect",
        "found",
    ];
    assert_eq!(sumsets(&found).status.code(), Some(0));
    let absent = [
        "search",
        "--construct",
        "fpw(3)",
        "--N",
        "3",
        "--k",
        "2",
        "--certify",
        "--expect",
        "absent",
    ];
    let o = sumsets(&absent);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["report"]["result"]["completed"], true);
}

#[test]
fn config_file_wins_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        "construction = \"fpw(3)\"\nN = \"1..4\"\nformat = \"csv\"\n",
    )
    .unwrap();
    let o = sumsets(&["density", "--N", "1..2", "--config", path.to_str().unwrap()]);
    assert_eq!(csv_rows(&o).len(), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("config file overrides --N"));
    std::fs::write(&path, "colour = \"red\"\n").unwrap();
    assert_eq!(
        sumsets(&["density", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn stripe_plot_data() {
    let o = sumsets(&["plot-data", "sec45", "--N", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert!(!rows.is_empty());
    for r in rows {
        let m: u64 = r[1].parse().unwrap();
        assert_eq!(r[4], m.is_multiple_of(2).to_string());
    }
}

#[test]
fn group_invariants() {
    let doc = json(&sumsets(&["group", "info", "--group", "Z^2 x T2^1"]));
    assert_eq!(doc["report"]["ell"], 4);
    assert_eq!(doc["report"]["r"], 2);
    assert_eq!(doc["report"]["alpha_G"], "1/2");
    assert_eq!(doc["report"]["coset_reps"].as_array().unwrap().len(), 4);
    let fp = json(&sumsets(&["group", "info", "--group", "F3^w"]));
    assert_eq!(fp["report"]["ell"], 1);
    assert_eq!(fp["report"]["r"], 1);
}
