use std::process::{Command, Output};

use serde_json::Value;

fn qclone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qclone"))
        .args(args)
        .env_remove("NO_COLOR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn clone_example() {
    let out = qclone(&[
        "clone",
        "--n",
        "1",
        "--m",
        "2",
        "--samples",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let row = &doc["results"][0];
    assert!((row["eta_measured"].as_f64().unwrap() - 0.666666667).abs() < 1e-9);
    assert_eq!(row["eta_predicted"], "2/3");
    assert!(row["spread"].as_f64().unwrap() < 1e-9);
    for key in ["config", "results", "checks", "timing"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    for c in doc["checks"].as_array().unwrap() {
        for key in [
            "name",
            "paper_anchor",
            "expected",
            "actual",
            "tolerance",
            "pass",
        ] {
            assert!(c.get(key).is_some(), "check lacks {key}");
        }
    }
}

#[test]
fn bounds_table_row() {
    let out = qclone(&["bounds", "--n", "1", "--m", "2", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text
        .lines()
        .find(|l| l.starts_with("1  2  2"))
        .expect("bounds row");
    let cells: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(&cells[3..5], ["2/3", "5/6"]);
    // not a terminal: no escape codes
    assert!(!text.contains('\x1b'));
}

#[test]
fn bounds_grid_without_parameters() {
    let out = qclone(&["bounds", "--max-exact", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let rows = doc["results"].as_array().unwrap();
    assert_eq!(rows.iter().filter(|r| r["kind"] == "bounds").count(), 100);
    assert_eq!(rows.iter().filter(|r| r["kind"] == "exact-grid").count(), 3);
}

#[test]
fn csv_columns_and_precision() {
    let out = qclone(&[
        "clone",
        "--n",
        "1",
        "--m",
        "3",
        "--samples",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,m,l,quantity,expected,actual,abs_error,pass")
    );
    let eta = lines.next().unwrap();
    assert!(eta.starts_with("1,3,,eta,5.55555555556e-1,"), "{eta}");
    assert!(eta.ends_with(",true"));
}

#[test]
fn estimate_with_composition() {
    let out = qclone(&[
        "estimate", "--m", "2", "--l", "4", "--shots", "20000", "--seed", "3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json(&out);
    let exact = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["kind"] == "estimate-exact")
        .unwrap();
    assert_eq!(exact["fidelity_predicted"], "3/4");
    let compositions = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["kind"] == "composition")
        .count();
    assert_eq!(compositions, 3);
}

#[test]
fn concat_reports_exact_and_simulated() {
    let out = qclone(&["concat", "--n", "1", "--m", "3", "--l", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["results"][0]["eta_direct_predicted"], "7/18");
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "multiplicativity-exact",
            "chain-product",
            "chain-direct",
            "chain-eta"
        ]
    );
}

#[test]
fn same_seed_same_bytes() {
    let args = [
        "clone",
        "--n",
        "2",
        "--m",
        "4",
        "--samples",
        "8",
        "--seed",
        "5",
    ];
    assert_eq!(qclone(&args).stdout, qclone(&args).stdout);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["clone", "--n", "3", "--m", "2"],
        vec!["clone", "--n", "1", "--m", "2", "--samples", "0"],
        vec!["concat", "--n", "1", "--m", "4", "--l", "3"],
        vec!["estimate", "--m", "15"],
        vec!["estimate", "--m", "2", "--l", "11"],
        vec!["bounds", "--n", "1"],
        vec!["clone", "--n", "1", "--m", "2", "--format", "xml"],
        vec!["frobnicate"],
    ] {
        assert_eq!(qclone(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_check_exits_1() {
    // exact equality is too strict for a simulated value
    let out = qclone(&[
        "clone",
        "--n",
        "1",
        "--m",
        "2",
        "--samples",
        "4",
        "--tol-physics",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("FAIL"), "{err}");
    let doc = json(&out);
    assert!(doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["pass"] == false));
}

#[test]
fn unwritable_output_exits_3() {
    let out = qclone(&[
        "bounds",
        "--n",
        "1",
        "--m",
        "2",
        "--output",
        "/nonexistent-dir/report.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("qclone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let args = ["bounds", "--n", "2", "--m", "3", "--l", "6"];
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert_eq!(qclone(&with_file).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), qclone(&args).stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn timing_is_opt_in() {
    let doc = json(&qclone(&["bounds", "--n", "1", "--m", "2"]));
    assert_eq!(doc["timing"]["recorded"], false);
    let doc = json(&qclone(&["bounds", "--n", "1", "--m", "2", "--timing"]));
    assert_eq!(doc["timing"]["recorded"], true);
    assert!(doc["timing"]["sections"]["bounds"].is_number());
}

#[test]
fn help_for_every_subcommand() {
    for sub in ["bounds", "clone", "estimate", "concat", "verify-all"] {
        let out = qclone(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
        assert!(String::from_utf8(out.stdout).unwrap().contains("--seed"));
    }
}
