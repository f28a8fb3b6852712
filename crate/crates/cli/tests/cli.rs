use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use horodyn_cli::emit::{to_csv, Cell};

fn horodyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horodyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn malformed_group_spec_exits_with_validation_code() {
    for spec in ["free:", "free:x", "product(free:2", "bogus:2"] {
        let o = horodyn(&["growth", "--group", spec, "--radius", "3"]);
        assert_eq!(o.status.code(), Some(4), "{spec}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error["));
    }
    let o = horodyn(&["growth", "--radius", "3"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn unknown_subgroup_and_potential_are_rejected() {
    let o = horodyn(&[
        "walk",
        "--group",
        "free:2",
        "--subgroup",
        "ker-mod:x",
        "--nmax",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let sft = data("golden.json");
    let o = horodyn(&[
        "rho",
        "--sft",
        sft.to_str().unwrap(),
        "--potential",
        "exp:2",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let o = horodyn(&["rho", "--sft", "/nonexistent/sft.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn empty_table_is_header_only() {
    let text = to_csv(&["n", "p(n)", "root", "certified"], &[]).unwrap();
    assert_eq!(text, "n,p(n),root,certified\n");
    let text = to_csv(&["n", "x"], &[vec![Cell::Int(0), Cell::Float(-0.0)]]).unwrap();
    assert_eq!(text, "n,x\n0,0\n");
}

#[test]
fn growth_csv_matches_the_tree() {
    let o = horodyn(&[
        "growth", "--group", "free:2", "--radius", "4", "--out", "csv",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "r,sphere,ball\n0,1,1\n1,4,5\n2,12,17\n3,36,53\n4,108,161\n"
    );
}

#[test]
fn rho_csv_header_and_golden_mean() {
    let sft = data("golden.json");
    let o = horodyn(&["rho", "--sft", sft.to_str().unwrap(), "--iters", "30"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,sup_norm,nth_root"));
    let last: Vec<f64> = lines
        .last()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    // Fibonacci sup norms: F_{n+2}^{1/n} → φ slowly
    assert!((last[2] - phi).abs() < 0.05, "{last:?}");
}

#[test]
fn walk_csv_header_and_certification() {
    let o = horodyn(&["walk", "--group", "free:2", "--nmax", "4"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "n,p(n),root,certified\n0,1,1,true\n1,0,0,true\n2,0.25,0.5,true\n3,0,0,true\n4,0.109375,0.575081658448,true\n"
    );
}

#[test]
fn scc_reports_classes() {
    let sft = data("two_class.json");
    let o = horodyn(&["sft", "scc", "--sft", sft.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
    assert_eq!(v["classes"][1]["recurrent"], false);
}

#[test]
fn inconclusive_gap_report_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gap.json");
    std::fs::write(&cfg, r#"{"radii":[4,5],"n_max":30}"#).unwrap();
    let o = horodyn(&[
        "gap-report",
        "--group",
        "free:2",
        "--subgroup",
        "trivial",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "INCONCLUSIVE");
}

#[test]
fn experiment_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("a13.json");
    std::fs::write(&cfg, r#"{"id":"A13","params":{"cases":20,"seed":7}}"#).unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = horodyn(&[
            "--threads",
            threads,
            "experiment",
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    let a = run("a.json", "1");
    let b = run("b.json", "4");
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["outcome"], "PASS");
    assert_eq!(v["config"]["params"]["seed"], 7);
}

#[test]
fn experiment_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"id":"A99"}"#).unwrap();
    let o = horodyn(&["experiment", "run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    std::fs::write(&cfg, r#"{"id":"A1","unknown":1}"#).unwrap();
    let o = horodyn(&["experiment", "run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn list_names_every_experiment() {
    let o = horodyn(&["experiment", "list"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 15);
    assert!(text.starts_with("A1 "));
}
