use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn epsgraph(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epsgraph"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn sample_writes_audited_csv_that_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = epsgraph(&["sample", "-d", "2", "-n", "1000", "--seed", "7", "-o", "pts.csv"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
    let text = fs::read_to_string(dir.path().join("pts.csv")).unwrap();
    assert!(text.starts_with("# epsgraph "));
    assert!(text.lines().any(|l| l.starts_with("# command ") && l.contains("\"seed\":7")));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1001); // header line plus one row per point

    let loaded = epsgraph::sphere_geom::SampleSet::read_csv(text.as_bytes()).unwrap();
    assert_eq!(loaded, epsgraph::sphere_geom::sample_uniform(2, 1000, 7).unwrap());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(epsgraph(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(epsgraph(&["sample", "-d", "2", "--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(epsgraph(&["homology", "-i", "x", "--coeff", "reals"], dir.path()).status.code(), Some(2));
    assert_eq!(epsgraph(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn task_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = epsgraph(&["graph", "-d", "1", "-n", "10", "--alpha", "0.1", "--eps", "0.2", "-o", "g.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = epsgraph(&["graph", "-i", "missing.csv", "--alpha", "1", "--eps", "0.1", "-o", "g.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn graph_complex_and_homology_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(epsgraph(&["sample", "-d", "2", "-n", "200", "--seed", "1", "-o", "pts.csv"], p).status.success());
    let o = epsgraph(&["graph", "-i", "pts.csv", "--alpha", "2.0", "--eps", "0.1", "-o", "g.txt"], p);
    assert!(stdout(&o).starts_with("graph: 200 vertices"));
    let o = epsgraph(&["delaunay", "-i", "pts.csv", "-o", "del.txt"], p);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = epsgraph(&["homology", "-i", "del.txt", "--up-to", "2", "--coeff", "integer", "-o", "h.json"], p);
    assert!(stdout(&o).contains("[1, 0, 1]"), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(p.join("h.json")).unwrap()).unwrap();
    assert_eq!(report["report"]["betti"], serde_json::json!([1, 0, 1]));
    assert!(report["audit"][0].as_str().unwrap().starts_with("epsgraph "));

    let o = epsgraph(&["nbhd", "-i", "pts.csv", "--alpha", "2.5", "--eps", "0.45", "--reduce", "reduce", "-o", "n.txt"], p);
    assert!(o.status.success());
    assert!(fs::read_to_string(p.join("n.txt")).unwrap().starts_with("# epsgraph"));
}

#[test]
fn color_and_chi() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let o = epsgraph(&["color", "-d", "2", "-n", "600", "--alpha", "3.0", "--eps", "0.05", "--scheme", "tetra4", "-o", "c.csv"], p);
    assert!(stdout(&o).contains("proper"), "{}", stdout(&o));
    let o = epsgraph(&["chi", "-d", "1", "-n", "500", "--seed", "2", "--alpha", "2.0", "--eps", "0.1", "--budget-secs", "30"], p);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("chi: chi = 3"), "{}", stdout(&o));
}

#[test]
fn experiment_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let cfg = r#"{"d":1,"alpha":2.0,"eps_rule":{"scaled":20.0},"n":600,"trials":4,"seed":3,
                  "tasks":["net_check","graph_stats","chi_exact","colorings","homology","delaunay_check"]}"#;
    fs::write(p.join("cfg.json"), cfg).unwrap();
    for out in ["a", "b"] {
        let o = epsgraph(&["experiment", "-c", "cfg.json", "-o", out], p);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with("experiment: 4 trials, 0 failed"));
    }
    let a = fs::read_to_string(p.join("a/trials.csv")).unwrap();
    let b = fs::read_to_string(p.join("b/trials.csv")).unwrap();
    // Only the output path in the command audit line differs.
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with("# command")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(a.lines().filter(|l| !l.starts_with('#')).count(), 5);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p.join("a/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["summary"]["trials"], 4);
    assert!(p.join("a/timings.csv").exists());
}

#[test]
fn experiment_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("cfg.json"), r#"{"d":1,"alpha":0.1,"eps_rule":{"explicit":0.2},"n":50,"trials":1,"seed":0,"tasks":["net_check"]}"#).unwrap();
    let o = epsgraph(&["experiment", "-c", "cfg.json", "-o", "out"], p);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn table_matches_expected_structure() {
    let dir = tempfile::tempdir().unwrap();
    let o = epsgraph(
        &["table", "--alpha-grid", "1.0,1.5,1.91,2.0,2.15,3.0", "-n", "2000", "--trials", "5", "-o", "t.csv"],
        dir.path(),
    );
    assert!(o.status.success());
    let s = stdout(&o);
    for pair in ["4/n/a(15)", "4/6", "5/6", "4/5", "4/4"] {
        assert!(s.contains(pair), "{s}");
    }
    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(text.contains("# alpha 1.91 snapped to l2"));
}

#[test]
fn calibrate_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = epsgraph(&["calibrate", "-d", "1", "--n-grid", "300,600", "--target", "0.9", "-o", "cal.json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("cal.json")).unwrap()).unwrap();
    assert!(v["calibration"]["c"].as_f64().unwrap() > 1.0);
    let o = epsgraph(&["calibrate", "-d", "1", "--n-grid", "300", "--target", "1.0"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(root).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        epsgraph::experiments::ExperimentConfig::from_json(&text).unwrap();
        seen += 1;
    }
    assert!(seen >= 3);
}

#[test]
fn schema_lists_every_config_field() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/experiment_config.schema.json");
    let schema: serde_json::Value = serde_json::from_str(&fs::read_to_string(root).unwrap()).unwrap();
    let cfg = epsgraph::experiments::ExperimentConfig {
        d: 1,
        alpha: 1.0,
        eps_rule: epsgraph::experiments::EpsRule::Explicit(0.1),
        n: 10,
        trials: 1,
        seed: 0,
        tasks: epsgraph::experiments::Task::ALL.into_iter().collect(),
        budgets: Default::default(),
    };
    let v = serde_json::to_value(&cfg).unwrap();
    let props = schema["properties"].as_object().unwrap();
    for key in v.as_object().unwrap().keys() {
        assert!(props.contains_key(key), "schema lacks {key}");
    }
    let budget_props = props["budgets"]["properties"].as_object().unwrap();
    for key in v["budgets"].as_object().unwrap().keys() {
        assert!(budget_props.contains_key(key), "schema lacks budgets.{key}");
    }
    let tasks: Vec<&str> = props["tasks"]["items"]["enum"].as_array().unwrap().iter().map(|t| t.as_str().unwrap()).collect();
    for t in epsgraph::experiments::Task::ALL {
        assert!(tasks.contains(&t.name()));
    }
}
