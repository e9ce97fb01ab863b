use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn mjoin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mjoin")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn compute(dataset: &str, out: &Path, extra: &[&str]) -> Output {
    let dir = data(dataset);
    let schema = dir.join("schema.json");
    let mut args = vec![
        "compute",
        "--schema",
        schema.to_str().unwrap(),
        "--data",
        dir.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    mjoin(&args)
}

/// Data rows of a written table (header excluded).
fn data_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().skip(1).map(str::to_string).collect()
}

#[test]
fn verify_f1_matches() {
    let dir = data("f1");
    let o = mjoin(&[
        "verify",
        "--schema",
        dir.join("schema.json").to_str().unwrap(),
        "--data",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all 3 tables match"));
}

#[test]
fn verify_respects_cap() {
    let dir = data("f1");
    let o = mjoin(&[
        "verify",
        "--schema",
        dir.join("schema.json").to_str().unwrap(),
        "--data",
        dir.to_str().unwrap(),
        "--cap",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn link_analysis_on_off_row_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let on = tmp.path().join("on");
    let off = tmp.path().join("off");
    assert!(compute("f1", &on, &["--link-analysis", "on"]).status.success());
    assert!(compute("f1", &off, &["--link-analysis", "off"]).status.success());

    let on_rows = data_rows(&on.join("chain_RA.csv"));
    let off_rows = data_rows(&off.join("chain_RA.csv"));
    assert_eq!(on_rows.len(), 2);
    assert_eq!(off_rows.len(), 1);
    assert_eq!(
        fs::read_to_string(on.join("chain_RA.csv")).unwrap(),
        "\"RA(P,S)\",popularity(P),teachingability(P),intelligence(S),ranking(S),\"capability(P,S)\",\"salary(P,S)\",count\n\
         F,hi,hi,lo,2,n/a,n/a,1\n\
         T,hi,hi,hi,1,hi,high,1\n"
    );
    assert_eq!(off_rows, vec!["T,hi,hi,hi,1,hi,high,1".to_string()]);

    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(on.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["statistics"], 2);
    assert_eq!(report["complexity"]["r"], 1);
    assert_eq!(report["phases"]["negative_tuple_accesses"], 0);
    let report_off: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(off.join("report.json")).unwrap()).unwrap();
    assert_eq!(report_off["statistics"], 1);
}

#[test]
fn compute_is_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(compute("f1", &a, &[]).status.success());
    assert!(compute("f1", &b, &["--jobs", "4"]).status.success());
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 4);
    for n in names {
        assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn zero_relationships_emit_entity_tables_only() {
    let tmp = tempfile::tempdir().unwrap();
    let o = compute("no_rels", tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<String> = fs::read_dir(tmp.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, vec!["entity_C.csv", "entity_L.csv", "report.json"]);
    assert_eq!(
        fs::read_to_string(tmp.path().join("entity_C.csv")).unwrap(),
        "continent(C),count\nas,1\neu,2\n"
    );
    assert_eq!(fs::read_to_string(tmp.path().join("entity_L.csv")).unwrap(), "count\n2\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mjoin(&[]).status.code(), Some(2));
    assert_eq!(mjoin(&["compute", "--schema", "x"]).status.code(), Some(2));
    assert_eq!(mjoin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_input_is_a_runtime_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = mjoin(&[
        "compute",
        "--schema",
        tmp.path().join("nope.json").to_str().unwrap(),
        "--data",
        tmp.path().to_str().unwrap(),
        "--out",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn applications_on_f1_table() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(compute("f1", tmp.path(), &[]).status.success());
    let table = tmp.path().join("chain_RA.csv");
    let table = table.to_str().unwrap();

    let o = mjoin(&["rank", "--ct", table, "--target", "intelligence(S)"]);
    assert!(o.status.success());
    let first = stdout(&o).lines().next().unwrap().to_string();
    // every varying column is perfectly aligned with the target here; ties go by name
    assert_eq!(first, "RA(P,S)\t1.000000");

    let structure = tmp.path().join("structure.json");
    fs::write(&structure, r#"{"capability(P,S)": ["RA(P,S)"], "RA(P,S)": []}"#).unwrap();
    let o = mjoin(&["score", "--ct", table, "--structure", structure.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("capability(P,S)\t0.000000"), "{out}");
    assert!(out.contains("RA(P,S)\t-0.693147"), "{out}");

    let rules_csv = tmp.path().join("rules.csv");
    let o = mjoin(&["rules", "--ct", table, "--top-k", "5", "--out", rules_csv.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&rules_csv).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",1.000000,2.000000")));
}

#[test]
fn bench_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("gen.json");
    fs::write(
        &cfg,
        r#"{"base": {"seed": 3,
                     "populations": [{"name": "A", "size": 8, "attributes": [{"name": "x", "domain_size": 8}]},
                                     {"name": "B", "size": 8, "attributes": [{"name": "y", "domain_size": 8}]}],
                     "relationships": [{"name": "R", "density": 0.1,
                                        "arguments": [{"variable": "X", "population": "A"},
                                                      {"variable": "Y", "population": "B"}]}]},
            "factors": [1, 2, 4], "scale_domains": true, "repeats": 1}"#,
    )
    .unwrap();
    let out = tmp.path().join("bench.json");
    let o = mjoin(&["bench", "--generator", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    let points = report["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    let stats: Vec<u64> = points.iter().map(|p| p["extra_statistics"].as_u64().unwrap()).collect();
    assert!(stats.windows(2).all(|w| w[0] < w[1]), "{stats:?}");
}
