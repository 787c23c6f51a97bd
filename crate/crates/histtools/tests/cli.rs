mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::testdata;
use histtools::io::read_histogram;
use histtools_core::Histogram;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_histtools")).args(args).output().expect("spawn histtools")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn json_out(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn build_merge_trim_stats() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.txt");
    fs::write(&input, "1\n2\n3\n").unwrap();
    let h = dir.path().join("h.hgt");
    let summary = json_out(&["build", "--input", p(&input), "--breaks", "lin:0:9:9", "--out", p(&h)]);
    assert_eq!(summary["bins"], 9);
    assert_eq!(summary["count"], 3);
    let built = read_histogram(&h).unwrap();
    assert_eq!(built.counts(), &[1, 1, 1, 0, 0, 0, 0, 0, 0]);

    let merged = dir.path().join("m.json");
    ok(&["merge", p(&h), p(&h), "--out", p(&merged), "--format", "json"]);
    assert_eq!(read_histogram(&merged).unwrap().counts(), &[2, 2, 2, 0, 0, 0, 0, 0, 0]);

    let trimmed = dir.path().join("t.hgt");
    ok(&["trim", p(&merged), "--out", p(&trimmed)]);
    assert_eq!(read_histogram(&trimmed).unwrap().breaks(), &[0.0, 1.0, 2.0, 3.0]);

    let stats = json_out(&["stats", p(&h), "--quantiles", "0.05,0.95"]);
    assert_eq!(stats["count"], 3);
    let expected = built.approx_quantile(&[0.05, 0.95]).unwrap();
    assert_eq!(stats["quantiles"][0]["value"].as_f64().unwrap(), expected[0]);
    assert_eq!(stats["quantiles"][1]["value"].as_f64().unwrap(), expected[1]);
    // 3 samples in unit bins: cumulative 1/3 per bin
    assert!((expected[0] - 0.15).abs() < 1e-12 && (expected[1] - 2.85).abs() < 1e-12);
}

#[test]
fn build_empty_and_log2() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("e.txt");
    fs::write(&input, "").unwrap();
    let out = dir.path().join("e.hgt");
    let s = json_out(&["build", "--input", p(&input), "--breaks", "log2:0:24", "--out", p(&out)]);
    assert_eq!(s["bins"], 24);
    assert_eq!(s["count"], 0);
    assert!(s["mean"].is_null());
}

#[test]
fn build_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.txt");
    fs::write(&input, "1\n20\n").unwrap();
    let out = dir.path().join("h.hgt");
    let o = run(&["build", "--input", p(&input), "--breaks", "lin:0:9:9", "--out", p(&out)]);
    assert!(!o.status.success());
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = run(&["build", "--input", p(&input), "--breaks", "lin:0:9", "--out", p(&out)]);
    assert!(!o.status.success());
    let o = run(&["build", "--input", "/nonexistent/x", "--breaks", "0,1", "--out", p(&out)]);
    assert!(!o.status.success());
}

#[test]
fn merge_incompatible_names_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    fs::write(&a, r#"{"breaks":[0,1,2],"counts":[1,1]}"#).unwrap();
    fs::write(&b, r#"{"breaks":[0,1,3],"counts":[1,1]}"#).unwrap();
    let o = run(&["merge", p(&a), p(&b), "--out", p(&dir.path().join("m"))]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("a.json") && err.contains("b.json"), "{err}");
}

#[test]
fn trim_all_zero_warns() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("z.json");
    fs::write(&a, r#"{"breaks":[0,1,2,3],"counts":[0,0,0]}"#).unwrap();
    let out = dir.path().join("t.json");
    let o = run(&["trim", p(&a), "--out", p(&out), "--format", "json"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let t = read_histogram(&out).unwrap();
    assert_eq!(t.breaks(), &[0.0, 3.0]);
    assert_eq!(t.counts(), &[0]);
}

#[test]
fn emdcc_equal_bins_and_range() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("h.json");
    let breaks: Vec<f64> = (0..=24).map(f64::from).collect();
    fs::write(&f, histtools::json::to_json(&Histogram::new(breaks, vec![5; 24]).unwrap())).unwrap();
    let r = json_out(&["emdcc", p(&f)]);
    assert!((r["total"].as_f64().unwrap() - 1.0 / 24.0).abs() < 1e-15);
    assert_eq!(r["per_bin"].as_array().unwrap().len(), 24);
    let r = json_out(&["emdcc", p(&f), "--range", "-24,24"]);
    assert!((r["total"].as_f64().unwrap() - 1.0 / 48.0).abs() < 1e-15);
    let o = run(&["emdcc", p(&f), "--range", "1,2"]);
    assert!(!o.status.success());
}

#[test]
fn gain_inf_and_value() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("edge.json");
    // every bin mean on the right edge
    fs::write(&f, r#"{"breaks":[0,1,2],"counts":[2,1],"moment_order":1,"moment_sums":[2.0,2.0]}"#).unwrap();
    assert_eq!(ok(&["gain", p(&f)]).trim(), "inf");
    let f = dir.path().join("mid.json");
    fs::write(&f, r#"{"breaks":[0,1,2],"counts":[2,2],"moment_order":1,"moment_sums":[1.0,3.0]}"#).unwrap();
    let g: f64 = ok(&["gain", p(&f)]).trim().parse().unwrap();
    assert!((g - 1.0 / (2.0 * std::f64::consts::LN_2)).abs() < 1e-12);
}

#[test]
fn bounds_csv_mean_only() {
    let out = ok(&["bounds", "--m1", "0.5", "--grid", "3"]);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(out.lines().next(), Some("x,lower,upper,regime"));
    let num = |s: &str| s.parse::<f64>().unwrap();
    assert_eq!(rows.iter().map(|r| num(r[0])).collect::<Vec<_>>(), vec![0.0, 0.5, 1.0]);
    assert_eq!(rows.iter().map(|r| num(r[1])).collect::<Vec<_>>(), vec![0.0, 0.0, 1.0]);
    assert_eq!(rows.iter().map(|r| num(r[2])).collect::<Vec<_>>(), vec![0.5, 1.0, 1.0]);
}

#[test]
fn bounds_csv_to_file_and_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    ok(&["bounds", "--m1", "0.3", "--var", "0.05", "--grid", "101", "--out", p(&out)]);
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 102);
    let o = run(&["bounds", "--m1", "0.3", "--var", "0.5"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("attainable"));
    ok(&["bounds", "--m1", "0.5", "--p", "3", "--grid", "5"]);
}

#[test]
fn dtrace_fixture_json_line() {
    let out = ok(&["dtrace", p(&testdata("dtrace/quantize.txt"))]);
    let got: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    let want: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(testdata("dtrace/quantize.expected.json")).unwrap()).unwrap();
    assert_eq!(got, want);
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn dtrace_malformed_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    fs::write(&f, "  value  --- Distribution --- count\n   0 |@ 1\n   1 |@ nope\n").unwrap();
    let o = run(&["dtrace", p(&f)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn mapreduce_demo_passes() {
    for method in ["1", "2"] {
        for shards in ["1", "7"] {
            let out = ok(&["mapreduce-demo", "--shards", shards, "--method", method, "--samples", "20000"]);
            assert!(out.starts_with("PASS"), "{out}");
        }
    }
    assert!(!run(&["mapreduce-demo", "--method", "3"]).status.success());
    assert!(!run(&["mapreduce-demo", "--shards", "0"]).status.success());
}

#[test]
fn gain_study_small_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let s1 = ok(&["gain-study", "--users", "12", "--seed", "3", "--out", p(&a)]);
    let s2 = ok(&["gain-study", "--users", "12", "--seed", "3", "--out", p(&b)]);
    assert_eq!(s1, s2);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read_to_string(&a).unwrap().lines().count(), 13);
}

#[test]
fn inspect_roundtrips_binary() {
    let f = testdata("wire/moments_named.hgt");
    let v = json_out(&["inspect", p(&f)]);
    assert_eq!(v["name"], "svc.read");
    assert_eq!(v["moment_sums"].as_array().unwrap().len(), 4);
}
