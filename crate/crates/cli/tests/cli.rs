use std::path::Path;

use affkl_cli::spec::{CacheAction, Suite};
use affkl_cli::{Command, Format, JobSpec};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = affkl_cli::run(std::iter::once("affkl").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    out
}

fn with_cache(dir: &Path, args: &[&str]) -> String {
    let mut full = args.to_vec();
    full.extend(["--cache", dir.to_str().unwrap()]);
    ok(&full)
}

#[test]
fn a1_kl_table() {
    let out = ok(&["kl", "--type", "A1", "--affine", "--max-len", "2"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x\ty\tc");
    assert_eq!(lines.len(), 27);
    for row in ["ω0|0\tω0|\t-v^-1", "ω0|0,1\tω0|\tv^-2", "ω1|1,0\tω1|1\t-v^-1", "ω1|1,0\tω1|1,0\t1"] {
        assert!(lines.contains(&row), "missing {row}");
    }
}

#[test]
fn a1_distinguished_dimension() {
    let out = ok(&["dim", "--type", "A1", "--h", "2", "--x", "e", "--p", "5"]);
    assert_eq!(out, "x\tmu\tdimension\tvalue\tconfidence\nω0|\t-2\tp^1 * 1\t5\tcertain\n");
}

#[test]
fn labels_follow_the_dot_action() {
    let out = ok(&["label", "--type", "A1", "--p", "5", "--max-len", "1"]);
    assert_eq!(out, "x\tmu\nω0|\t-2\nω1|\t-5\nω0|0\t-10\nω0|1\t0\nω1|0\t-7\nω1|1\t3\n");
}

#[test]
fn json_output_is_versioned() {
    let out = ok(&["pkl", "--type", "A1", "--parabolic", "1", "--max-len", "3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["schema"], "affkl.pkl.v1");
    assert_eq!(doc["columns"], serde_json::json!(["x", "y", "c"]));
    let tsv = ok(&["pkl", "--type", "A1", "--parabolic", "1", "--max-len", "3"]);
    assert_eq!(doc["rows"].as_array().unwrap().len(), tsv.lines().count() - 1);
}

#[test]
fn spec_round_trips_through_json() {
    let out = ok(&[
        "char", "--type", "A2", "--underline", "1", "--h", "2,-1", "--nu", "0,0", "--p", "7", "--x", "e", "--floor", "-4",
        "--threads", "3", "--print-spec",
    ]);
    let spec = JobSpec::from_json(&out).unwrap();
    assert_eq!(spec.command, Command::Char);
    assert_eq!(spec.underline, Some(vec![1]));
    assert_eq!(spec.h, Some(vec![2, -1]));
    assert_eq!(spec.floor, -4);
    assert_eq!(JobSpec::from_json(&spec.to_json()).unwrap(), spec);

    let verify = JobSpec {
        command: Command::Verify { suite: Suite::Xbar },
        format: Format::Json,
        ..spec.clone()
    };
    assert_eq!(JobSpec::from_json(&verify.to_json()).unwrap(), verify);
    let cache = JobSpec { command: Command::Cache { action: CacheAction::Merge, sources: vec!["a".into()] }, ..spec };
    assert_eq!(JobSpec::from_json(&cache.to_json()).unwrap(), cache);
}

#[test]
fn thread_count_does_not_change_output() {
    for cmd in ["kl", "pkl"] {
        let one = ok(&[cmd, "--type", "A2", "--parabolic", "1", "--max-len", "4"]);
        let four = ok(&[cmd, "--type", "A2", "--parabolic", "1", "--max-len", "4", "--threads", "4"]);
        assert_eq!(one, four, "{cmd}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["kl", "--type", "Z9"]).0, 2);
    assert_eq!(run(&["dim", "--type", "A1", "--h", "2", "--p", "1"]).0, 2);
    assert_eq!(run(&["kl", "--bogus"]).0, 2);
    let (code, _, err) = run(&["kl", "--type", "A2", "--max-len", "30"]);
    assert_eq!(code, 3);
    assert!(err.contains("guard"), "{err}");
    assert_eq!(run(&["cache", "inspect"]).0, 2);
    let budget = ["char", "--type", "A2", "--h", "2,0", "--nu", "0,1", "--p", "7", "--x", "ω0|1,2", "--floor", "-40"];
    let (code, _, err) = run(&[&budget[..], &["--theta-budget", "1"]].concat());
    assert_eq!(code, 3);
    assert!(err.contains("stabiliz"), "{err}");
}

#[test]
fn verify_suites_pass() {
    for suite in ["quadratic", "bar", "xbar", "kl", "parabolic", "sign"] {
        let (code, out, err) = run(&["verify", suite, "--type", "A2", "--max-len", "3", "--theta-range", "1"]);
        assert_eq!(code, 0, "{suite}: {err}");
        assert!(out.lines().skip(1).all(|l| l.ends_with("\tpass")), "{suite}: {out}");
    }
}

#[test]
fn cache_reuse_merge_and_inspect() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cold = with_cache(a.path(), &["kl", "--type", "A2", "--max-len", "4"]);
    let warm = with_cache(a.path(), &["kl", "--type", "A2", "--max-len", "4"]);
    assert_eq!(cold, warm);
    with_cache(a.path(), &["pkl", "--type", "A1", "--parabolic", "1", "--max-len", "3"]);

    let inspect = with_cache(a.path(), &["cache", "inspect"]);
    assert!(inspect.contains("HECKE-KL v1 A2 convention=signed parabolic=-"), "{inspect}");
    assert!(inspect.contains("HECKE-KL v1 A1 convention=signed parabolic=1"), "{inspect}");

    let merged = with_cache(b.path(), &["cache", "merge", a.path().to_str().unwrap()]);
    assert_eq!(merged.lines().count(), 3);
    let after = with_cache(b.path(), &["kl", "--type", "A2", "--max-len", "4"]);
    assert_eq!(after, cold);
    let counts = |s: &str| s.lines().skip(1).map(|l| l.rsplit('\t').next().unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(counts(&with_cache(b.path(), &["cache", "inspect"])), counts(&inspect));
}
