//! End-to-end tests driving the compiled binary: output formats, the cache
//! contract, exit codes, and the jobs merge invariant.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_topocount"))
}

fn run_in(cache: &Path, args: &[&str]) -> Output {
    let mut cmd = bin();
    cmd.args(args).arg("--cache").arg(cache);
    cmd.output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn temp_cache() -> (TempDir, PathBuf) {
    let dir = TempDir::new().expect("temp dir");
    let path = dir.path().join("topocount-cache.json");
    (dir, path)
}

#[test]
fn count_prints_the_plain_number() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["count", "--kind", "T", "--n", "3"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "29\n");

    let out = run_in(&cache, &["count", "--kind", "T0", "--n", "1"]);
    assert_eq!(stdout_of(&out), "1\n");
}

#[test]
fn count_json_is_parseable_and_labeled() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["count", "--kind", "T0", "--n", "2", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["kind"], "T0");
    assert_eq!(doc["n"], 2);
    assert_eq!(doc["value"], 3);
    assert_eq!(doc["method"], "backtrack");

    // warm cache: auto reruns serve the entry and say so
    let out = run_in(&cache, &["count", "--kind", "T0", "--n", "2", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["value"], 3);
    assert_eq!(doc["method"], "cache");
}

#[test]
fn count_partition_method_reaches_seven() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["count", "--kind", "T", "--n", "7", "--method", "partition"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "9535241\n");
    // T(7) ≡ 2 (mod 7)
    assert_eq!(9_535_241u64 % 7, 2);

    // the cache now holds the T0 values the formula pulled in
    let raw = std::fs::read_to_string(&cache).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["T"]["7"]["value"], 9_535_241u64);
    assert_eq!(doc["T"]["7"]["method"], "partition-formula");
    assert_eq!(doc["T0"]["7"]["value"], 6_129_859u64);
    let at = doc["T"]["7"]["at"].as_str().unwrap();
    assert!(at.contains('T') && at.ends_with('Z'), "ISO-8601 UTC timestamp, got {at}");
}

#[test]
fn count_out_of_range_exits_2() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["count", "--kind", "T", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("reach"));

    let out = run_in(&cache, &["count", "--kind", "T", "--n", "5", "--method", "naive"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run_in(&cache, &["count", "--kind", "T0", "--n", "3", "--method", "partition"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tampered_cache_value_fails_on_recomputation() {
    let (_dir, cache) = temp_cache();
    std::fs::write(
        &cache,
        r#"{"schema_version":1,"T":{"3":{"value":30,"method":"backtrack","at":"2026-01-01T00:00:00Z"}},"T0":{},"k":{}}"#,
    )
    .unwrap();
    // auto trusts the warm entry; forcing an engine recomputes and trips
    let out = run_in(&cache, &["count", "--kind", "T", "--n", "3", "--method", "naive"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("mismatch"));
}

#[test]
fn unreadable_cache_exits_3() {
    let (_dir, cache) = temp_cache();
    std::fs::write(&cache, "not json").unwrap();
    let out = run_in(&cache, &["count", "--kind", "T", "--n", "2"]);
    assert_eq!(out.status.code(), Some(3));

    std::fs::write(&cache, r#"{"schema_version":2,"T":{},"T0":{},"k":{}}"#).unwrap();
    let out = run_in(&cache, &["count", "--kind", "T", "--n", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("schema_version"));
}

#[test]
fn fixed_examples() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["fixed", "--p", "2", "--n", "2"]);
    assert_eq!(stdout_of(&out), "51\n");

    let out = run_in(&cache, &["fixed", "--p", "2", "--n", "1", "--t0"]);
    assert_eq!(stdout_of(&out), "3\n");

    let out = run_in(&cache, &["fixed", "--p", "3", "--n", "1"]);
    assert_eq!(stdout_of(&out), "7\n");

    let out = run_in(&cache, &["fixed", "--p", "4", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("prime"));

    let out = run_in(&cache, &["fixed", "--p", "7", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kn_both_cross_checks_and_caches() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["kn", "--n", "1", "--method", "both"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("k(1) = 7"), "got: {text}");
    assert!(text.contains("bounds: (4, 8)"));
    assert!(text.contains("method: both"));

    let raw = std::fs::read_to_string(&cache).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(doc["k"]["1"]["value"], 7);
}

#[test]
fn kn_direct_reaches_n4() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["kn", "--n", "4", "--method", "direct"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("k(4) = 12623"), "got: {text}");
    assert!(text.contains("method: direct"));
}

#[test]
fn kn_crt_json_reproduces_the_residue_class() {
    let (_dir, cache) = temp_cache();
    let out = run_in(
        &cache,
        &["kn", "--n", "2", "--method", "crt", "--primes", "2,3,5", "--format", "json"],
    );
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["k"], 51);
    assert_eq!(doc["ambiguous"], false);
    assert_eq!(doc["solution"]["value"], 21);
    assert_eq!(doc["solution"]["modulus"], 30);
    assert_eq!(doc["bounds"][0], 29);
    assert_eq!(doc["bounds"][1], 58);
    assert_eq!(doc["residues"].as_array().unwrap().len(), 3);
}

#[test]
fn kn_ambiguous_lists_candidates_and_exits_0() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["kn", "--n", "5", "--method", "crt"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("AMBIGUOUS"), "got: {text}");
    assert!(text.contains("candidates:"));

    let out = run_in(&cache, &["kn", "--n", "5", "--method", "crt", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["ambiguous"], true);
    assert!(doc["k"].is_null());
    assert!(doc["candidates"].as_array().unwrap().len() >= 2);
}

#[test]
fn kn_method_disagreement_exits_4() {
    let (_dir, cache) = temp_cache();
    // poison T(4): the crt residues shift and exclude the direct value
    std::fs::write(
        &cache,
        r#"{"schema_version":1,"T":{"4":{"value":354,"method":"backtrack","at":"2026-01-01T00:00:00Z"}},"T0":{},"k":{}}"#,
    )
    .unwrap();
    let out = run_in(&cache, &["kn", "--n", "1", "--method", "both"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_single_theorem_table() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["verify", "--theorem", "tpk"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    for instance in ["p=2 k=1", "p=3 k=1", "p=2 k=2", "p=5 k=1", "p=7 k=1"] {
        assert!(text.contains(instance), "missing {instance} in:\n{text}");
    }
    assert!(text.contains("5 pass, 0 fail, 0 skip"));

    // ground truth was written through to the cache
    let raw = std::fs::read_to_string(&cache).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(doc["T"]["6"]["value"], 209_527u64);
    assert_eq!(doc["T0"]["6"]["value"], 130_023u64);
}

#[test]
fn verify_all_passes_on_a_correct_build() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["verify", "--all", "--jobs", "2"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("48 pass, 0 fail, 0 skip"), "got summary line:\n{text}");
    for theorem in ["tpk", "t0_shift", "t0_pk", "t0_fix_equality", "bounds", "k_match"] {
        assert!(text.contains(theorem), "missing {theorem} rows");
    }
}

#[test]
fn verify_json_summary() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["verify", "--theorem", "bounds", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["summary"]["pass"], 4);
    assert_eq!(doc["summary"]["fail"], 0);
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 4);
    assert_eq!(results[0]["theorem"], "bounds");
    assert_eq!(results[0]["status"], "pass");
}

#[test]
fn verify_requires_a_selection() {
    let (_dir, cache) = temp_cache();
    let out = run_in(&cache, &["verify"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run_in(&cache, &["verify", "--theorem", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_detects_a_tampered_count() {
    let (_dir, cache) = temp_cache();
    std::fs::write(
        &cache,
        r#"{"schema_version":1,"T":{},"T0":{"5":{"value":4232,"method":"backtrack","at":"2026-01-01T00:00:00Z"}},"k":{}}"#,
    )
    .unwrap();
    let out = run_in(&cache, &["verify", "--theorem", "t0_pk"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("mismatch"));
}

#[test]
fn jobs_do_not_change_any_count() {
    let (_dir, cache1) = temp_cache();
    let (_dir2, cache2) = temp_cache();
    let a = run_in(&cache1, &["count", "--kind", "T0", "--n", "6", "--jobs", "1"]);
    let b = run_in(&cache2, &["count", "--kind", "T0", "--n", "6", "--jobs", "8"]);
    assert_eq!(stdout_of(&a), stdout_of(&b));
    assert_eq!(stdout_of(&a), "130023\n");

    let a = run_in(&cache1, &["fixed", "--p", "2", "--n", "3", "--jobs", "1"]);
    let b = run_in(&cache2, &["fixed", "--p", "2", "--n", "3", "--jobs", "8"]);
    assert_eq!(stdout_of(&a), stdout_of(&b));
    assert_eq!(stdout_of(&a), "634\n");
}

#[test]
fn cache_show_and_clear() {
    let (_dir, cache) = temp_cache();
    run_in(&cache, &["count", "--kind", "T", "--n", "2"]);

    let out = run_in(&cache, &["cache", "show", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["T"]["2"]["value"], 4);

    let out = run_in(&cache, &["cache", "show"]);
    assert!(stdout_of(&out).contains("T(2) = 4"));

    let out = run_in(&cache, &["cache", "clear"]);
    assert!(out.status.success());
    assert!(!cache.exists());

    let out = run_in(&cache, &["cache", "clear"]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("no cache file"));

    // empty show still works
    let out = run_in(&cache, &["cache", "show", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["schema_version"], 1);
}

#[test]
fn repeated_runs_leave_the_cache_byte_identical() {
    let (_dir, cache) = temp_cache();
    run_in(&cache, &["count", "--kind", "T", "--n", "4"]);
    let first = std::fs::read_to_string(&cache).unwrap();
    run_in(&cache, &["count", "--kind", "T", "--n", "4"]);
    let second = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(first, second);

    // an explicit engine recomputation of the same value keeps the original
    // entry (timestamp and provenance included)
    run_in(&cache, &["count", "--kind", "T", "--n", "4", "--method", "naive"]);
    let third = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(first, third);
}
