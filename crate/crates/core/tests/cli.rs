mod common;

use std::process::{Command, Output};

use common::{fixture_path, golden_path};

fn tablescore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tablescore")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: std::path::PathBuf) -> String {
    path.to_string_lossy().into_owned()
}

#[test]
fn score_prints_both_scores() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.html");
    let pred = dir.path().join("pred.html");
    std::fs::write(&gold, "<table><tr><th>A</th><th>B</th></tr><tr><td>1</td><td>2</td></tr></table>").unwrap();
    std::fs::write(&pred, "<table><tr><th>A</th><th>B</th></tr><tr><td>1</td><td>3</td></tr></table>").unwrap();
    let out =
        stdout(&tablescore(&["score", "--format", "html", "--gold", &p(gold.clone()), "--pred", &p(pred.clone())]));
    assert!(out.starts_with("content    0.500000"), "{out}");
    assert!(out.contains("structure  1.000000"), "{out}");

    let json = stdout(&tablescore(&["score", "--format", "html", "--gold", &p(gold), "--pred", &p(pred), "--json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["structure"], 1.0);
}

#[test]
fn eval_writes_report_and_items() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = tablescore(&[
        "eval",
        "--corpus",
        &p(fixture_path("corpus60.jsonl")),
        "--pred",
        &p(fixture_path("predictions_mixed.jsonl")),
        "--out",
        &p(out.clone()),
        "--report-format",
        "md",
        "--jobs",
        "4",
    ]);
    stdout(&o);
    let report = std::fs::read_to_string(out.join("report.md")).unwrap();
    assert_eq!(report, std::fs::read_to_string(golden_path("report_mixed.md")).unwrap());
    let items = std::fs::read_to_string(out.join("items.jsonl")).unwrap();
    assert_eq!(items.lines().count(), 60);
}

#[test]
fn eval_gptscore_needs_an_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    let o = tablescore(&[
        "eval",
        "--corpus",
        &p(fixture_path("corpus60.jsonl")),
        "--pred",
        &p(fixture_path("predictions_identity.jsonl")),
        "--out",
        &p(dir.path().to_path_buf()),
        "--gptscore",
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--endpoint"));
}

#[test]
fn errors_table_and_json_agree() {
    let args = [
        "errors",
        "--corpus",
        &p(fixture_path("corpus60.jsonl")),
        "--pred",
        &p(fixture_path("predictions_mixed.jsonl")),
    ];
    let table = stdout(&tablescore(&args));
    assert!(table.lines().any(|l| l.starts_with("structure_errors") && l.contains(" 36 ")), "{table}");
    let mut with_json = args.to_vec();
    with_json.push("--json");
    let v: serde_json::Value = serde_json::from_str(&stdout(&tablescore(&with_json))).unwrap();
    assert_eq!(v["totals"]["structure_errors"], 36);
    assert_eq!(v["totals"]["element_errors"], 15);
}

#[test]
fn prompts_match_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = dir.path().join("t1");
    let t2 = dir.path().join("t2");
    std::fs::write(&t1, "{input1}").unwrap();
    std::fs::write(&t2, "{input2}").unwrap();
    let out = stdout(&tablescore(&["prompt", "gptscore", "--t1", &p(t1), "--t2", &p(t2)]));
    assert_eq!(out, std::fs::read_to_string(golden_path("gptscore_prompt.txt")).unwrap());

    let payload = dir.path().join("payload");
    std::fs::write(&payload, "{payload}").unwrap();
    for fmt in ["raw_text", "latex", "html"] {
        let out = stdout(&tablescore(&["prompt", "describe", "--format", fmt, "--in", &p(payload.clone())]));
        assert_eq!(out, std::fs::read_to_string(golden_path(&format!("describe_{fmt}.txt"))).unwrap(), "{fmt}");
    }
}

#[test]
fn ability_map_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("map.svg");
    stdout(&tablescore(&[
        "ability-map",
        "--annotations",
        &p(fixture_path("annotations.jsonl")),
        "--out",
        &p(svg.clone()),
    ]));
    assert_eq!(std::fs::read_to_string(svg).unwrap(), std::fs::read_to_string(golden_path("ability_map.svg")).unwrap());

    let stats = stdout(&tablescore(&["stats", "--corpus", &p(fixture_path("corpus60.jsonl"))]));
    assert!(stats.lines().any(|l| l.starts_with("raw_text") && l.contains("7.25") && l.contains("8.75")), "{stats}");
}

#[test]
fn bad_input_fails_with_message() {
    let o = tablescore(&["stats", "--corpus", "/nonexistent/corpus.jsonl"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
    let o = tablescore(&["score", "--format", "pdf", "--gold", "a", "--pred", "b"]);
    assert!(!o.status.success());
}
