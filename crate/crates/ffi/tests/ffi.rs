use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use tablescore_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = ts_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    ts_string_free(p);
    s
}

const GOLD: &str = "| | Points |\n| Suns | 90 |\n| Jazz | 88 |\n";

#[test]
fn score_pair_handle_round_trip() {
    let pred = c("| | Points |\n| Suns | 90 |\n");
    let gold = c(GOLD);
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(ts_score_pair(pred.as_ptr(), gold.as_ptr(), c("raw_text").as_ptr(), &mut report), TsStatus::Ok);
        assert!(!report.is_null());
        let content = ts_score_report_content(report);
        assert!(content > 0.0 && content < 1.0);
        let mut rows = 0.0;
        assert_eq!(ts_score_report_component(report, c("row_count").as_ptr(), &mut rows), TsStatus::Ok);
        assert_eq!(rows, 0.5);
        let mut json = ptr::null_mut();
        assert_eq!(ts_score_report_to_json(report, &mut json), TsStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["content"].as_f64(), Some(content));
        ts_score_report_free(report);
        assert!(ts_score_report_structure(ptr::null()).is_nan());
        ts_score_report_free(ptr::null_mut());
    }
}

#[test]
fn errors_set_status_and_message() {
    let gold = c(GOLD);
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(
            ts_score_pair(gold.as_ptr(), gold.as_ptr(), c("docx").as_ptr(), &mut report),
            TsStatus::InvalidArgument
        );
        assert!(last_error().contains("docx"));
        assert_eq!(ts_score_pair(ptr::null(), gold.as_ptr(), c("html").as_ptr(), &mut report), TsStatus::NullArgument);
        assert!(last_error().contains("pred"));
        assert_eq!(
            ts_score_pair(gold.as_ptr(), gold.as_ptr(), c("html").as_ptr(), ptr::null_mut()),
            TsStatus::NullArgument
        );
        let bad = [0xffu8, 0xfe, 0];
        let mut v = 0.0;
        assert_eq!(ts_string_similarity(bad.as_ptr().cast(), gold.as_ptr(), &mut v), TsStatus::InvalidUtf8);
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(
            ts_parse_gptscore_response(c("no scores here").as_ptr(), &mut a, &mut b),
            TsStatus::MalformedResponse
        );
    }
}

#[test]
fn similarity_and_prompts() {
    unsafe {
        let mut d = 0usize;
        assert_eq!(ts_levenshtein_distance(c("kitten").as_ptr(), c("sitting").as_ptr(), &mut d), TsStatus::Ok);
        assert_eq!(d, 3);
        let mut s = 0.0;
        assert_eq!(ts_string_similarity(c("abc").as_ptr(), c("abc").as_ptr(), &mut s), TsStatus::Ok);
        assert_eq!(s, 1.0);

        let mut p = ptr::null_mut();
        assert_eq!(ts_build_gptscore_prompt(c("T1").as_ptr(), c("T2").as_ptr(), &mut p), TsStatus::Ok);
        assert_eq!(take(p), tablescore::gpt::build_gptscore_prompt("T1", "T2"));
        assert_eq!(ts_build_description_prompt(c("latex").as_ptr(), c("X").as_ptr(), &mut p), TsStatus::Ok);
        assert_eq!(take(p), tablescore::gpt::build_description_prompt(tablescore::model::TableFormat::Latex, "X"));

        let (mut a, mut b) = (0.0, 0.0);
        let reply = c("Sure.\n{\"content_similarity\": 7.5, \"structural_similarity\": 9}");
        assert_eq!(ts_parse_gptscore_response(reply.as_ptr(), &mut a, &mut b), TsStatus::Ok);
        assert_eq!((a, b), (7.5, 9.0));
    }
}

#[test]
fn evaluate_files_returns_report() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.jsonl");
    let preds = dir.path().join("preds.jsonl");
    let item = serde_json::json!({"id": "a", "instruction": "", "input": "", "output": GOLD, "format": "raw_text"});
    std::fs::write(&corpus, format!("{item}\n")).unwrap();
    std::fs::write(&preds, format!("{}\n", serde_json::json!({"id": "a", "prediction": GOLD}))).unwrap();
    let path = |p: &Path| c(p.to_str().unwrap());
    let mut out = ptr::null_mut();
    unsafe {
        let status = ts_evaluate_files(path(&corpus).as_ptr(), path(&preds).as_ptr(), c("csv").as_ptr(), 2, &mut out);
        assert_eq!(status, TsStatus::Ok);
        let csv = take(out);
        assert!(csv.lines().any(|l| l == "content_hscore,1"), "{csv}");

        let missing = c("/nonexistent.jsonl");
        let status = ts_evaluate_files(missing.as_ptr(), path(&preds).as_ptr(), c("json").as_ptr(), 1, &mut out);
        assert_eq!(status, TsStatus::CorpusError);
        assert!(last_error().contains("nonexistent"));
        let status = ts_evaluate_files(path(&corpus).as_ptr(), path(&preds).as_ptr(), c("xml").as_ptr(), 1, &mut out);
        assert_eq!(status, TsStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/tablescore.h")).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct TsScoreReport TsScoreReport;"));
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libtablescore_ffi.a");
    let compiler = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&compiler).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&compiler)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}
