//! C ABI over `tablescore`.
//!
//! Every fallible function returns a [`TsStatus`]; on failure the message is
//! available from [`ts_last_error_message`] on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and must
//! be released with [`ts_string_free`]. Report handles are released with
//! [`ts_score_report_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use tablescore::corpus::{emit_report, evaluate, load_corpus, load_predictions, EvalOptions, ReportFormat};
use tablescore::gpt::{build_description_prompt, build_gptscore_prompt, parse_gptscore_response};
use tablescore::hscore::{score_pair, ScoreReport};
use tablescore::model::TableFormat;
use tablescore::similarity::{levenshtein_distance, string_similarity};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    MalformedResponse = 4,
    CorpusError = 5,
    NotFound = 6,
    Panic = 7,
}

/// Opaque score report.
pub struct TsScoreReport(ScoreReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TsStatus, String);

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', "\\0")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TsStatus::Panic
        }
    }
}

unsafe fn arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TsStatus::NullArgument, format!("{name} is NULL")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(TsStatus::InvalidUtf8, format!("{name}: {e}")))
}

fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: non-null out-pointers are required to be valid for writes
    unsafe { p.as_mut() }.ok_or_else(|| Failure(TsStatus::NullArgument, format!("{name} is NULL")))
}

fn format_arg(s: &str) -> Result<TableFormat, Failure> {
    s.parse().map_err(|e: tablescore::model::UnknownFormat| Failure(TsStatus::InvalidArgument, e.to_string()))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "")).expect("NULs removed").into_raw()
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ts_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Scores `pred` against `gold`. `format` is one of `raw_text`, `latex`, `html`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_score_pair(
    pred: *const c_char,
    gold: *const c_char,
    format: *const c_char,
    out_report: *mut *mut TsScoreReport,
) -> TsStatus {
    guard(|| {
        let slot = out(out_report, "out_report")?;
        let fmt = format_arg(arg(format, "format")?)?;
        let report = score_pair(arg(pred, "pred")?, arg(gold, "gold")?, fmt);
        *slot = Box::into_raw(Box::new(TsScoreReport(report)));
        Ok(())
    })
}

/// Content score in [0, 1]; NaN for a NULL handle.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_score_report_content(report: *const TsScoreReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.content.value())
}

/// Structure score in [0, 1]; NaN for a NULL handle.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_score_report_structure(report: *const TsScoreReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.structure.value())
}

/// Looks up a named structure component such as `row_count`.
///
/// # Safety
/// `report` must be a live handle; `name` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_score_report_component(
    report: *const TsScoreReport,
    name: *const c_char,
    out_value: *mut f64,
) -> TsStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| Failure(TsStatus::NullArgument, "report is NULL".into()))?;
        let slot = out(out_value, "out_value")?;
        let name = arg(name, "name")?;
        let v =
            r.0.components.get(name).ok_or_else(|| Failure(TsStatus::NotFound, format!("no component {name:?}")))?;
        *slot = v.value();
        Ok(())
    })
}

/// The full report as JSON, including diagnostics.
///
/// # Safety
/// `report` must be a live handle; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_score_report_to_json(report: *const TsScoreReport, out_json: *mut *mut c_char) -> TsStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| Failure(TsStatus::NullArgument, "report is NULL".into()))?;
        let slot = out(out_json, "out_json")?;
        let json = serde_json::to_string(&r.0).map_err(|e| Failure(TsStatus::InvalidArgument, e.to_string()))?;
        *slot = c_string(json);
        Ok(())
    })
}

/// Releases a report handle. NULL is ignored.
///
/// # Safety
/// `report` must come from [`ts_score_pair`] and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ts_score_report_free(report: *mut TsScoreReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Mean of normalized Levenshtein and Ratcliff/Obershelp similarity.
///
/// # Safety
/// String arguments must be NUL-terminated; `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_string_similarity(a: *const c_char, b: *const c_char, out_value: *mut f64) -> TsStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        *slot = string_similarity(arg(a, "a")?, arg(b, "b")?).value();
        Ok(())
    })
}

/// Edit distance in Unicode scalar values.
///
/// # Safety
/// String arguments must be NUL-terminated; `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_levenshtein_distance(
    a: *const c_char,
    b: *const c_char,
    out_value: *mut usize,
) -> TsStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        *slot = levenshtein_distance(arg(a, "a")?, arg(b, "b")?);
        Ok(())
    })
}

/// # Safety
/// String arguments must be NUL-terminated; `out_prompt` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_build_gptscore_prompt(
    table1: *const c_char,
    table2: *const c_char,
    out_prompt: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        let slot = out(out_prompt, "out_prompt")?;
        *slot = c_string(build_gptscore_prompt(arg(table1, "table1")?, arg(table2, "table2")?));
        Ok(())
    })
}

/// # Safety
/// String arguments must be NUL-terminated; `out_prompt` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_build_description_prompt(
    format: *const c_char,
    payload: *const c_char,
    out_prompt: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        let slot = out(out_prompt, "out_prompt")?;
        let fmt = format_arg(arg(format, "format")?)?;
        *slot = c_string(build_description_prompt(fmt, arg(payload, "payload")?));
        Ok(())
    })
}

/// Extracts the two similarity values from a model reply.
///
/// # Safety
/// `response` must be NUL-terminated; both out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn ts_parse_gptscore_response(
    response: *const c_char,
    out_content: *mut f64,
    out_structure: *mut f64,
) -> TsStatus {
    guard(|| {
        let content = out(out_content, "out_content")?;
        let structure = out(out_structure, "out_structure")?;
        let parsed = parse_gptscore_response(arg(response, "response")?)
            .map_err(|e| Failure(TsStatus::MalformedResponse, e.to_string()))?;
        *content = parsed.pair.content_similarity;
        *structure = parsed.pair.structural_similarity;
        Ok(())
    })
}

/// Evaluates a prediction file against a corpus file and returns the
/// aggregate report in `report_format` (`json`, `csv` or `md`). Model-based
/// scoring is not available through this entry point.
///
/// # Safety
/// String arguments must be NUL-terminated; `out_report` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_evaluate_files(
    corpus_path: *const c_char,
    predictions_path: *const c_char,
    report_format: *const c_char,
    jobs: usize,
    out_report: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        let slot = out(out_report, "out_report")?;
        let fmt: ReportFormat =
            arg(report_format, "report_format")?.parse().map_err(|e: String| Failure(TsStatus::InvalidArgument, e))?;
        let corpus_err = |e: tablescore::corpus::CorpusError| Failure(TsStatus::CorpusError, e.to_string());
        let corpus = load_corpus(Path::new(arg(corpus_path, "corpus_path")?)).map_err(corpus_err)?;
        let preds = load_predictions(Path::new(arg(predictions_path, "predictions_path")?)).map_err(corpus_err)?;
        let eval = evaluate(&corpus.records, &preds.records, &EvalOptions { parallelism: jobs, gptscore: None })
            .map_err(corpus_err)?;
        *slot = c_string(emit_report(&eval.report, fmt));
        Ok(())
    })
}
