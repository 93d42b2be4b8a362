//! C ABI over the `licentia` library.
//!
//! Every fallible call returns a [`LicentiaStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`licentia_last_error_message`] on the same thread. Strings returned
//! through out-pointers are owned by the caller and released with
//! [`licentia_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use licentia::compat::check_pair;
use licentia::corpus::{Corpus, PackageLicenseIndex};
use licentia::error::Error;
use licentia::extract::interpret;
use licentia::matrix::TermMatrix;
use licentia::pipeline::{analyze, Analysis, AnalysisOptions};
use licentia::report::{render_text, Report};
use licentia::resolve::Preference;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LicentiaStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Corpus = 4,
    Scan = 5,
    Json = 6,
    Internal = 7,
}

/// Opaque license corpus.
pub struct LicentiaCorpus {
    corpus: Corpus,
}

/// Opaque result of analyzing one project.
pub struct LicentiaAnalysis {
    analysis: Analysis,
    report: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(LicentiaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io { .. } => LicentiaStatus::Io,
            Error::Lexicon { .. } | Error::Corpus { .. } => LicentiaStatus::Corpus,
            Error::Scan(_) | Error::Detection { .. } => LicentiaStatus::Scan,
            Error::Json(_) => LicentiaStatus::Json,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(LicentiaStatus::Json, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure and turns panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LicentiaStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LicentiaStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal error: panic inside licentia");
            LicentiaStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(LicentiaStatus::NullArgument, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(LicentiaStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

fn null_out(name: &str) -> Failure {
    Failure(LicentiaStatus::NullArgument, format!("`{name}` is null"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(LicentiaStatus::Internal, "output contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Library version as a static NUL-terminated string. Do not free it.
#[no_mangle]
pub extern "C" fn licentia_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn licentia_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn licentia_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads the corpus bundled with the library.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn licentia_corpus_bundled(out: *mut *mut LicentiaCorpus) -> LicentiaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_out("out"));
        }
        *out = Box::into_raw(Box::new(LicentiaCorpus {
            corpus: Corpus::bundled(),
        }));
        Ok(())
    })
}

/// Loads a corpus from a `corpus.json` file; texts are read relative to it.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn licentia_corpus_load(path: *const c_char, out: *mut *mut LicentiaCorpus) -> LicentiaStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null_out("out"));
        }
        let corpus = Corpus::load(Path::new(path))?;
        *out = Box::into_raw(Box::new(LicentiaCorpus { corpus }));
        Ok(())
    })
}

/// Number of licenses in a corpus, or 0 for null.
///
/// # Safety
/// `corpus` must be null or a live corpus handle.
#[no_mangle]
pub unsafe extern "C" fn licentia_corpus_len(corpus: *const LicentiaCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.corpus.len())
}

/// # Safety
/// `corpus` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn licentia_corpus_free(corpus: *mut LicentiaCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Scans and analyzes the project at `root`. With `prefer_custom` set,
/// generated licenses are suggested before official ones.
///
/// # Safety
/// `corpus` must be a live handle, `root` a NUL-terminated string and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn licentia_analyze(
    corpus: *const LicentiaCorpus,
    root: *const c_char,
    prefer_custom: bool,
    out: *mut *mut LicentiaAnalysis,
) -> LicentiaStatus {
    guard(|| {
        let corpus = corpus.as_ref().ok_or_else(|| null_out("corpus"))?;
        let root = Path::new(str_arg(root, "root")?);
        if out.is_null() {
            return Err(null_out("out"));
        }
        if !root.is_dir() {
            return Err(Failure(
                LicentiaStatus::Io,
                format!("{}: not a directory", root.display()),
            ));
        }
        let opts = AnalysisOptions {
            prefer: if prefer_custom {
                Preference::Custom
            } else {
                Preference::Official
            },
            ..AnalysisOptions::default()
        };
        let analysis = analyze(root, &corpus.corpus, &PackageLicenseIndex::bundled(), &opts)?;
        let report = Report::new(&analysis, corpus.corpus.version());
        *out = Box::into_raw(Box::new(LicentiaAnalysis { analysis, report }));
        Ok(())
    })
}

/// Number of incompatibility issues found, or 0 for null.
///
/// # Safety
/// `analysis` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn licentia_analysis_issue_count(analysis: *const LicentiaAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.analysis.issues.len())
}

/// The JSON report of an analysis.
///
/// # Safety
/// `analysis` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn licentia_analysis_report_json(
    analysis: *const LicentiaAnalysis,
    out: *mut *mut c_char,
) -> LicentiaStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| null_out("analysis"))?;
        if out.is_null() {
            return Err(null_out("out"));
        }
        put_string(out, a.report.to_json())
    })
}

/// The human-readable summary printed by the command-line tool.
///
/// # Safety
/// `analysis` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn licentia_analysis_render_text(
    analysis: *const LicentiaAnalysis,
    out: *mut *mut c_char,
) -> LicentiaStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| null_out("analysis"))?;
        if out.is_null() {
            return Err(null_out("out"));
        }
        put_string(out, render_text(&a.report))
    })
}

/// # Safety
/// `analysis` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn licentia_analysis_free(analysis: *mut LicentiaAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// Interprets free license text into a term matrix, returned as JSON.
///
/// # Safety
/// `text` and `license_id` must be NUL-terminated strings and `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn licentia_interpret_json(
    text: *const c_char,
    license_id: *const c_char,
    out: *mut *mut c_char,
) -> LicentiaStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let id = str_arg(license_id, "license_id")?;
        if out.is_null() {
            return Err(null_out("out"));
        }
        put_string(out, serde_json::to_string(&interpret(text, id))?)
    })
}

/// Compares two term matrices given as JSON and returns the conflicts
/// as a JSON array. An empty array means the child may sit under the parent.
///
/// # Safety
/// Both matrices must be NUL-terminated strings and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn licentia_check_pair_json(
    parent_json: *const c_char,
    child_json: *const c_char,
    out: *mut *mut c_char,
) -> LicentiaStatus {
    guard(|| {
        let parent: TermMatrix = serde_json::from_str(str_arg(parent_json, "parent_json")?)?;
        let child: TermMatrix = serde_json::from_str(str_arg(child_json, "child_json")?)?;
        if out.is_null() {
            return Err(null_out("out"));
        }
        put_string(out, serde_json::to_string(&check_pair(&parent, &child))?)
    })
}
