use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use licentia_ffi::*;

fn mongo_app() -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/mongo_app");
    CString::new(p.to_str().unwrap()).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    licentia_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = licentia_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_string()
}

#[test]
fn analyze_mongo_app_through_the_c_abi() {
    unsafe {
        let mut corpus = ptr::null_mut();
        assert_eq!(licentia_corpus_bundled(&mut corpus), LicentiaStatus::Ok);
        assert_eq!(licentia_corpus_len(corpus), 10);

        let mut analysis = ptr::null_mut();
        assert_eq!(
            licentia_analyze(corpus, mongo_app().as_ptr(), false, &mut analysis),
            LicentiaStatus::Ok
        );
        assert!(licentia_last_error_message().is_null());
        assert_eq!(licentia_analysis_issue_count(analysis), 8);

        let mut json = ptr::null_mut();
        assert_eq!(licentia_analysis_report_json(analysis, &mut json), LicentiaStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(report["schema_version"], 1);
        assert_eq!(report["suggestions"][0]["official_id"], "Apache-2.0");

        let mut text = ptr::null_mut();
        assert_eq!(licentia_analysis_render_text(analysis, &mut text), LicentiaStatus::Ok);
        assert!(take(text).contains("Re-check with suggestions applied: passed"));

        licentia_analysis_free(analysis);
        licentia_corpus_free(corpus);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut corpus = ptr::null_mut();
        assert_eq!(
            licentia_corpus_load(ptr::null(), &mut corpus),
            LicentiaStatus::NullArgument
        );
        assert!(last_error().contains("path"));

        let missing = CString::new("/no/such/corpus.json").unwrap();
        assert_eq!(licentia_corpus_load(missing.as_ptr(), &mut corpus), LicentiaStatus::Io);
        assert!(corpus.is_null());

        let bad_utf8 = [0xffu8, 0xfe, 0];
        let mut out = ptr::null_mut();
        assert_eq!(
            licentia_interpret_json(bad_utf8.as_ptr().cast(), c"x".as_ptr(), &mut out),
            LicentiaStatus::InvalidUtf8
        );

        assert_eq!(licentia_corpus_bundled(&mut corpus), LicentiaStatus::Ok);
        let mut analysis = ptr::null_mut();
        assert_eq!(
            licentia_analyze(corpus, c"/no/such/project".as_ptr(), false, &mut analysis),
            LicentiaStatus::Io
        );
        assert!(analysis.is_null());
        assert_eq!(
            licentia_analyze(ptr::null(), mongo_app().as_ptr(), false, &mut analysis),
            LicentiaStatus::NullArgument
        );
        assert_eq!(
            licentia_check_pair_json(c"{".as_ptr(), c"{}".as_ptr(), &mut out),
            LicentiaStatus::Json
        );
        assert_eq!(licentia_analysis_issue_count(ptr::null()), 0);

        licentia_corpus_free(corpus);
        licentia_corpus_free(ptr::null_mut());
        licentia_analysis_free(ptr::null_mut());
        licentia_string_free(ptr::null_mut());
    }
}

#[test]
fn interpret_then_check_pair() {
    unsafe {
        let mut parent = ptr::null_mut();
        let mut child = ptr::null_mut();
        assert_eq!(
            licentia_interpret_json(c"You can sublicense the software.".as_ptr(), c"p".as_ptr(), &mut parent),
            LicentiaStatus::Ok
        );
        assert_eq!(
            licentia_interpret_json(
                c"You must not sublicense the software.".as_ptr(),
                c"c".as_ptr(),
                &mut child
            ),
            LicentiaStatus::Ok
        );
        let mut conflicts = ptr::null_mut();
        assert_eq!(
            licentia_check_pair_json(parent, child, &mut conflicts),
            LicentiaStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(conflicts)).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 1);
        assert_eq!(v[0]["group"], "Sublicense|work");

        assert_eq!(
            licentia_check_pair_json(child, parent, &mut conflicts),
            LicentiaStatus::Ok
        );
        assert_eq!(take(conflicts), "[]");
        licentia_string_free(parent);
        licentia_string_free(child);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(licentia_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_profile_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps/
    std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = std::fs::read_to_string(include.join("licentia.h")).unwrap();
    for f in [
        "licentia_analyze",
        "licentia_check_pair_json",
        "licentia_last_error_message",
    ] {
        assert!(header.contains(f), "{f} missing from header");
    }
    assert!(header.contains("typedef struct LicentiaCorpus LicentiaCorpus;"));

    let staticlib = target_profile_dir().join("liblicentia_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !staticlib.exists() {
        eprintln!("no C compiler or static library; header checked textually only");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "licentia.h"

int main(int argc, char **argv) {
    LicentiaCorpus *corpus = NULL;
    LicentiaAnalysis *analysis = NULL;
    char *text = NULL;
    if (licentia_corpus_bundled(&corpus) != LICENTIA_STATUS_OK) return 10;
    if (licentia_analyze(corpus, "/no/such/dir", false, &analysis) != LICENTIA_STATUS_IO) return 11;
    if (licentia_last_error_message() == NULL) return 12;
    if (licentia_analyze(corpus, argv[1], false, &analysis) != LICENTIA_STATUS_OK) return 13;
    if (licentia_analysis_render_text(analysis, &text) != LICENTIA_STATUS_OK) return 14;
    printf("%zu %s", licentia_analysis_issue_count(analysis), text);
    licentia_string_free(text);
    licentia_analysis_free(analysis);
    licentia_corpus_free(corpus);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let cc = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(cc.status.success(), "{}", String::from_utf8_lossy(&cc.stderr));
    let run = Command::new(&exe).arg(mongo_app().to_str().unwrap()).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(
        stdout.starts_with("8 /db.py::datetime [ZPL-2.1] vs /db.py [MIT]"),
        "{stdout}"
    );
}
