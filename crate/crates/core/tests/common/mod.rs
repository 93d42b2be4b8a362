#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use licentia::corpus::{Corpus, PackageLicenseIndex};
use licentia::pipeline::{analyze, Analysis, AnalysisOptions};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn write(root: &Path, rel: &str, content: &str) {
    let path = root.join(rel);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, content).unwrap();
}

/// Full text of a bundled license with a copyright line on top.
pub fn license_text(id: &str, holder: &str) -> String {
    let corpus = Corpus::bundled();
    let l = corpus.lookup(id).unwrap();
    format!("Copyright (c) 2017 {holder}\n\n{}", l.text)
}

pub fn copy_dir(from: &Path, to: &Path) {
    for entry in walkdir::WalkDir::new(from) {
        let entry = entry.unwrap();
        let rel = entry.path().strip_prefix(from).unwrap();
        let dest = to.join(rel);
        if entry.file_type().is_dir() {
            fs::create_dir_all(&dest).unwrap();
        } else {
            fs::copy(entry.path(), &dest).unwrap();
        }
    }
}

pub fn run_analysis(root: &Path) -> Analysis {
    analyze(
        root,
        &Corpus::bundled(),
        &PackageLicenseIndex::bundled(),
        &AnalysisOptions::default(),
    )
    .unwrap()
}
