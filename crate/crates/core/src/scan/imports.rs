//! Third-party package names referenced by Python sources and
//! requirements-style manifests.

use std::collections::HashSet;
use std::sync::OnceLock;

use regex::Regex;

const PYTHON_STDLIB: &str = include_str!("../../data/scan/python_stdlib.txt");

pub fn python_stdlib() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        PYTHON_STDLIB
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

/// Absolute module names imported by a Python file, in order of first
/// appearance. Relative imports are skipped.
pub fn python_imports(text: &str) -> Vec<String> {
    static IMPORT: OnceLock<Regex> = OnceLock::new();
    static FROM: OnceLock<Regex> = OnceLock::new();
    let import = IMPORT.get_or_init(|| Regex::new(r"^\s*import\s+(.+)$").expect("valid regex"));
    let from = FROM.get_or_init(|| Regex::new(r"^\s*from\s+([A-Za-z_][\w.]*)\s+import\b").expect("valid regex"));

    let mut out: Vec<String> = Vec::new();
    let mut push = |name: &str| {
        let name = name.trim();
        let valid = !name.is_empty()
            && name.split('.').all(|p| {
                p.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                    && p.chars().all(|c| c.is_alphanumeric() || c == '_')
            });
        if valid && !out.iter().any(|o| o == name) {
            out.push(name.to_string());
        }
    };
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        if let Some(c) = from.captures(line) {
            push(&c[1]);
        } else if let Some(c) = import.captures(line) {
            for part in c[1].trim_end_matches(['(', ')', '\\']).split(',') {
                let module = part.split_whitespace().next().unwrap_or("");
                push(module);
            }
        }
    }
    out
}

/// Package names listed in a requirements-style manifest (`name==1.0`,
/// `name>=2`, bare `name`). Options, URLs and comments are skipped.
pub fn requirement_names(text: &str) -> Vec<String> {
    static NAME: OnceLock<Regex> = OnceLock::new();
    let re = NAME.get_or_init(|| Regex::new(r"^([A-Za-z0-9][A-Za-z0-9._\-]*)").expect("valid regex"));
    let mut out: Vec<String> = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with('-') || line.contains("://") {
            continue;
        }
        if let Some(c) = re.captures(line) {
            let name = c[1].to_string();
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    out
}

/// Whether a basename is a requirements-style manifest.
pub fn is_manifest(basename: &str) -> bool {
    let lower = basename.to_ascii_lowercase();
    lower.starts_with("requirements") && lower.ends_with(".txt")
}

/// Candidate package names for a dotted module, longest prefix first
/// ("zope.interface.verify" gives "zope.interface.verify",
/// "zope.interface", "zope").
pub fn module_candidates(module: &str) -> Vec<String> {
    let parts: Vec<&str> = module.split('.').collect();
    (1..=parts.len()).rev().map(|n| parts[..n].join(".")).collect()
}
