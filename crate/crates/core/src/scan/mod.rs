//! Finding the licenses of a project: declared license files, inline
//! headers and licenses of imported packages.

pub mod imports;
pub mod inline;
pub mod tree;

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::corpus::PackageLicenseIndex;
use crate::error::{Error, Result};

pub use inline::{detect_inline, DEFAULT_INLINE_WINDOW};
pub use tree::{build_hierarchy, LicenseTree, LicenseTreeNode, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Declared,
    Inline,
    Referenced,
}

/// Where a license was found. Paths are project-relative, `/`-separated
/// and start with `/`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LicenseSource {
    pub kind: SourceKind,
    pub path: String,
    /// First and last line (1-based, inclusive) of an inline header or a
    /// README license section.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<(usize, usize)>,
    /// Package a referenced license comes from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
}

/// A license as found, before interpretation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLicense {
    pub source: LicenseSource,
    #[serde(default)]
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spdx_hint: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOptions {
    /// Leading lines searched for inline headers.
    pub max_inline_lines: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            max_inline_lines: DEFAULT_INLINE_WINDOW,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanOutput {
    pub licenses: Vec<RawLicense>,
    pub warnings: Vec<String>,
}

const DECLARED_STEMS: &[&str] = &["LICENSE", "LICENCE", "COPYING", "COPYRIGHT", "NOTICE"];
const DECLARED_EXTENSIONS: &[&str] = &["", "txt", "md", "rst"];
const SKIPPED_DIRS: &[&str] = &[".git", ".hg", ".svn"];

/// Whether a basename names a standalone license file.
pub fn is_declared_name(basename: &str) -> bool {
    let (stem, ext) = match basename.rsplit_once('.') {
        Some((s, e)) if !s.is_empty() => (s, e),
        _ => (basename, ""),
    };
    DECLARED_STEMS.iter().any(|s| s.eq_ignore_ascii_case(stem))
        && DECLARED_EXTENSIONS.iter().any(|e| e.eq_ignore_ascii_case(ext))
}

fn is_readme(basename: &str) -> bool {
    basename.to_ascii_lowercase().starts_with("readme")
}

/// The body of a README's "License" section: lines (1-based, inclusive)
/// and text. Markdown `#` headings and underlined headings are recognized.
pub fn readme_license_section(text: &str) -> Option<(usize, usize, String)> {
    let lines: Vec<&str> = text.lines().collect();
    let heading_level = |i: usize| -> Option<(usize, &str)> {
        let t = lines[i].trim();
        if let Some(rest) = t.strip_prefix('#') {
            let level = 1 + rest.chars().take_while(|c| *c == '#').count();
            return Some((level, rest.trim_start_matches('#').trim()));
        }
        let under = lines.get(i + 1)?.trim();
        let ch = under.chars().next()?;
        (!t.is_empty() && under.len() >= 3 && "=-~^*".contains(ch) && under.chars().all(|c| c == ch))
            .then_some((if ch == '=' { 1 } else { 2 }, t))
    };
    let is_license_title = |title: &str| {
        let t = title.to_lowercase();
        t.starts_with("license") || t.starts_with("licence") || t.starts_with("licensing")
    };
    let start = (0..lines.len()).find(|&i| heading_level(i).is_some_and(|(_, t)| is_license_title(t)))?;
    let (level, _) = heading_level(start)?;
    let underlined = !lines[start].trim().starts_with('#');
    let body_start = start + if underlined { 2 } else { 1 };
    let mut end = lines.len();
    for i in body_start..lines.len() {
        if heading_level(i).is_some_and(|(l, _)| l <= level) {
            end = i;
            break;
        }
    }
    let body: Vec<&str> = lines[body_start.min(end)..end].to_vec();
    let first = body.iter().position(|l| !l.trim().is_empty())?;
    let last = body.iter().rposition(|l| !l.trim().is_empty())?;
    let text = body[first..=last].join("\n");
    Some((body_start + first + 1, body_start + last + 1, text))
}

/// Referenced licenses for the packages `names` imported by `importer`.
/// Each index hit yields one license carrying the SPDX hint; each miss
/// yields a warning.
pub fn resolve_referenced(
    importer: &str,
    names: &[String],
    index: &PackageLicenseIndex,
) -> (Vec<RawLicense>, Vec<String>) {
    let mut found = Vec::new();
    let mut warnings = Vec::new();
    for name in names {
        match index.get(name) {
            Some(id) => found.push(RawLicense {
                source: LicenseSource {
                    kind: SourceKind::Referenced,
                    path: importer.to_string(),
                    span: None,
                    origin: Some(name.clone()),
                },
                text: String::new(),
                spdx_hint: Some(id.to_string()),
            }),
            None => warnings.push(format!("unknown package `{name}` referenced by {importer}")),
        }
    }
    (found, warnings)
}

fn read_lossy(path: &Path) -> std::io::Result<String> {
    fs::read(path).map(|b| String::from_utf8_lossy(&b).into_owned())
}

fn read_head(path: &Path, lines: usize) -> std::io::Result<String> {
    let file = fs::File::open(path)?;
    let mut out = String::new();
    let mut reader = BufReader::new(file);
    let mut buf = Vec::new();
    for _ in 0..lines {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        out.push_str(&String::from_utf8_lossy(&buf));
    }
    Ok(out)
}

struct FileEntry {
    rel: String,
    abs: std::path::PathBuf,
    basename: String,
}

/// Finds every declared, inline and referenced license under `root_dir`.
/// Unreadable files become warnings; only an unreadable root fails.
/// Results are ordered by path, then span, then package.
pub fn scan_tree(root_dir: &Path, index: &PackageLicenseIndex, options: &ScanOptions) -> Result<ScanOutput> {
    fs::read_dir(root_dir).map_err(|e| Error::Scan(format!("cannot read {}: {e}", root_dir.display())))?;

    let mut warnings = Vec::new();
    let mut files = Vec::new();
    let mut local_modules: BTreeSet<String> = BTreeSet::new();
    let walker = WalkDir::new(root_dir)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| {
            !(e.file_type().is_dir() && SKIPPED_DIRS.contains(&e.file_name().to_string_lossy().as_ref()))
        });
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                warnings.push(format!("skipped unreadable entry: {e}"));
                continue;
            }
        };
        let Ok(rel) = entry.path().strip_prefix(root_dir) else {
            continue;
        };
        if rel.as_os_str().is_empty() {
            continue;
        }
        let rel = format!(
            "/{}",
            rel.components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/")
        );
        let basename = entry.file_name().to_string_lossy().into_owned();
        if entry.file_type().is_dir() {
            local_modules.insert(basename);
            continue;
        }
        if !entry.file_type().is_file() {
            continue;
        }
        if let Some(stem) = basename.strip_suffix(".py") {
            local_modules.insert(stem.to_string());
        }
        files.push(FileEntry {
            rel,
            abs: entry.into_path(),
            basename,
        });
    }

    let per_file: Vec<(Vec<RawLicense>, Vec<String>)> = files
        .par_iter()
        .map(|f| scan_file(f, index, options, &local_modules))
        .collect();
    let mut licenses = Vec::new();
    for (ls, ws) in per_file {
        licenses.extend(ls);
        warnings.extend(ws);
    }
    licenses.sort_by(|a, b| {
        (&a.source.path, a.source.span, &a.source.origin, a.source.kind).cmp(&(
            &b.source.path,
            b.source.span,
            &b.source.origin,
            b.source.kind,
        ))
    });
    Ok(ScanOutput { licenses, warnings })
}

fn scan_file(
    f: &FileEntry,
    index: &PackageLicenseIndex,
    options: &ScanOptions,
    local_modules: &BTreeSet<String>,
) -> (Vec<RawLicense>, Vec<String>) {
    let mut licenses = Vec::new();
    let mut warnings = Vec::new();
    let unreadable = |e: std::io::Error| format!("skipped unreadable file {}: {e}", f.rel);

    if is_declared_name(&f.basename) {
        match read_lossy(&f.abs) {
            Ok(text) if text.trim().is_empty() => warnings.push(format!("empty license file {}", f.rel)),
            Ok(text) => licenses.push(RawLicense {
                source: LicenseSource {
                    kind: SourceKind::Declared,
                    path: f.rel.clone(),
                    span: None,
                    origin: None,
                },
                spdx_hint: inline::spdx_tag(&text),
                text,
            }),
            Err(e) => warnings.push(unreadable(e)),
        }
        return (licenses, warnings);
    }

    if is_readme(&f.basename) {
        match read_lossy(&f.abs) {
            Ok(text) => {
                if let Some((start, end, section)) = readme_license_section(&text) {
                    licenses.push(RawLicense {
                        source: LicenseSource {
                            kind: SourceKind::Declared,
                            path: f.rel.clone(),
                            span: Some((start, end)),
                            origin: None,
                        },
                        spdx_hint: inline::spdx_tag(&section),
                        text: section,
                    });
                }
            }
            Err(e) => warnings.push(unreadable(e)),
        }
        return (licenses, warnings);
    }

    if imports::is_manifest(&f.basename) {
        match read_lossy(&f.abs) {
            Ok(text) => {
                let (found, ws) = resolve_referenced(&f.rel, &imports::requirement_names(&text), index);
                licenses.extend(found);
                warnings.extend(ws);
            }
            Err(e) => warnings.push(unreadable(e)),
        }
        return (licenses, warnings);
    }

    if !inline::is_source_file(&f.rel) {
        return (licenses, warnings);
    }
    let is_python = f.basename.ends_with(".py");
    let text = if is_python {
        read_lossy(&f.abs)
    } else {
        read_head(&f.abs, options.max_inline_lines)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            warnings.push(unreadable(e));
            return (licenses, warnings);
        }
    };
    licenses.extend(detect_inline(&f.rel, &text, options.max_inline_lines));
    if is_python {
        let mut names: Vec<String> = Vec::new();
        for module in imports::python_imports(&text) {
            let candidates = imports::module_candidates(&module);
            let name = match candidates.iter().find(|c| index.contains(c)) {
                Some(hit) => hit.clone(),
                None => {
                    let top = candidates.last().expect("at least one candidate").clone();
                    if imports::python_stdlib().contains(top.as_str()) || local_modules.contains(&top) {
                        continue;
                    }
                    top
                }
            };
            if !names.contains(&name) {
                names.push(name);
            }
        }
        let (found, ws) = resolve_referenced(&f.rel, &names, index);
        licenses.extend(found);
        warnings.extend(ws);
    }
    (licenses, warnings)
}
