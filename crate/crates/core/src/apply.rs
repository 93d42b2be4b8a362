//! Writing suggestions back into project files.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pipeline::Analysis;
use crate::resolve::{ResolutionSuggestion, SuggestionKind};
use crate::scan::{RawLicense, SourceKind};

/// Replacement text of a suggestion: the SPDX tag for an official license
/// in a file header, the full text otherwise.
fn replacement(s: &ResolutionSuggestion, corpus: &crate::corpus::Corpus, header: bool) -> Option<String> {
    match s.kind {
        SuggestionKind::Official => {
            let id = s.official_id.as_deref()?;
            if header {
                Some(format!("SPDX-License-Identifier: {id}"))
            } else {
                corpus.lookup(id).map(|l| l.text.clone())
            }
        }
        SuggestionKind::Custom | SuggestionKind::CustomWithException => s.custom_text.clone(),
        SuggestionKind::Unresolvable => None,
    }
}

/// Copyright lines of the old license, kept so the owner stays visible.
fn copyright_lines(old: &RawLicense) -> Vec<&str> {
    old.text
        .lines()
        .map(str::trim)
        .filter(|l| l.to_lowercase().starts_with("copyright"))
        .collect()
}

fn comment_block(first_line: &str, body: &[String]) -> Option<Vec<String>> {
    let indent: String = first_line.chars().take_while(|c| c.is_whitespace()).collect();
    let t = first_line.trim_start();
    for marker in ["//", "#", "--", ";;", ";", "%"] {
        if t.starts_with(marker) && !t.starts_with("#!") {
            return Some(
                body.iter()
                    .map(|l| {
                        if l.is_empty() {
                            format!("{indent}{marker}")
                        } else {
                            format!("{indent}{marker} {l}")
                        }
                    })
                    .collect(),
            );
        }
    }
    for (open, mid, close) in [
        ("/*", " * ", " */"),
        ("<!--", "  ", "-->"),
        ("\"\"\"", "", "\"\"\""),
        ("'''", "", "'''"),
    ] {
        if t.starts_with(open) {
            let mut out = vec![format!("{indent}{open}")];
            out.extend(body.iter().map(|l| format!("{indent}{mid}{l}").trim_end().to_string()));
            out.push(format!("{indent}{close}"));
            return Some(out);
        }
    }
    None
}

/// Rewrites the license files of every resolvable suggestion. Returns the
/// project paths written and warnings for targets left untouched.
pub fn apply_suggestions(
    root: &Path,
    analysis: &Analysis,
    corpus: &crate::corpus::Corpus,
) -> Result<(Vec<String>, Vec<String>)> {
    let mut written = Vec::new();
    let mut warnings = Vec::new();
    for s in &analysis.resolution.suggestions {
        if s.kind == SuggestionKind::Unresolvable {
            continue;
        }
        let node = analysis.tree.node(s.target.node);
        for old in &node.licenses {
            if old.source.kind == SourceKind::Referenced {
                continue;
            }
            let file = root.join(old.source.path.trim_start_matches('/'));
            let header = old.source.kind == SourceKind::Inline;
            let Some(text) = replacement(s, corpus, header) else {
                continue;
            };
            let mut body: Vec<String> = copyright_lines(old).into_iter().map(str::to_string).collect();
            if !body.is_empty() {
                body.push(String::new());
            }
            body.extend(text.lines().map(str::to_string));

            let new_content = match old.source.span {
                None => body.join("\n") + "\n",
                Some((start, end)) => {
                    let content = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
                    let lines: Vec<&str> = content.lines().collect();
                    let block = if header {
                        match comment_block(lines.get(start - 1).copied().unwrap_or(""), &body) {
                            Some(b) => b,
                            None => {
                                warnings.push(format!("cannot rewrite the header of {}", old.source.path));
                                continue;
                            }
                        }
                    } else {
                        body.clone()
                    };
                    let mut out: Vec<String> = lines[..start - 1].iter().map(|l| l.to_string()).collect();
                    out.extend(block);
                    out.extend(lines[end.min(lines.len())..].iter().map(|l| l.to_string()));
                    out.join("\n") + "\n"
                }
            };
            fs::write(&file, new_content).map_err(|e| Error::io(&file, e))?;
            written.push(old.source.path.clone());
        }
    }
    Ok((written, warnings))
}
