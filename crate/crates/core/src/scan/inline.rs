//! License headers in the leading comment block of source files.

use std::sync::OnceLock;

use regex::Regex;

use crate::scan::{LicenseSource, RawLicense, SourceKind};

/// Default number of leading lines searched for a license header.
pub const DEFAULT_INLINE_WINDOW: usize = 60;

const GRANT_PHRASES: &str = include_str!("../../data/scan/grant_phrases.txt");

/// File extensions treated as source code.
pub const SOURCE_EXTENSIONS: &[&str] = &[
    "py", "pyi", "pyx", "js", "mjs", "cjs", "jsx", "ts", "tsx", "c", "h", "cc", "cpp", "cxx", "hpp", "hh", "hxx",
    "java", "kt", "kts", "scala", "go", "rs", "rb", "php", "pl", "pm", "sh", "bash", "zsh", "swift", "m", "mm", "cs",
    "fs", "lua", "r", "sql", "hs", "el", "clj", "ex", "exs", "erl", "dart", "vue", "css", "scss", "less", "html",
    "xml",
];

pub fn is_source_file(path: &str) -> bool {
    path.rsplit_once('.').is_some_and(|(stem, ext)| {
        !stem.ends_with('/') && SOURCE_EXTENSIONS.contains(&ext.to_ascii_lowercase().as_str())
    })
}

fn grant_phrases() -> &'static [String] {
    static PHRASES: OnceLock<Vec<String>> = OnceLock::new();
    PHRASES.get_or_init(|| {
        GRANT_PHRASES
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect()
    })
}

/// Whether `text` contains license grant language.
pub fn has_grant_language(text: &str) -> bool {
    let normalized = text.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    grant_phrases().iter().any(|p| normalized.contains(p.as_str()))
}

/// SPDX identifier from an `SPDX-License-Identifier:` tag.
pub fn spdx_tag(text: &str) -> Option<String> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"(?i)SPDX-License-Identifier:\s*([A-Za-z0-9.+\-]+)").expect("valid regex"));
    re.captures(text).map(|c| c[1].to_string())
}

/// A comment block with marker characters removed. Lines are 1-based and
/// inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommentBlock {
    pub start_line: usize,
    pub end_line: usize,
    pub text: String,
}

const LINE_MARKERS: &[&str] = &["//", "#", "--", ";;", ";", "%"];

fn line_marker(trimmed: &str) -> Option<&'static str> {
    LINE_MARKERS.iter().copied().find(|m| trimmed.starts_with(m))
}

fn strip_marker<'a>(trimmed: &'a str, marker: &str) -> &'a str {
    let rest = trimmed[marker.len()..].trim_start_matches(marker.chars().next().unwrap_or(' '));
    rest.strip_prefix(' ').unwrap_or(rest)
}

fn is_preamble(line: &str) -> bool {
    let t = line.trim();
    t.is_empty()
        || t.starts_with("#!")
        || t.starts_with("<?php")
        || t.starts_with("<?xml")
        || (t.starts_with('#')
            && t.contains("coding")
            && (t.contains("-*-") || t.contains("coding:") || t.contains("coding=")))
}

/// The first comment block within the first `window` lines, skipping
/// shebang, encoding and blank lines before it.
pub fn leading_comment_block(text: &str, window: usize) -> Option<CommentBlock> {
    let lines: Vec<&str> = text.lines().take(window).collect();
    let first = lines.iter().position(|l| !is_preamble(l))?;
    let opening = lines[first].trim();

    let delimited = [
        ("/*", "*/"),
        ("<!--", "-->"),
        ("\"\"\"", "\"\"\""),
        ("'''", "'''"),
        ("{-", "-}"),
    ];
    if let Some(&(open, close)) = delimited.iter().find(|(open, _)| opening.starts_with(open)) {
        let mut body = Vec::new();
        for (i, line) in lines.iter().enumerate().skip(first) {
            let mut t = line.trim();
            if i == first {
                t = &t[open.len()..];
            }
            let (content, done) = match t.find(close) {
                Some(pos) => (&t[..pos], true),
                None => (t, false),
            };
            let content = content.trim_start_matches('*').trim_start_matches('!');
            body.push(content.strip_prefix(' ').unwrap_or(content).trim_end().to_string());
            if done {
                return Some(CommentBlock {
                    start_line: first + 1,
                    end_line: i + 1,
                    text: body.join("\n").trim().to_string(),
                });
            }
        }
        // Unterminated within the window: the window bounds the block.
        return Some(CommentBlock {
            start_line: first + 1,
            end_line: lines.len(),
            text: body.join("\n").trim().to_string(),
        });
    }

    let marker = line_marker(opening)?;
    let mut body = Vec::new();
    let mut last = first;
    for (i, line) in lines.iter().enumerate().skip(first) {
        let t = line.trim();
        if t.is_empty() {
            body.push(String::new());
            continue;
        }
        if !t.starts_with(marker) {
            break;
        }
        body.push(strip_marker(t, marker).trim_end().to_string());
        last = i;
    }
    body.truncate(last - first + 1);
    Some(CommentBlock {
        start_line: first + 1,
        end_line: last + 1,
        text: body.join("\n").trim().to_string(),
    })
}

/// An inline license when the leading comment block of `file_text`
/// carries grant language. A copyright notice alone is not a license.
pub fn detect_inline(path: &str, file_text: &str, window: usize) -> Option<RawLicense> {
    let block = leading_comment_block(file_text, window)?;
    if !has_grant_language(&block.text) {
        return None;
    }
    Some(RawLicense {
        source: LicenseSource {
            kind: SourceKind::Inline,
            path: path.to_string(),
            span: Some((block.start_line, block.end_line)),
            origin: None,
        },
        spdx_hint: spdx_tag(&block.text),
        text: block.text,
    })
}
