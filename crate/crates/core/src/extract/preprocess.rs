//! Cleaning, sentence splitting, tokenization and light stemming.

use std::sync::LazyLock;

use regex::Regex;
use serde::Serialize;

/// A token with its original casing and its matching key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub text: String,
    pub stem: String,
    pub is_word: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sentence {
    pub index: usize,
    /// Paragraph the sentence came from, counted over kept paragraphs.
    pub paragraph: usize,
    pub text: String,
    pub tokens: Vec<Token>,
}

impl Sentence {
    /// Builds a sentence directly from a string, skipping cleaning.
    pub fn from_text(index: usize, text: &str) -> Self {
        Self {
            index,
            paragraph: 0,
            text: text.trim().to_string(),
            tokens: tokens_of(text),
        }
    }

    pub fn stems(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.stem.as_str()).collect()
    }

    pub fn span_text(&self, start: usize, end: usize) -> String {
        join_tokens(&self.tokens[start..end])
    }
}

static TOKEN_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[\p{L}\p{N}]+(?:['’][\p{L}]+)?|[^\s\p{L}\p{N}]").unwrap());

/// Splits text into word and single-character punctuation tokens.
pub fn tokenize(text: &str) -> Vec<&str> {
    TOKEN_RE.find_iter(text).map(|m| m.as_str()).collect()
}

fn tokens_of(text: &str) -> Vec<Token> {
    tokenize(text)
        .into_iter()
        .map(|t| Token {
            text: t.to_string(),
            stem: stem(&t.to_lowercase()),
            is_word: t.chars().next().is_some_and(char::is_alphanumeric),
        })
        .collect()
}

/// Joins tokens back into readable text, without spaces before closing
/// punctuation.
pub fn join_tokens(tokens: &[Token]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        let tight = matches!(t.text.as_str(), "," | ";" | ":" | "." | ")" | "!" | "?" | "/" | "-")
            || (i > 0 && matches!(tokens[i - 1].text.as_str(), "(" | "/" | "-"));
        if i > 0 && !tight {
            out.push(' ');
        }
        out.push_str(&t.text);
    }
    out
}

/// Light suffix stemmer: enough to fold plurals and the common verb
/// inflections onto one key. Input must already be lowercase.
pub fn stem(word: &str) -> String {
    let w = word.trim_end_matches("'s").trim_end_matches("’s");
    let n = w.chars().count();
    if !w.is_ascii() || n <= 3 {
        return w.to_string();
    }
    let cut = |suffix: &str| &w[..w.len() - suffix.len()];
    let mut base: String = if (w.ends_with("ies") || w.ends_with("ied")) && n > 4 {
        format!("{}y", cut("ies"))
    } else if w.ends_with("ing") && n - 3 >= 3 {
        cut("ing").to_string()
    } else if w.ends_with("ed") && n - 2 >= 3 {
        cut("ed").to_string()
    } else if w.ends_with("es") && n - 2 >= 3 {
        cut("es").to_string()
    } else if w.ends_with('s') && !w.ends_with("ss") && n > 3 {
        cut("s").to_string()
    } else {
        w.to_string()
    };
    if base.ends_with('e') && base.len() > 3 {
        base.pop();
    }
    base
}

static BULLET_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:[-*•+]\s+|\d+(?:\.\d+)*[.)]\s+|\(\w{1,4}\)\s+|[a-zA-Z][.)]\s+)").unwrap());

static SEPARATOR_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[\s=\-*_~#+/\\|.]*$").unwrap());

static MD_LINK_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[([^\]]*)\]\([^)]*\)").unwrap());

const HEADING_FUNCTION_WORDS: [&str; 12] = [
    "of", "the", "and", "or", "for", "a", "an", "to", "in", "on", "with", "by",
];

/// Removes comment leaders, box drawing, markdown decoration and trailing
/// comment closers from one line.
pub fn strip_markup(line: &str) -> String {
    let mut s: String = line
        .chars()
        .filter(|c| !('\u{2500}'..='\u{257F}').contains(c))
        .collect();
    s = s.trim().to_string();
    loop {
        let before = s.len();
        for lead in [
            "<!--", "/*", "*/", "//", "\"\"\"", "'''", "#", ";;", "--", "*", "%", "!",
        ] {
            if let Some(rest) = s.strip_prefix(lead) {
                s = rest.trim_start().to_string();
            }
        }
        if s.len() == before {
            break;
        }
    }
    for tail in ["*/", "-->", "\"\"\"", "'''"] {
        if let Some(rest) = s.strip_suffix(tail) {
            s = rest.trim_end().to_string();
        }
    }
    s = MD_LINK_RE.replace_all(&s, "$1").into_owned();
    s.replace("**", "").replace("__", "").replace('`', "")
}

fn is_heading(segment: &str) -> bool {
    let trimmed = segment.trim();
    if trimmed.ends_with(['.', '!', '?', ':', ';']) {
        return false;
    }
    let words: Vec<&str> = trimmed.split_whitespace().collect();
    if words.is_empty() || words.len() > 12 {
        return false;
    }
    if words[0].to_ascii_lowercase().starts_with("copyright") {
        return true;
    }
    let mut in_bracket = false;
    for w in &words {
        if w.starts_with(['<', '[']) {
            in_bracket = true;
        }
        let skip = in_bracket || w.contains("://") || w.starts_with("www.");
        if w.ends_with(['>', ']']) {
            in_bracket = false;
        }
        if skip {
            continue;
        }
        let Some(first) = w.chars().find(|c| c.is_alphabetic()) else {
            continue;
        };
        let bare = w.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase();
        if first.is_lowercase() && !HEADING_FUNCTION_WORDS.contains(&bare.as_str()) {
            return false;
        }
    }
    true
}

const ABBREVIATIONS: [&str; 14] = [
    "e.g", "i.e", "etc", "inc", "ltd", "co", "corp", "vs", "v", "no", "sec", "cf", "st", "mr",
];

/// Splits a cleaned segment at terminal punctuation.
fn split_sentences(segment: &str) -> Vec<String> {
    let chars: Vec<char> = segment.chars().collect();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if matches!(c, '.' | '!' | '?') {
            let next = chars.get(i + 1).copied();
            let at_end = next.is_none();
            let followed_by_space = next.is_some_and(char::is_whitespace);
            if at_end || followed_by_space {
                let upcoming = chars[i + 1..].iter().find(|c| !c.is_whitespace()).copied();
                let starts_new =
                    upcoming.is_none_or(|u| u.is_uppercase() || u.is_numeric() || matches!(u, '"' | '“' | '(' | '\''));
                let word: String = chars[start..i]
                    .iter()
                    .rev()
                    .take_while(|c| !c.is_whitespace() && **c != '(')
                    .collect::<Vec<_>>()
                    .into_iter()
                    .rev()
                    .collect();
                let abbrev = c == '.' && ABBREVIATIONS.contains(&word.trim_start_matches('(').to_lowercase().as_str());
                if starts_new && !abbrev {
                    let piece: String = chars[start..=i].iter().collect();
                    if !piece.trim().is_empty() {
                        out.push(piece.trim().to_string());
                    }
                    start = i + 1;
                }
            }
        }
        i += 1;
    }
    let rest: String = chars[start..].iter().collect();
    if !rest.trim().is_empty() {
        out.push(rest.trim().to_string());
    }
    out
}

/// Cleans license text and splits it into sentences.
///
/// Paragraph breaks and list bullets always end a sentence. Short
/// unpunctuated title-case paragraphs (titles, copyright lines) are
/// dropped, as are fragments without any word token.
pub fn preprocess(text: &str) -> Vec<Sentence> {
    // Segments are runs of lines; a blank line or a bullet starts a new one.
    let mut segments: Vec<(usize, Vec<String>, bool)> = Vec::new();
    let mut paragraph = 0usize;
    let mut open = false;
    for raw in text.lines() {
        let line = strip_markup(raw);
        if line.is_empty() || SEPARATOR_RE.is_match(&line) {
            if open {
                paragraph += 1;
            }
            open = false;
            continue;
        }
        let bullet = BULLET_RE.find(&line).map(|m| m.end());
        let body = match bullet {
            Some(end) => line[end..].trim().to_string(),
            None => line,
        };
        if body.is_empty() {
            continue;
        }
        if !open {
            segments.push((paragraph, vec![body], true));
            open = true;
        } else if bullet.is_some() {
            segments.push((paragraph, vec![body], false));
        } else if let Some(last) = segments.last_mut() {
            last.1.push(body);
        }
    }

    let mut sentences = Vec::new();
    let mut kept_paragraphs: Vec<usize> = Vec::new();
    for (para, lines, _) in segments {
        let joined = lines.join(" ");
        if is_heading(&joined) {
            continue;
        }
        for piece in split_sentences(&joined) {
            let tokens = tokens_of(&piece);
            if !tokens.iter().any(|t| t.is_word) {
                continue;
            }
            if kept_paragraphs.last() != Some(&para) {
                kept_paragraphs.push(para);
            }
            sentences.push(Sentence {
                index: sentences.len(),
                paragraph: kept_paragraphs.len() - 1,
                text: piece,
                tokens,
            });
        }
    }
    sentences
}
