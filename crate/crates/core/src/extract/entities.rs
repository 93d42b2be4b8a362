//! Longest-match entity tagging over the lexicon tables.

use serde::{Deserialize, Serialize};

use crate::extract::lexicon::{ActionSense, IgnoreKind, Lexicon};
use crate::extract::preprocess::Sentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    Action,
    Object,
    Attitude,
    Condition,
}

/// A tagged span of one sentence. `token_span` is half-open.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub kind: EntityKind,
    pub text: String,
    pub sentence_index: usize,
    pub token_span: (usize, usize),
    /// Canonical lexicon label of the matched surface form.
    pub label: String,
}

impl Entity {
    pub fn start(&self) -> usize {
        self.token_span.0
    }

    pub fn end(&self) -> usize {
        self.token_span.1
    }
}

/// Tags entities left to right. A sentence-level ignore phrase (such as a
/// definition marker) empties the result. At each position an ignored
/// phrase or a condition marker takes precedence; otherwise the longest match among
/// attitudes, actions and objects wins, ties broken in that order. The
/// returned spans never overlap.
pub fn extract_entities(lexicon: &Lexicon, sentence: &Sentence) -> Vec<Entity> {
    let stems = sentence.stems();
    let mut out = Vec::new();
    let mut i = 0;
    while i < stems.len() {
        let token = &sentence.tokens[i];
        if !token.is_word {
            i += 1;
            continue;
        }
        let verb_allowed = !lexicon.ignore_words.contains(&token.text.to_lowercase());
        match lexicon.ignore.longest_at(&stems, i) {
            Some((_, IgnoreKind::Sentence | IgnoreKind::Stop)) => return Vec::new(),
            Some((_, IgnoreKind::Rest)) => break,
            Some((len, _)) => {
                i += len;
                continue;
            }
            None => {}
        }
        if let Some((len, label)) = lexicon.conditions.longest_at(&stems, i) {
            out.push(entity(sentence, EntityKind::Condition, i, len, label.clone()));
            i += len;
            continue;
        }
        let mut best: Option<(usize, EntityKind, String)> = None;
        let mut consider = |len: usize, kind: EntityKind, label: String| {
            if best.as_ref().is_none_or(|(l, _, _)| len > *l) {
                best = Some((len, kind, label));
            }
        };
        if let Some((len, a)) = lexicon.attitudes.longest_at(&stems, i) {
            consider(len, EntityKind::Attitude, a.to_string());
        }
        if let Some((len, sense)) = lexicon.actions.longest_at(&stems, i).filter(|_| verb_allowed) {
            let label = match sense {
                ActionSense::Direct(c) => c.to_string(),
                ActionSense::Generic(s) => format!("@{s}"),
            };
            consider(len, EntityKind::Action, label);
        }
        if let Some((len, label)) = lexicon.objects.longest_at(&stems, i) {
            consider(len, EntityKind::Object, label.clone());
        }
        match best {
            Some((len, kind, label)) => {
                out.push(entity(sentence, kind, i, len, label));
                i += len;
            }
            None => i += 1,
        }
    }
    out
}

fn entity(sentence: &Sentence, kind: EntityKind, start: usize, len: usize, label: String) -> Entity {
    Entity {
        kind,
        text: sentence.span_text(start, start + len),
        sentence_index: sentence.index,
        token_span: (start, start + len),
        label,
    }
}
