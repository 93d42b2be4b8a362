//! Line-oriented lexicon tables (`surface-form<TAB>canonical-label`).
//!
//! Blank lines and lines starting with `#` are ignored. Surface forms are
//! tokenized and stemmed exactly like license text, so one row matches
//! the usual inflections of a phrase.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::str::FromStr;

use crate::action::ActionCategory;
use crate::attitude::Attitude;
use crate::error::{Error, Result};
use crate::extract::preprocess::{stem, tokenize};

const ATTITUDES: &str = include_str!("../../data/lexicon/attitudes.tsv");
const ACTIONS: &str = include_str!("../../data/lexicon/actions.tsv");
const ACTION_RULES: &str = include_str!("../../data/lexicon/action_rules.tsv");
const OBJECTS: &str = include_str!("../../data/lexicon/objects.tsv");
const CONDITIONS: &str = include_str!("../../data/lexicon/conditions.tsv");
const IGNORE: &str = include_str!("../../data/lexicon/ignore.tsv");
const NEGATIONS: &str = include_str!("../../data/lexicon/negations.tsv");
const CATEGORIES: &str = include_str!("../../data/lexicon/categories.tsv");

/// Version of the bundled lexicon data; bump on any table change.
pub const LEXICON_VERSION: &str = "1";

/// How an action surface form maps onto categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionSense {
    /// The surface form alone determines the category.
    Direct(ActionCategory),
    /// The category depends on the object, via the action rule table.
    Generic(String),
}

/// Phrase table keyed by stemmed token sequences.
#[derive(Debug, Clone)]
pub struct PhraseTable<T> {
    entries: HashMap<String, T>,
    max_len: usize,
}

impl<T> Default for PhraseTable<T> {
    fn default() -> Self {
        Self {
            entries: HashMap::new(),
            max_len: 0,
        }
    }
}

impl<T: Clone> PhraseTable<T> {
    pub fn insert(&mut self, surface: &str, value: T) {
        let key = phrase_key(surface);
        if key.is_empty() {
            return;
        }
        self.max_len = self.max_len.max(key.len());
        self.entries.insert(key.join(" "), value);
    }

    /// Longest entry matching `stems` starting at `start`; returns the
    /// matched length and its value.
    pub fn longest_at(&self, stems: &[&str], start: usize) -> Option<(usize, &T)> {
        let avail = stems.len().saturating_sub(start);
        for len in (1..=self.max_len.min(avail)).rev() {
            let window = stems[start..start + len].join(" ");
            if let Some(v) = self.entries.get(&window) {
                return Some((len, v));
            }
        }
        None
    }

    pub fn get(&self, surface: &str) -> Option<&T> {
        self.entries.get(&phrase_key(surface).join(" "))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn phrase_key(surface: &str) -> Vec<String> {
    tokenize(surface).iter().map(|t| stem(&t.to_lowercase())).collect()
}

/// What an ignore-table row suppresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IgnoreKind {
    /// Skip the matched phrase.
    Phrase,
    /// Never start an action at a token with exactly this lowercase form,
    /// for inflections whose stem collides with a verb ("including").
    Word,
    /// Drop the whole sentence, e.g. definitions.
    Sentence,
    /// Skip the rest of the sentence, e.g. an exception clause.
    Rest,
    /// End of the operative terms: nothing after a line starting with the
    /// phrase is interpreted.
    Stop,
    /// Start of the operative terms: a line starting with the phrase
    /// discards everything before it, such as a preamble.
    Start,
}

/// Generation template for one category: a verb phrase, and the
/// preposition joining it to an object (empty for direct objects).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub verb: String,
    pub connector: String,
}

impl Template {
    /// Whether the object follows the verb directly; such clauses can be
    /// merged when they share an object.
    pub fn is_direct(&self) -> bool {
        self.connector.is_empty()
    }
}

/// The full set of tables driving the extractor and the generator.
#[derive(Debug, Clone)]
pub struct Lexicon {
    pub attitudes: PhraseTable<Attitude>,
    pub actions: PhraseTable<ActionSense>,
    pub objects: PhraseTable<String>,
    pub conditions: PhraseTable<String>,
    pub ignore: PhraseTable<IgnoreKind>,
    /// Exact lowercase tokens that never start an action.
    pub ignore_words: HashSet<String>,
    /// Stemmed phrases marking the end of the operative terms.
    pub stop_phrases: Vec<Vec<String>>,
    /// Stemmed phrases marking the start of the operative terms.
    pub start_phrases: Vec<Vec<String>>,
    pub negations: HashSet<String>,
    /// (sense, object label or `*`) -> category.
    pub rules: HashMap<(String, String), ActionCategory>,
    pub templates: BTreeMap<ActionCategory, Template>,
}

/// Raw text of each table, so callers can override individual files.
#[derive(Debug, Clone)]
pub struct LexiconSources {
    pub attitudes: String,
    pub actions: String,
    pub action_rules: String,
    pub objects: String,
    pub conditions: String,
    pub ignore: String,
    pub negations: String,
    pub categories: String,
}

impl Default for LexiconSources {
    fn default() -> Self {
        Self {
            attitudes: ATTITUDES.into(),
            actions: ACTIONS.into(),
            action_rules: ACTION_RULES.into(),
            objects: OBJECTS.into(),
            conditions: CONDITIONS.into(),
            ignore: IGNORE.into(),
            negations: NEGATIONS.into(),
            categories: CATEGORIES.into(),
        }
    }
}

impl LexiconSources {
    /// Reads every table present in `dir`, falling back to the bundled
    /// copy for missing files.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut sources = Self::default();
        let slots: [(&str, &mut String); 8] = [
            ("attitudes.tsv", &mut sources.attitudes),
            ("actions.tsv", &mut sources.actions),
            ("action_rules.tsv", &mut sources.action_rules),
            ("objects.tsv", &mut sources.objects),
            ("conditions.tsv", &mut sources.conditions),
            ("ignore.tsv", &mut sources.ignore),
            ("negations.tsv", &mut sources.negations),
            ("categories.tsv", &mut sources.categories),
        ];
        for (name, slot) in slots {
            let path = dir.join(name);
            if path.exists() {
                *slot = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            }
        }
        Ok(sources)
    }
}

fn rows<'a>(file: &'a str, text: &'a str) -> impl Iterator<Item = Result<(usize, &'a str, &'a str)>> + 'a {
    text.lines().enumerate().filter_map(move |(i, line)| {
        let trimmed = line.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            return None;
        }
        Some(match trimmed.split_once('\t') {
            Some((surface, label)) if !surface.trim().is_empty() && !label.trim().is_empty() => {
                Ok((i + 1, surface.trim(), label.trim()))
            }
            _ => Err(Error::Lexicon {
                file: file.to_string(),
                line: i + 1,
                message: "expected `surface<TAB>label`".into(),
            }),
        })
    })
}

fn bad_label(file: &str, line: usize, label: &str) -> Error {
    Error::Lexicon {
        file: file.to_string(),
        line,
        message: format!("unknown label `{label}`"),
    }
}

impl Lexicon {
    pub fn bundled() -> Self {
        Self::from_sources(&LexiconSources::default()).expect("bundled lexicon is valid")
    }

    /// Process-wide copy of the bundled lexicon.
    pub fn shared() -> &'static Lexicon {
        static SHARED: std::sync::OnceLock<Lexicon> = std::sync::OnceLock::new();
        SHARED.get_or_init(Self::bundled)
    }

    pub fn from_sources(src: &LexiconSources) -> Result<Self> {
        let mut attitudes = PhraseTable::default();
        for row in rows("attitudes.tsv", &src.attitudes) {
            let (line, surface, label) = row?;
            let a = Attitude::from_str(label).map_err(|_| bad_label("attitudes.tsv", line, label))?;
            attitudes.insert(surface, a);
        }

        let mut actions = PhraseTable::default();
        for row in rows("actions.tsv", &src.actions) {
            let (line, surface, label) = row?;
            let sense = match label.strip_prefix('@') {
                Some(sense) => ActionSense::Generic(sense.to_string()),
                None => ActionSense::Direct(label.parse().map_err(|_| bad_label("actions.tsv", line, label))?),
            };
            actions.insert(surface, sense);
        }

        let mut rules = HashMap::new();
        for row in rows("action_rules.tsv", &src.action_rules) {
            let (line, surface, label) = row?;
            let (sense, object) = surface
                .strip_prefix('@')
                .and_then(|s| s.split_once('|'))
                .ok_or_else(|| bad_label("action_rules.tsv", line, surface))?;
            let category = label.parse().map_err(|_| bad_label("action_rules.tsv", line, label))?;
            rules.insert((sense.to_string(), object.to_string()), category);
        }

        let mut objects = PhraseTable::default();
        for row in rows("objects.tsv", &src.objects) {
            let (_, surface, label) = row?;
            objects.insert(surface, label.to_string());
        }

        let mut conditions = PhraseTable::default();
        for row in rows("conditions.tsv", &src.conditions) {
            let (_, surface, label) = row?;
            conditions.insert(surface, label.to_string());
        }

        let mut ignore = PhraseTable::default();
        let mut ignore_words = HashSet::new();
        let mut stop_phrases = Vec::new();
        let mut start_phrases = Vec::new();
        for row in rows("ignore.tsv", &src.ignore) {
            let (line, surface, label) = row?;
            match label {
                "PHRASE" => ignore.insert(surface, IgnoreKind::Phrase),
                "SENTENCE" => ignore.insert(surface, IgnoreKind::Sentence),
                "REST" => ignore.insert(surface, IgnoreKind::Rest),
                "STOP" => {
                    ignore.insert(surface, IgnoreKind::Sentence);
                    stop_phrases.push(phrase_key(surface));
                }
                "START" => start_phrases.push(phrase_key(surface)),
                "WORD" => {
                    ignore_words.insert(surface.to_lowercase());
                }
                _ => return Err(bad_label("ignore.tsv", line, label)),
            }
        }

        let mut negations = HashSet::new();
        for row in rows("negations.tsv", &src.negations) {
            let (_, surface, _) = row?;
            negations.extend(phrase_key(surface));
        }

        let mut templates = BTreeMap::new();
        for row in rows("categories.tsv", &src.categories) {
            let (line, surface, label) = row?;
            let category: ActionCategory = surface
                .parse()
                .map_err(|_| bad_label("categories.tsv", line, surface))?;
            let (verb, connector) = label.split_once('|').unwrap_or((label, ""));
            templates.insert(
                category,
                Template {
                    verb: verb.trim().to_string(),
                    connector: connector.trim().to_string(),
                },
            );
        }
        if let Some(missing) = ActionCategory::ALL.iter().find(|c| !templates.contains_key(c)) {
            return Err(Error::Lexicon {
                file: "categories.tsv".into(),
                line: 0,
                message: format!("no template for category {missing}"),
            });
        }

        Ok(Self {
            attitudes,
            actions,
            objects,
            conditions,
            ignore,
            ignore_words,
            stop_phrases,
            start_phrases,
            negations,
            rules,
            templates,
        })
    }

    /// Resolves an action sense against an object label (`None` for no
    /// object). The flag reports whether an object-specific rule fired.
    pub fn resolve_sense(&self, sense: &ActionSense, object: Option<&str>) -> Option<(ActionCategory, bool)> {
        match sense {
            ActionSense::Direct(c) => Some((*c, false)),
            ActionSense::Generic(name) => {
                if let Some(obj) = object {
                    if let Some(c) = self.rules.get(&(name.clone(), obj.to_string())) {
                        return Some((*c, true));
                    }
                }
                self.rules.get(&(name.clone(), "*".to_string())).map(|c| (*c, false))
            }
        }
    }

    /// The operative terms of `text`: after the first line opening with a
    /// start phrase, if any, and before the next line opening with a stop
    /// phrase.
    pub fn operative_part<'a>(&self, text: &'a str) -> &'a str {
        let opens = |line: &str, phrases: &[Vec<String>]| {
            let key = phrase_key(line);
            phrases.iter().any(|p| key.starts_with(p))
        };
        let mut offset = 0;
        let mut start = 0;
        let mut started = false;
        for line in text.split_inclusive('\n') {
            if !started && opens(line, &self.start_phrases) {
                started = true;
                start = offset + line.len();
            } else if opens(line, &self.stop_phrases) {
                return &text[start..offset];
            }
            offset += line.len();
        }
        &text[start..]
    }
}
