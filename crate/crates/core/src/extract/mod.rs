//! License text interpretation: preprocessing, entity tagging, relation
//! extraction and normalization into a [`TermMatrix`].

pub mod entities;
pub mod lexicon;
pub mod normalize;
pub mod preprocess;
pub mod relations;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use entities::{extract_entities, Entity, EntityKind};
pub use lexicon::{Lexicon, LexiconSources};
pub use normalize::{classify_action, normalize_attitude};
pub use preprocess::{preprocess, Sentence};
pub use relations::{extract_relations, EntityRelation, RelationLabel};

use crate::action::{is_qualifier, ActionCategory, DEFAULT_OBJECT};
use crate::attitude::Attitude;
use crate::matrix::{Regulation, TermMatrix};
use relations::Structure;

/// Result of reading one license text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    pub matrix: TermMatrix,
    pub regulations: Vec<Regulation>,
    pub warnings: Vec<String>,
}

/// Anything that turns license text into regulations. The bundled
/// implementation is lexicon driven; a learned model can stand in.
pub trait Extractor: Send + Sync {
    fn interpret(&self, text: &str, license_id: &str) -> Interpretation;
}

/// Deterministic extractor over a [`Lexicon`].
#[derive(Debug, Clone)]
pub struct LexiconExtractor {
    lexicon: Lexicon,
}

impl Default for LexiconExtractor {
    fn default() -> Self {
        Self::new(Lexicon::bundled())
    }
}

impl LexiconExtractor {
    pub fn new(lexicon: Lexicon) -> Self {
        Self { lexicon }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    fn sentence_regulations(&self, sentence: &Sentence, warnings: &mut Vec<String>) -> Vec<Regulation> {
        let entities = extract_entities(&self.lexicon, sentence);
        if entities.is_empty() {
            return Vec::new();
        }
        let st = relations::analyze(&self.lexicon, &entities, sentence);

        let attitude_of = |t: usize| normalize_attitude(&st.entities[t], st.negated.contains(&t));
        let dominant: BTreeSet<Attitude> = st
            .entities
            .iter()
            .enumerate()
            .filter(|(i, e)| e.kind == EntityKind::Attitude && !st.in_condition_clause(*i))
            .filter_map(|(i, _)| attitude_of(i))
            .collect();

        // First pass: the attitude each action carries on its own or by
        // the dominant-attitude fallback.
        let mut attitudes: Vec<(usize, Option<Attitude>, bool)> = Vec::new();
        for a in st.actions() {
            let in_condition = st.in_condition_clause(a);
            // A hypothesis ("if you cannot convey ...") never imposes terms
            // of its own, whatever attitude it carries.
            if in_condition && self.hypothetical(&st, a) {
                continue;
            }
            let own = st.attitude_of.contains_key(&a);
            let attitude = match st.attitude_of.get(&a) {
                Some(&t) => match attitude_of(t) {
                    Some(att) => Some(att),
                    None => {
                        warnings.push(format!(
                            "sentence {}: unknown attitude `{}`",
                            sentence.index, st.entities[t].text
                        ));
                        continue;
                    }
                },
                None if in_condition => None,
                None if dominant.len() == 1 && !st.relative.contains(&a) && is_base_form(&st.entities[a]) => {
                    dominant.iter().next().copied()
                }
                None => {
                    warnings.push(format!(
                        "sentence {}: no attitude for action `{}`",
                        sentence.index, st.entities[a].text
                    ));
                    continue;
                }
            };
            attitudes.push((a, attitude, own));
        }

        // A grant made "provided that" something happens turns that
        // something into a duty of the licensee.
        let duties: BTreeSet<usize> = st
            .condition_actions
            .keys()
            .copied()
            .filter(|&c| DUTY_MARKERS.contains(&st.entities[c].label.as_str()))
            .filter(|&c| {
                attitudes
                    .iter()
                    .any(|&(a, att, _)| st.condition_of.get(&a) == Some(&c) && att == Some(Attitude::Can))
            })
            .collect();
        // Items listed after such a condition without an attitude of their
        // own ("provided that you publish ...; keep intact ...; and give
        // ...") are duties as well.
        let duty_of = |a: usize, own: bool| {
            st.clause_condition
                .get(&st.clause_of[a])
                .is_some_and(|c| duties.contains(c))
                || (!own && duties.iter().any(|&c| c < a))
        } && is_base_form(&st.entities[a]);

        let mut out = Vec::new();
        for (a, attitude, own) in attitudes {
            let duty = duty_of(a, own);
            let attitude = match attitude {
                Some(_) if duty && !own => Attitude::Must,
                Some(att) => att,
                None if duty => Attitude::Must,
                // Actions inside a condition clause without their own
                // attitude only describe the condition.
                None => continue,
            };
            let condition = st
                .condition_of
                .get(&a)
                .filter(|c| !duties.contains(c) && !duty)
                .map(|&c| condition_text(sentence, &st, c));
            let pairs = self.categorize(&st, a);
            if pairs.is_empty() {
                warnings.push(format!(
                    "sentence {}: cannot classify action `{}`",
                    sentence.index, st.entities[a].text
                ));
            }
            for (action, object) in pairs {
                out.push(Regulation {
                    action,
                    object,
                    attitude,
                    condition: condition.clone(),
                    provenance: sentence.index,
                });
            }
        }
        out
    }

    fn hypothetical(&self, st: &Structure, a: usize) -> bool {
        st.clause_condition
            .get(&st.clause_of[a])
            .is_some_and(|&c| st.entities[c].label == "if")
    }

    /// (category, qualifier) pairs read from one action and its objects.
    fn categorize(&self, st: &Structure, a: usize) -> Vec<(ActionCategory, String)> {
        let action = &st.entities[a];
        let objects: &[usize] = st.objects_of.get(&a).map(Vec::as_slice).unwrap_or(&[]);
        let mut out: Vec<(ActionCategory, String)> = Vec::new();
        let mut push = |pair: (ActionCategory, String)| {
            if !out.contains(&pair) {
                out.push(pair);
            }
        };
        if objects.is_empty() {
            if let Some(c) = classify_action(&self.lexicon, action, None) {
                push((c, DEFAULT_OBJECT.to_string()));
            }
            return out;
        }
        for &o in objects {
            let label = st.entities[o].label.as_str();
            match normalize::classify_with_consumption(&self.lexicon, action, Some(label)) {
                // A consumed cue names the object only when it is a form of
                // the work ("disclose source code"), not when it names the
                // subject matter ("use trademarks").
                Some((c, true)) if !WORK_FORMS.contains(&label) => push((c, later_qualifier(st, o))),
                Some((c, _)) => push((c, normalize::qualifier_of(label).to_string())),
                None => {}
            }
        }
        out
    }
}

const WORK_FORMS: &[&str] = &["source code", "binaries", "documentation"];

/// Condition markers that attach duties to a grant, unlike hypotheses
/// ("if") and references ("subject to").
const DUTY_MARKERS: &[&str] = &["provided that", "as long as", "on condition that"];

/// Participles and gerunds without an attitude of their own describe
/// circumstances ("software distributed under ..."), so they never borrow
/// the sentence's attitude.
fn is_base_form(action: &Entity) -> bool {
    let first = action.text.split_whitespace().next().unwrap_or("").to_lowercase();
    !(first.ends_with("ed") || first.ends_with("ing"))
}

/// Qualifier supplied by a qualifier-type object later in the same clause,
/// once a cue object has been consumed by a rule.
fn later_qualifier(st: &Structure, consumed: usize) -> String {
    let clause = st.clause_of[consumed];
    st.entities
        .iter()
        .enumerate()
        .skip(consumed + 1)
        .take_while(|(j, _)| st.clause_of[*j] == clause)
        .find(|(_, e)| e.kind == EntityKind::Object && is_qualifier(&e.label))
        .map_or_else(|| DEFAULT_OBJECT.to_string(), |(_, e)| e.label.clone())
}

/// The clause following a condition marker, lowercased, without a leading
/// "you" and without trailing punctuation.
fn condition_text(sentence: &Sentence, st: &Structure, c: usize) -> String {
    let clause = st.clause_of[c];
    let start = st.entities[c].end();
    let mut end = start;
    while end < sentence.tokens.len() {
        let tok = &sentence.tokens[end];
        let next_clause = st
            .entities
            .iter()
            .enumerate()
            .any(|(j, e)| e.start() == end && st.clause_of[j] != clause);
        if next_clause || [",", ";", ":", "(", ")", "."].contains(&tok.text.as_str()) {
            break;
        }
        end += 1;
    }
    let mut from = start;
    if sentence
        .tokens
        .get(from)
        .is_some_and(|t| t.text.eq_ignore_ascii_case("you"))
    {
        from += 1;
    }
    sentence.span_text(from, end.max(from)).to_lowercase()
}

impl Extractor for LexiconExtractor {
    fn interpret(&self, text: &str, license_id: &str) -> Interpretation {
        let mut warnings = Vec::new();
        let mut regulations = Vec::new();
        for sentence in preprocess(self.lexicon.operative_part(text)) {
            regulations.extend(self.sentence_regulations(&sentence, &mut warnings));
        }
        Interpretation {
            matrix: TermMatrix::from_regulations(license_id, &regulations),
            regulations,
            warnings,
        }
    }
}

/// Interprets `text` with the bundled lexicon.
pub fn interpret(text: &str, license_id: &str) -> TermMatrix {
    static EXTRACTOR: std::sync::OnceLock<LexiconExtractor> = std::sync::OnceLock::new();
    EXTRACTOR
        .get_or_init(|| LexiconExtractor::new(Lexicon::shared().clone()))
        .interpret(text, license_id)
        .matrix
}
