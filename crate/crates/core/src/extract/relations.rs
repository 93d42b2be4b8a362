//! Positional relation extraction between tagged entities.
//!
//! A sentence is cut into clauses at `,` `;` `:` and parentheses, and a
//! condition marker always opens a clause of its own. Actions joined only
//! by commas and conjunctions form a coordination chain; the chain shares
//! one attitude and one object even when commas separate its members.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::extract::entities::{Entity, EntityKind};
use crate::extract::lexicon::{ActionSense, Lexicon};
use crate::extract::preprocess::Sentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationLabel {
    ActionObject,
    ActionAttitude,
    ActionCondition,
    ConditionAction,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityRelation {
    pub head: Entity,
    pub tail: Entity,
    pub label: RelationLabel,
}

const CLAUSE_BREAKS: [&str; 5] = [",", ";", ":", "(", ")"];
const SECTION_BREAKS: [&str; 2] = [";", ":"];
const COORDINATORS: [&str; 6] = [",", "and", "or", "/", "nor", "&"];
const DETERMINERS: [&str; 14] = [
    "the", "this", "that", "these", "those", "all", "any", "a", "an", "its", "such", "their", "your", "other",
];

/// Index-based relation structure of one sentence; indices refer to
/// `entities`.
#[derive(Debug, Clone, Default)]
pub struct Structure {
    pub entities: Vec<Entity>,
    pub clause_of: Vec<usize>,
    pub section_of: Vec<usize>,
    /// Condition entity owning each clause, if the clause is conditional.
    pub clause_condition: BTreeMap<usize, usize>,
    pub attitude_of: BTreeMap<usize, usize>,
    pub objects_of: BTreeMap<usize, Vec<usize>>,
    pub condition_of: BTreeMap<usize, usize>,
    pub condition_actions: BTreeMap<usize, Vec<usize>>,
    /// Attitudes preceded by a negation word inside their clause.
    pub negated: BTreeSet<usize>,
    /// Actions inside a relative clause ("works that you distribute");
    /// they describe rather than regulate.
    pub relative: BTreeSet<usize>,
}

impl Structure {
    pub fn in_condition_clause(&self, idx: usize) -> bool {
        self.clause_condition.contains_key(&self.clause_of[idx])
    }

    pub fn actions(&self) -> impl Iterator<Item = usize> + '_ {
        self.kind_indices(EntityKind::Action)
    }

    fn kind_indices(&self, kind: EntityKind) -> impl Iterator<Item = usize> + '_ {
        self.entities
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.kind == kind)
            .map(|(i, _)| i)
    }
}

fn gap_is(sentence: &Sentence, from: usize, to: usize, allowed: &[&[&str]]) -> bool {
    sentence.tokens[from..to].iter().all(|t| {
        let word = t.text.to_lowercase();
        allowed.iter().any(|set| set.contains(&word.as_str()))
    })
}

/// Builds the relation structure of a sentence from its entities.
pub fn analyze(lexicon: &Lexicon, entities: &[Entity], sentence: &Sentence) -> Structure {
    let n_tokens = sentence.tokens.len();
    let condition_starts: BTreeMap<usize, usize> = entities
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind == EntityKind::Condition)
        .map(|(i, e)| (e.start(), i))
        .collect();

    let mut clause_at = vec![0usize; n_tokens];
    let mut section_at = vec![0usize; n_tokens];
    let mut clause_condition = BTreeMap::new();
    let (mut clause, mut section) = (0usize, 0usize);
    for (t, tok) in sentence.tokens.iter().enumerate() {
        if CLAUSE_BREAKS.contains(&tok.text.as_str()) {
            clause += 1;
        }
        if SECTION_BREAKS.contains(&tok.text.as_str()) {
            section += 1;
        }
        if let Some(&cond) = condition_starts.get(&t) {
            clause += 1;
            clause_condition.insert(clause, cond);
        }
        clause_at[t] = clause;
        section_at[t] = section;
    }
    // "if A, B, then C": every clause up to "then" belongs to the condition.
    let mut open: Option<(usize, usize)> = None;
    for (t, tok) in sentence.tokens.iter().enumerate() {
        if let Some(&cond) = clause_condition.get(&clause_at[t]) {
            if condition_starts.get(&t) == Some(&cond) {
                open = Some((cond, section_at[t]));
            }
        } else if tok.text.eq_ignore_ascii_case("then") {
            open = None;
        }
        if let Some((cond, sec)) = open {
            if sec != section_at[t] {
                open = None;
            } else if !clause_condition.contains_key(&clause_at[t]) && has_then(sentence, t, &clause_at, &section_at) {
                clause_condition.insert(clause_at[t], cond);
            }
        }
    }

    let clause_of: Vec<usize> = entities.iter().map(|e| clause_at[e.start()]).collect();
    let section_of: Vec<usize> = entities.iter().map(|e| section_at[e.start()]).collect();
    let mut st = Structure {
        entities: entities.to_vec(),
        clause_of,
        section_of,
        clause_condition,
        ..Structure::default()
    };

    // A fronted negative ("in no event shall ...") scopes over the whole
    // sentence; otherwise a negator only reaches forward inside its clause.
    let fronted = entities.first().is_some_and(|e| {
        e.kind == EntityKind::Attitude
            && e.label == "CANNOT"
            && sentence.tokens[..e.start()].iter().all(|t| !t.is_word)
            && sentence.tokens[e.start()..e.end()]
                .iter()
                .any(|t| lexicon.negations.contains(&t.stem))
    });
    let markers: Vec<(usize, usize)> = entities
        .iter()
        .filter(|e| e.kind == EntityKind::Condition)
        .map(|e| e.token_span)
        .collect();
    for (i, e) in entities.iter().enumerate() {
        if e.kind == EntityKind::Attitude {
            let negated = fronted
                || (0..e.start())
                    .rev()
                    .take_while(|t| clause_at[*t] == st.clause_of[i])
                    .any(|t| lexicon.negations.contains(&sentence.tokens[t].stem));
            if negated {
                st.negated.insert(i);
            }
        }
        if e.kind == EntityKind::Action && is_relative(sentence, e.start(), true, &markers) {
            st.relative.insert(i);
        }
    }

    let chains = chains_of(&st, sentence, EntityKind::Action, &[&COORDINATORS]);
    let object_chains = chains_of(&st, sentence, EntityKind::Object, &[&COORDINATORS, &DETERMINERS]);

    for chain in &chains {
        // One relative verb, or a relative modal ("who may modify"), makes
        // the whole chain descriptive.
        let attitude = nearest_attitude(&st, chain);
        let relative_modal =
            attitude.is_some_and(|t| t < chain[0] && is_relative(sentence, st.entities[t].start(), false, &markers));
        if relative_modal || chain.iter().any(|a| st.relative.contains(a)) {
            st.relative.extend(chain.iter().copied());
            continue;
        }
        if let Some(att) = attitude {
            for &a in chain.iter().filter(|a| !st.relative.contains(a)) {
                if participle_accepts(sentence, &st.entities[att], &st.entities[a]) {
                    st.attitude_of.insert(a, att);
                }
            }
        }
        let following = following_objects(lexicon, &st, chain, &object_chains);
        let preceding = preceding_objects(lexicon, &st, chain, &object_chains);
        for &a in chain {
            let chosen = choose_objects(lexicon, &st.entities, a, &following, &preceding);
            if !chosen.is_empty() {
                st.objects_of.insert(a, chosen);
            }
        }
    }

    link_conditions(&mut st);
    st
}

/// Groups entities of `kind` into runs separated only by `allowed` tokens
/// and lying in clauses of the same conditional status.
fn chains_of(st: &Structure, sentence: &Sentence, kind: EntityKind, allowed: &[&[&str]]) -> Vec<Vec<usize>> {
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut prev: Option<usize> = None;
    for (i, e) in st.entities.iter().enumerate() {
        if e.kind != kind {
            continue;
        }
        let joins = prev.is_some_and(|p| {
            let pe = &st.entities[p];
            st.in_condition_clause(p) == st.in_condition_clause(i)
                && st.section_of[p] == st.section_of[i]
                && (i == p + 1)
                && gap_is(sentence, pe.end(), e.start(), allowed)
        });
        if joins {
            chains.last_mut().expect("chain exists").push(i);
        } else {
            chains.push(vec![i]);
        }
        prev = Some(i);
    }
    chains
}

/// Verbs of relative clauses ("works that you do not convey", "a party
/// who modifies") describe their noun rather than regulate.
fn is_relative(sentence: &Sentence, start: usize, allow_that: bool, markers: &[(usize, usize)]) -> bool {
    const FILLERS: [&str; 5] = ["do", "does", "not", "also", "otherwise"];
    let pronouns: &[&str] = if allow_that {
        &["that", "which", "who"]
    } else {
        &["which", "who"]
    };
    let mut i = start;
    let mut prev = || {
        while i > 0 {
            i -= 1;
            let w = sentence.tokens[i].text.to_lowercase();
            if !FILLERS.contains(&w.as_str()) {
                // "that" closing a condition marker ("provided that") is no
                // relative pronoun.
                if markers.iter().any(|&(s, e)| s <= i && i < e) {
                    return String::new();
                }
                return w;
            }
        }
        String::new()
    };
    let first = prev();
    if pronouns.contains(&first.as_str()) {
        return true;
    }
    first == "you" && pronouns.contains(&prev().as_str())
}

/// A single-word participle or gerund takes an attitude only when nothing
/// but auxiliaries separates the two ("shall be included", "sublicensing
/// is not allowed").
fn participle_accepts(sentence: &Sentence, attitude: &Entity, action: &Entity) -> bool {
    const AUX: [&str; 7] = ["be", "been", "is", "not", "also", "only", "freely"];
    let word = action.text.to_lowercase();
    if word.contains(' ') || !(word.ends_with("ed") || word.ends_with("ing")) {
        return true;
    }
    let gap = if attitude.end() <= action.start() {
        attitude.end()..action.start()
    } else {
        action.end()..attitude.start()
    };
    sentence.tokens[gap]
        .iter()
        .all(|t| AUX.contains(&t.text.to_lowercase().as_str()))
}

/// Whether a "then" opens a later clause of the same section.
fn has_then(sentence: &Sentence, from: usize, clause_at: &[usize], section_at: &[usize]) -> bool {
    (from..sentence.tokens.len())
        .take_while(|&t| section_at[t] == section_at[from])
        .any(|t| clause_at[t] != clause_at[from] && sentence.tokens[t].text.eq_ignore_ascii_case("then"))
}

fn distance(a: &Entity, b: &Entity) -> usize {
    if a.end() <= b.start() {
        b.start() - a.end()
    } else {
        a.start().saturating_sub(b.end())
    }
}

/// Nearest attitude sharing a clause with the chain. An attitude after the
/// chain is skipped when another action follows it in that clause, since
/// it then governs that later action ("works that you distribute must
/// include").
fn nearest_attitude(st: &Structure, chain: &[usize]) -> Option<usize> {
    let clauses: BTreeSet<usize> = chain.iter().map(|&a| st.clause_of[a]).collect();
    let last = *chain.last().expect("non-empty chain");
    st.kind_indices(EntityKind::Attitude)
        .filter(|&t| clauses.contains(&st.clause_of[t]))
        .filter(|&t| {
            t < chain[0]
                || !st.entities.iter().enumerate().skip(t + 1).any(|(j, e)| {
                    e.kind == EntityKind::Action
                        && !chain.contains(&j)
                        && st.clause_of[j] == st.clause_of[t]
                        && j > last
                })
        })
        .min_by_key(|&t| {
            let d = chain
                .iter()
                .map(|&a| distance(&st.entities[a], &st.entities[t]))
                .min()
                .unwrap_or(usize::MAX);
            (d, t > chain[0])
        })
}

fn object_chain_containing(object_chains: &[Vec<usize>], idx: usize) -> Vec<usize> {
    object_chains
        .iter()
        .find(|c| c.contains(&idx))
        .cloned()
        .unwrap_or_else(|| vec![idx])
}

/// First object chain after the action chain, before any other action.
/// Verbs whose category depends on the object may look past their own
/// clause into the rest of the section ("offer, and charge a fee for,
/// acceptance of warranty").
fn following_objects(lexicon: &Lexicon, st: &Structure, chain: &[usize], object_chains: &[Vec<usize>]) -> Vec<usize> {
    let last = *chain.last().expect("non-empty chain");
    let generic = chain.iter().any(|&a| st.entities[a].label.starts_with('@'));
    let mut first: Option<Vec<usize>> = None;
    let mut j = last + 1;
    while j < st.entities.len() {
        let e = &st.entities[j];
        if generic
            && !st.in_condition_clause(last)
            && st.in_condition_clause(j)
            && st.clause_of[j] != st.clause_of[last]
        {
            // Parenthetical conditions do not end the verb's phrase.
            j += 1;
            continue;
        }
        // A generic verb still looking for its cue reads past relative
        // clauses ("retain, in the form that you distribute, all notices").
        if generic && first.is_some() && e.kind == EntityKind::Action && st.relative.contains(&j) {
            j += 1;
            continue;
        }
        if (!generic && st.clause_of[j] != st.clause_of[last])
            || st.section_of[j] != st.section_of[last]
            || st.in_condition_clause(j) != st.in_condition_clause(last)
            || matches!(
                e.kind,
                EntityKind::Action | EntityKind::Condition | EntityKind::Attitude
            )
        {
            break;
        }
        if e.kind == EntityKind::Object {
            let objects = object_chain_containing(object_chains, j);
            if !generic || chain.iter().any(|&a| is_specific(lexicon, &st.entities, a, &objects)) {
                return objects;
            }
            j = objects.last().map_or(j, |&o| o) + 1;
            first.get_or_insert(objects);
            continue;
        }
        j += 1;
    }
    first.unwrap_or_default()
}

/// Objects before the chain count in passive form, where an attitude sits
/// between them and the verb ("the notice shall be included"). Without an
/// attitude only verbs whose subject is the thing acted on take it ("the
/// notice appear in all copies").
fn preceding_objects(lexicon: &Lexicon, st: &Structure, chain: &[usize], object_chains: &[Vec<usize>]) -> Vec<usize> {
    let first = chain[0];
    let mut saw_attitude = false;
    for j in (0..first).rev() {
        let e = &st.entities[j];
        if st.clause_of[j] != st.clause_of[first] || e.kind == EntityKind::Action || e.kind == EntityKind::Condition {
            break;
        }
        match e.kind {
            EntityKind::Attitude => saw_attitude = true,
            EntityKind::Object => {
                let objects = object_chain_containing(object_chains, j);
                let subject_verb = chain
                    .iter()
                    .any(|&a| SUBJECT_SENSES.contains(&st.entities[a].label.as_str()));
                if saw_attitude
                    || (subject_verb && chain.iter().any(|&a| is_specific(lexicon, &st.entities, a, &objects)))
                {
                    return objects;
                }
                return Vec::new();
            }
            _ => {}
        }
    }
    Vec::new()
}

const SUBJECT_SENSES: &[&str] = &["@appear"];

fn is_specific(lexicon: &Lexicon, entities: &[Entity], action: usize, objects: &[usize]) -> bool {
    let Some(sense) = entities[action].label.strip_prefix('@') else {
        return false;
    };
    let sense = ActionSense::Generic(sense.to_string());
    objects.iter().any(|&o| {
        lexicon
            .resolve_sense(&sense, Some(&entities[o].label))
            .is_some_and(|(_, s)| s)
    })
}

/// The following object chain wins unless only the preceding one selects
/// an object-specific rule for a generic verb, as in passive clauses.
fn choose_objects(
    lexicon: &Lexicon,
    entities: &[Entity],
    action: usize,
    following: &[usize],
    preceding: &[usize],
) -> Vec<usize> {
    if following.is_empty()
        || (!is_specific(lexicon, entities, action, following) && is_specific(lexicon, entities, action, preceding))
    {
        preceding.to_vec()
    } else {
        following.to_vec()
    }
}

fn link_conditions(st: &mut Structure) {
    let conditions: Vec<usize> = st.kind_indices(EntityKind::Condition).collect();
    for c in conditions {
        let clause = st.clause_of[c];
        let inner: Vec<usize> = st.actions().filter(|&a| st.clause_of[a] == clause).collect();
        if inner.is_empty() {
            continue;
        }
        st.condition_actions.insert(c, inner);
        let section = st.section_of[c];
        let main = |a: &usize| !st.in_condition_clause(*a) && st.section_of[*a] == section;
        let before: Vec<usize> = st.actions().filter(|a| main(a) && *a < c).collect();
        let targets = if before.is_empty() {
            let next_cond = st
                .kind_indices(EntityKind::Condition)
                .find(|&o| o > c)
                .unwrap_or(usize::MAX);
            st.actions().filter(|a| main(a) && *a > c && *a < next_cond).collect()
        } else {
            before
        };
        for a in targets {
            st.condition_of.entry(a).or_insert(c);
        }
    }
}

/// Typed relations of a sentence; candidate (action, entity) pairs sharing
/// a clause that have no typed relation are labelled `Other`.
pub fn extract_relations(lexicon: &Lexicon, entities: &[Entity], sentence: &Sentence) -> Vec<EntityRelation> {
    let st = analyze(lexicon, entities, sentence);
    relations_of(&st)
}

pub fn relations_of(st: &Structure) -> Vec<EntityRelation> {
    let mut typed: BTreeSet<(usize, usize, RelationLabel)> = BTreeSet::new();
    for (&a, &t) in &st.attitude_of {
        typed.insert((a, t, RelationLabel::ActionAttitude));
    }
    for (&a, objs) in &st.objects_of {
        for &o in objs {
            typed.insert((a, o, RelationLabel::ActionObject));
        }
    }
    for (&a, &c) in &st.condition_of {
        typed.insert((a, c, RelationLabel::ActionCondition));
    }
    for (&c, acts) in &st.condition_actions {
        for &a in acts {
            typed.insert((c, a, RelationLabel::ConditionAction));
        }
    }
    let related: BTreeSet<(usize, usize)> = typed.iter().flat_map(|&(h, t, _)| [(h, t), (t, h)]).collect();
    let mut all = typed.clone();
    for a in st.actions() {
        for (j, e) in st.entities.iter().enumerate() {
            if j == a || e.kind == EntityKind::Action || st.clause_of[j] != st.clause_of[a] {
                continue;
            }
            if !related.contains(&(a, j)) {
                all.insert((a, j, RelationLabel::Other));
            }
        }
    }
    all.into_iter()
        .map(|(h, t, label)| EntityRelation {
            head: st.entities[h].clone(),
            tail: st.entities[t].clone(),
            label,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::entities::extract_entities;

    fn relations(text: &str) -> Vec<(String, String, RelationLabel)> {
        let lex = Lexicon::bundled();
        let sentence = Sentence::from_text(0, text);
        let entities = extract_entities(&lex, &sentence);
        extract_relations(&lex, &entities, &sentence)
            .into_iter()
            .map(|r| (r.head.text, r.tail.text, r.label))
            .collect()
    }

    #[test]
    fn simple_grant_links_object_and_attitude() {
        let got = relations("you can distribute the software");
        assert_eq!(
            got,
            vec![
                ("distribute".into(), "you can".into(), RelationLabel::ActionAttitude),
                ("distribute".into(), "software".into(), RelationLabel::ActionObject),
            ]
        );
    }

    #[test]
    fn condition_links_both_ways() {
        let got = relations("you can distribute the software provide that you must disclose source code");
        assert!(got.contains(&(
            "distribute".into(),
            "provide that".into(),
            RelationLabel::ActionCondition
        )));
        assert!(got.contains(&("provide that".into(), "disclose".into(), RelationLabel::ConditionAction)));
        assert!(got.contains(&("disclose".into(), "must".into(), RelationLabel::ActionAttitude)));
        assert!(got.contains(&("disclose".into(), "source code".into(), RelationLabel::ActionObject)));
        assert!(!got.contains(&("distribute".into(), "must".into(), RelationLabel::ActionAttitude)));
    }

    #[test]
    fn lone_action_has_no_relations() {
        assert!(relations("distribute").is_empty());
    }

    #[test]
    fn labels_agree_with_kinds() {
        let lex = Lexicon::bundled();
        let sentence = Sentence::from_text(
            0,
            "you may copy, modify and distribute the software, provided that you include the copyright notice",
        );
        let entities = extract_entities(&lex, &sentence);
        for r in extract_relations(&lex, &entities, &sentence) {
            let kinds = (r.head.kind, r.tail.kind);
            match r.label {
                RelationLabel::ActionObject => assert_eq!(kinds, (EntityKind::Action, EntityKind::Object)),
                RelationLabel::ActionAttitude => assert_eq!(kinds, (EntityKind::Action, EntityKind::Attitude)),
                RelationLabel::ActionCondition => assert_eq!(kinds, (EntityKind::Action, EntityKind::Condition)),
                RelationLabel::ConditionAction => assert_eq!(kinds, (EntityKind::Condition, EntityKind::Action)),
                RelationLabel::Other => assert_eq!(r.head.kind, EntityKind::Action),
            }
        }
    }

    #[test]
    fn coordination_chain_shares_attitude_across_commas() {
        let lex = Lexicon::bundled();
        let sentence = Sentence::from_text(0, "you may copy, modify, and distribute the software");
        let entities = extract_entities(&lex, &sentence);
        let st = analyze(&lex, &entities, &sentence);
        let actions: Vec<usize> = st.actions().collect();
        assert_eq!(actions.len(), 3);
        for a in actions {
            assert!(st.attitude_of.contains_key(&a));
            assert!(st.objects_of.contains_key(&a));
        }
    }

    #[test]
    fn relative_clause_verbs_are_descriptive() {
        let lex = Lexicon::bundled();
        let sentence = Sentence::from_text(0, "works that you distribute must include the notices");
        let entities = extract_entities(&lex, &sentence);
        let st = analyze(&lex, &entities, &sentence);
        let distribute = st.actions().next().unwrap();
        assert!(st.relative.contains(&distribute));
        assert!(!st.attitude_of.contains_key(&distribute));
    }
}
