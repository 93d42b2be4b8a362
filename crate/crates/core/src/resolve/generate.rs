//! Template-based custom license text.

use std::collections::BTreeMap;

use crate::action::DEFAULT_OBJECT;
use crate::attitude::Attitude;
use crate::extract::Lexicon;
use crate::matrix::GroupKey;
use crate::resolve::{ConflictGroup, ConstraintSet};

pub const EXCEPTIONS_HEADING: &str = "EXCEPTIONS";

const TITLE: &str = "Custom License";
const PREAMBLE: &str = "The following terms apply to this software and to every copy of it.";
const DISCLAIMER: &str = "THE SOFTWARE IS PROVIDED AS IS, WITHOUT WARRANTY OF ANY KIND.";

/// Words that open a condition on their own; other conditions get `if you`.
const CONDITION_MARKERS: &[&str] = &[
    "if ",
    "as long as ",
    "provided that ",
    "on condition that ",
    "unless ",
    "when ",
    "where ",
];
/// Openers of a condition that already has its own subject.
const SUBJECT_OPENERS: &[&str] = &[
    "any", "the", "a", "an", "this", "that", "these", "those", "such", "it", "its", "all", "each", "no", "your",
    "there",
];

#[derive(Debug, Clone, Default)]
pub struct CustomOptions {
    /// Attitude to use for a group instead of the most restrictive one;
    /// values outside the interval are clamped into it.
    pub overrides: BTreeMap<GroupKey, Attitude>,
    /// Constraining licenses named in the header, e.g. `/db.py::pymongo (Apache-2.0)`.
    pub provenance: Vec<String>,
}

struct Clause {
    attitude: Attitude,
    verbs: Vec<String>,
    connector: String,
    object: String,
    condition: Option<String>,
}

fn attitude_phrase(a: Attitude) -> &'static str {
    match a {
        Attitude::Can => "can",
        Attitude::Must => "must",
        Attitude::Cannot => "must not",
    }
}

fn object_phrase(object: &str, direct: bool) -> String {
    match (object, direct) {
        (DEFAULT_OBJECT, true) => "copies of the software".to_string(),
        (DEFAULT_OBJECT, false) => "the software".to_string(),
        (o, _) => o.to_string(),
    }
}

fn condition_phrase(condition: &str) -> String {
    let c = condition.trim();
    let lower = c.to_lowercase();
    if CONDITION_MARKERS.iter().any(|m| lower.starts_with(m)) {
        return c.to_string();
    }
    let first = lower.split_whitespace().next().unwrap_or("");
    if first == "you" || SUBJECT_OPENERS.contains(&first) {
        format!("if {c}")
    } else {
        format!("if you {c}")
    }
}

fn verb_list(verbs: &[String]) -> String {
    match verbs {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

impl Clause {
    fn render(&self) -> String {
        let mut s = format!("You {} {}", attitude_phrase(self.attitude), verb_list(&self.verbs));
        let direct = self.connector.is_empty();
        if !direct {
            s.push(' ');
            s.push_str(&self.connector);
        }
        s.push(' ');
        s.push_str(&object_phrase(&self.object, direct));
        if let Some(c) = &self.condition {
            s.push(' ');
            s.push_str(&condition_phrase(c));
        }
        s.push('.');
        s
    }
}

fn template(lexicon: &Lexicon, group: &GroupKey) -> (String, String) {
    lexicon
        .templates
        .get(&group.action)
        .map(|t| (t.verb.clone(), t.connector.clone()))
        .unwrap_or_else(|| (group.action.as_str().to_lowercase(), String::new()))
}

/// Custom license with the most restrictive attitude of every interval.
pub fn generate_custom(constraints: &ConstraintSet) -> String {
    generate_custom_with(constraints, &CustomOptions::default())
}

/// Custom license text: a header naming the constraining licenses, one
/// clause per group, and a warranty disclaimer. Direct-object clauses
/// sharing attitude and object are merged into one sentence. Conditions
/// are kept on permissions only; an obligation or prohibition is stated
/// unconditionally so it also covers the conditional case.
pub fn generate_custom_with(constraints: &ConstraintSet, opts: &CustomOptions) -> String {
    let lexicon = Lexicon::shared();
    let mut clauses: Vec<Clause> = Vec::new();
    for (group, iv) in &constraints.intervals {
        let attitude = opts
            .overrides
            .get(group)
            .map_or(iv.upper, |&a| a.clamp(iv.lower, iv.upper));
        let condition = (attitude == Attitude::Can).then(|| iv.condition.clone()).flatten();
        let (verb, connector) = template(lexicon, group);
        let mergeable = connector.is_empty() && condition.is_none();
        if mergeable {
            if let Some(c) = clauses.iter_mut().find(|c| {
                c.connector.is_empty() && c.condition.is_none() && c.attitude == attitude && c.object == group.object
            }) {
                c.verbs.push(verb);
                continue;
            }
        }
        clauses.push(Clause {
            attitude,
            verbs: vec![verb],
            connector,
            object: group.object.clone(),
            condition,
        });
    }

    let mut out = format!("{TITLE}\n\n# Generated by licentia {}.\n", env!("CARGO_PKG_VERSION"));
    if !opts.provenance.is_empty() {
        out.push_str(&format!("# Constrained by: {}.\n", opts.provenance.join("; ")));
    }
    out.push('\n');
    out.push_str(PREAMBLE);
    out.push_str("\n\n");
    for c in &clauses {
        out.push_str(&c.render());
        out.push_str("\n\n");
    }
    out.push_str(DISCLAIMER);
    out.push('\n');
    out
}

/// Appends scoped clauses for groups on which children disagree, one per
/// child scope, ordered by scope.
pub fn attach_exception(_constraints: &ConstraintSet, custom_text: &str, conflicts: &[ConflictGroup]) -> String {
    if conflicts.is_empty() {
        return custom_text.to_string();
    }
    let lexicon = Lexicon::shared();
    let mut scoped: Vec<(&str, &GroupKey, Attitude)> = conflicts
        .iter()
        .flat_map(|c| c.scopes.iter().map(move |s| (s.scope.as_str(), &c.group, s.attitude)))
        .collect();
    scoped.sort();

    let mut out = custom_text.trim_end().to_string();
    out.push_str("\n\n");
    out.push_str(EXCEPTIONS_HEADING);
    out.push_str("\n\n");
    for (scope, group, attitude) in scoped {
        let (verb, connector) = template(lexicon, group);
        let mut line = format!("For files under {scope} you {} {verb}", attitude_phrase(attitude));
        if group.object != DEFAULT_OBJECT {
            if !connector.is_empty() {
                line.push(' ');
                line.push_str(&connector);
            }
            line.push(' ');
            line.push_str(&group.object);
        }
        line.push_str(".\n");
        out.push_str(&line);
    }
    out
}
