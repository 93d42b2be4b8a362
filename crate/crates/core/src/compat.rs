//! Incompatibility detection over the license hierarchy and the copyright
//! holder matching that decides which licenses the project owner controls.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::action::{ActionCategory, DEFAULT_OBJECT};
use crate::attitude::Attitude;
use crate::error::{Error, Result};
use crate::matrix::{GroupKey, Stance, TermMatrix};
use crate::scan::{LicenseTree, NodeId, SourceKind};

/// A license in the tree: node plus position among the node's licenses.
pub type LicenseKey = (NodeId, usize);

/// Term matrices of every license in a tree.
pub type Interpreted = BTreeMap<LicenseKey, TermMatrix>;

/// Conditions beyond this count per group are explored one at a time
/// instead of exhaustively.
const MAX_EXHAUSTIVE_CONDITIONS: usize = 12;

/// A group on which a parent license is less restrictive than its child.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Conflict {
    pub group: GroupKey,
    /// `None` when the parent is silent, which reads as `CAN`.
    pub parent: Option<Stance>,
    pub child: Option<Stance>,
    /// The conflict needs some condition to hold.
    pub conditional: bool,
}

fn restrictiveness(s: Option<&Stance>) -> u8 {
    Attitude::effective(s.map(|s| s.attitude)).restrictiveness()
}

/// The stance a matrix takes on `group` in a world. A matrix without the
/// exact group falls back to its stance on the action for the whole work.
pub(crate) fn effective<'a>(m: &'a TermMatrix, group: &GroupKey, holds: &dyn Fn(&str) -> bool) -> Option<&'a Stance> {
    if m.stances(group).is_some() {
        return m.stance_in_world(group, holds);
    }
    m.stance_in_world(&GroupKey::work(group.action), holds)
}

fn group_conditions(m: &TermMatrix, group: &GroupKey, into: &mut BTreeSet<String>) {
    let key = if m.stances(group).is_some() {
        group.clone()
    } else {
        GroupKey::work(group.action)
    };
    into.extend(m.conditions(&key).map(str::to_string));
}

/// Truth assignments to try: every subset for few conditions, else none,
/// each single one, and all.
fn worlds(conditions: &[String]) -> Vec<BTreeSet<&str>> {
    let n = conditions.len();
    if n <= MAX_EXHAUSTIVE_CONDITIONS {
        (0u32..1 << n)
            .map(|mask| {
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| conditions[i].as_str())
                    .collect()
            })
            .collect()
    } else {
        let mut out = vec![BTreeSet::new()];
        out.extend(conditions.iter().map(|c| BTreeSet::from([c.as_str()])));
        out.push(conditions.iter().map(String::as_str).collect());
        out
    }
}

/// Groups on which `parent` is less restrictive than `child`. Each group
/// is compared in every combination of its conditions being true or
/// false; a conflict that needs some condition to hold is conditional.
pub fn check_pair(parent: &TermMatrix, child: &TermMatrix) -> Vec<Conflict> {
    let mut groups: BTreeSet<GroupKey> = parent.keys().chain(child.keys()).cloned().collect();
    let actions: BTreeSet<ActionCategory> = groups.iter().map(|g| g.action).collect();
    groups.extend(actions.into_iter().map(GroupKey::work));

    let mut out = Vec::new();
    for group in groups {
        let mut conds = BTreeSet::new();
        group_conditions(parent, &group, &mut conds);
        group_conditions(child, &group, &mut conds);
        let conds: Vec<String> = conds.into_iter().collect();
        let mut found: Option<Conflict> = None;
        for world in worlds(&conds) {
            let holds = |c: &str| world.contains(c);
            let p = effective(parent, &group, &holds);
            let c = effective(child, &group, &holds);
            if restrictiveness(p) < restrictiveness(c) {
                let conflict = Conflict {
                    group: group.clone(),
                    parent: p.cloned(),
                    child: c.cloned(),
                    conditional: !world.is_empty(),
                };
                // The first world is the one where no condition holds.
                let unconditional = !conflict.conditional;
                found.get_or_insert(conflict);
                if unconditional {
                    break;
                }
            }
        }
        out.extend(found);
    }
    out
}

/// Matrix with every action prohibited: a project without a license
/// reserves all rights.
pub fn all_rights_reserved() -> TermMatrix {
    ActionCategory::ALL
        .iter()
        .fold(TermMatrix::new("all-rights-reserved"), |m, &a| {
            m.with(GroupKey::new(a, DEFAULT_OBJECT), Stance::new(Attitude::Cannot))
        })
}

/// One license of a tree node, as shown in reports.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LicenseRef {
    #[serde(skip)]
    pub node: NodeId,
    /// Node label: scope path, with `::package` for referenced packages.
    pub path: String,
    /// License identifiers of the node joined by ` + `.
    pub license: String,
    /// Lines of an inline header.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueRelation {
    /// The child sits below the parent in the hierarchy.
    ParentChild,
    /// Two first-level licenses of a project without a project license,
    /// neither of which can govern the other.
    FirstLevelPair,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IncompatibilityIssue {
    pub parent_license: LicenseRef,
    pub child_license: LicenseRef,
    pub group: GroupKey,
    pub parent_attitude: Option<Stance>,
    pub child_attitude: Option<Stance>,
    pub conditional: bool,
    pub relation: IssueRelation,
}

impl IncompatibilityIssue {
    fn from_conflict(parent: LicenseRef, child: LicenseRef, c: Conflict, relation: IssueRelation) -> Self {
        Self {
            parent_license: parent,
            child_license: child,
            group: c.group,
            parent_attitude: c.parent,
            child_attitude: c.child,
            conditional: c.conditional,
            relation,
        }
    }

    fn sort_key(&self) -> (&str, &str, IssueRelation, &GroupKey) {
        (
            &self.child_license.path,
            &self.parent_license.path,
            self.relation,
            &self.group,
        )
    }
}

/// Union of the matrices of a node's licenses. Several licenses in one
/// scope supplement each other.
pub fn node_matrix(tree: &LicenseTree, interpreted: &Interpreted, node: NodeId) -> Result<TermMatrix> {
    let n = tree.node(node);
    let mut ids = Vec::new();
    let mut merged = TermMatrix::default();
    for (i, l) in n.licenses.iter().enumerate() {
        let m = interpreted.get(&(node, i)).ok_or_else(|| Error::Detection {
            license: l
                .spdx_hint
                .clone()
                .unwrap_or_else(|| format!("{:?} license", l.source.kind).to_lowercase()),
            path: l.source.path.clone(),
        })?;
        if !ids.contains(&m.license_id) {
            ids.push(m.license_id.clone());
        }
        merged.merge_from(m);
    }
    merged.license_id = ids.join(" + ");
    Ok(merged)
}

pub fn license_ref(tree: &LicenseTree, node: NodeId, matrix: &TermMatrix) -> LicenseRef {
    let n = tree.node(node);
    LicenseRef {
        node,
        path: n.label(),
        license: matrix.license_id.clone(),
        span: n
            .licenses
            .iter()
            .find_map(|l| (l.source.kind == SourceKind::Inline).then_some(l.source.span).flatten()),
    }
}

/// Matrix of every node, `None` for a root without licenses.
pub fn node_matrices(tree: &LicenseTree, interpreted: &Interpreted) -> Result<Vec<Option<TermMatrix>>> {
    (0..tree.len())
        .map(|id| {
            if tree.node(id).licenses.is_empty() {
                Ok(None)
            } else {
                node_matrix(tree, interpreted, id).map(Some)
            }
        })
        .collect()
}

/// Issues along every parent/child edge. Without a project license the
/// root is a virtual all-rights-reserved license, and first-level
/// licenses are compared pairwise instead: a pair is reported when neither
/// license could govern the other.
pub fn detect(tree: &LicenseTree, interpreted: &Interpreted) -> Result<Vec<IncompatibilityIssue>> {
    Ok(detect_matrices(tree, &node_matrices(tree, interpreted)?))
}

/// [`detect`] over node-level matrices, one per node of `tree`.
pub fn detect_matrices(tree: &LicenseTree, matrices: &[Option<TermMatrix>]) -> Vec<IncompatibilityIssue> {
    let root = tree.root();
    let virtual_root = matrices[root].is_none().then(all_rights_reserved);
    let matrix_of = |id: NodeId| -> &TermMatrix {
        matrices[id]
            .as_ref()
            .or(if id == root { virtual_root.as_ref() } else { None })
            .expect("non-root nodes carry licenses")
    };

    let mut issues: Vec<IncompatibilityIssue> = tree
        .edges()
        .par_iter()
        .flat_map_iter(|&(p, c)| {
            let (pm, cm) = (matrix_of(p), matrix_of(c));
            let (pr, cr) = (license_ref(tree, p, pm), license_ref(tree, c, cm));
            check_pair(pm, cm)
                .into_iter()
                .map(move |x| {
                    IncompatibilityIssue::from_conflict(pr.clone(), cr.clone(), x, IssueRelation::ParentChild)
                })
                .collect::<Vec<_>>()
        })
        .collect();

    if virtual_root.is_some() {
        let first: &[NodeId] = tree.children(root);
        for (i, &a) in first.iter().enumerate() {
            for &b in &first[i + 1..] {
                let (am, bm) = (matrix_of(a), matrix_of(b));
                let a_over_b = check_pair(am, bm);
                let b_over_a = check_pair(bm, am);
                if a_over_b.is_empty() || b_over_a.is_empty() {
                    continue;
                }
                let (ar, br) = (license_ref(tree, a, am), license_ref(tree, b, bm));
                for x in a_over_b {
                    issues.push(IncompatibilityIssue::from_conflict(
                        ar.clone(),
                        br.clone(),
                        x,
                        IssueRelation::FirstLevelPair,
                    ));
                }
                for x in b_over_a {
                    issues.push(IncompatibilityIssue::from_conflict(
                        br.clone(),
                        ar.clone(),
                        x,
                        IssueRelation::FirstLevelPair,
                    ));
                }
            }
        }
    }
    issues.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    issues
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyrightHolder {
    /// The copyright statement the name was read from.
    pub raw: String,
    pub name: String,
}

const CORPORATE_SUFFIXES: &[&str] = &[
    "inc", "inc.", "ltd", "ltd.", "llc", "llc.", "gmbh", "co.", "corp.", "s.a.", "b.v.",
];
const NAME_CONNECTORS: &[&str] = &["&", "and", "of", "de", "van", "von", "der", "la"];

fn signal_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)(copyright\s*(\(c\)|©)|\bauthored by\b|\bwritten by\b|copyright\s+(?:\d{4}))")
            .expect("valid regex")
    })
}

fn noise_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(concat!(
            r"(?i)<[^>]*>",
            r"|\b[\w.+-]+@[\w-]+(\.[\w-]+)+\b",
            r"|\bhttps?://\S+",
            r"|\bwww\.\S+",
            r"|all rights reserved",
            r"|\(c\)|©",
            r"|\bcopyright\b",
            r"|\b\d{4}(\s*[-–,]\s*(\d{4}|present))*\b",
        ))
        .expect("valid regex")
    })
}

/// The first run of capitalized tokens, allowing connectors between them
/// and a corporate suffix after a comma.
fn capitalized_run(text: &str) -> Option<String> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let capital = |t: &str| t.chars().next().is_some_and(char::is_uppercase);
    let start = tokens.iter().position(|t| capital(t))?;
    let mut name: Vec<String> = Vec::new();
    let mut i = start;
    while i < tokens.len() {
        let tok = tokens[i];
        let bare = tok.trim_end_matches([',', ';', ':']);
        let is_suffix = CORPORATE_SUFFIXES.contains(&bare.to_lowercase().as_str());
        let is_connector =
            NAME_CONNECTORS.contains(&bare.to_lowercase().as_str()) && tokens.get(i + 1).is_some_and(|n| capital(n));
        if !(capital(bare) || is_suffix || is_connector) || bare.is_empty() {
            break;
        }
        let ends_clause = tok.ends_with([',', ';', ':']) || (tok.ends_with('.') && !is_suffix && bare.len() > 2);
        let initial = bare.len() <= 2 && bare.ends_with('.');
        name.push(if is_suffix || initial {
            bare.to_string()
        } else {
            bare.trim_end_matches('.').to_string()
        });
        if ends_clause {
            let next_suffix = tokens
                .get(i + 1)
                .is_some_and(|n| CORPORATE_SUFFIXES.contains(&n.trim_end_matches([',', ';']).to_lowercase().as_str()));
            if tok.ends_with(',') && next_suffix {
                let last = name.pop().expect("just pushed");
                name.push(format!("{last},"));
            } else {
                break;
            }
        }
        i += 1;
    }
    while name
        .last()
        .is_some_and(|t| NAME_CONNECTORS.contains(&t.to_lowercase().as_str()))
    {
        name.pop();
    }
    let joined = name.join(" ");
    (!joined.is_empty()).then_some(joined)
}

/// The holder named by the first copyright statement of `text` that has
/// one. Years, e-mail addresses, URLs and "all rights reserved" are not
/// part of the name.
pub fn extract_copyright_holder(text: &str) -> Option<CopyrightHolder> {
    for line in text.lines() {
        let Some(m) = signal_regex().find(line) else { continue };
        let rest = &line[m.end()..];
        let cleaned = noise_regex().replace_all(rest, " ");
        if let Some(name) = capitalized_run(&cleaned) {
            return Some(CopyrightHolder {
                raw: line.trim().to_string(),
                name,
            });
        }
    }
    None
}

fn normalize_holder(name: &str) -> String {
    name.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Nodes whose licenses the project owner may change: the project license
/// and every in-project license naming the same copyright holder.
/// Third-party packages never qualify.
pub fn modifiable_set(tree: &LicenseTree) -> BTreeSet<NodeId> {
    let root = tree.node(tree.root());
    let mut out = BTreeSet::new();
    if root.licenses.is_empty() {
        return out;
    }
    out.insert(tree.root());
    let Some(owner) = root
        .licenses
        .iter()
        .find_map(|l| extract_copyright_holder(&l.text))
        .map(|h| normalize_holder(&h.name))
    else {
        return out;
    };
    for (id, n) in tree.nodes().iter().enumerate().skip(1) {
        if n.package.is_some() || n.licenses.iter().any(|l| l.source.kind == SourceKind::Referenced) {
            continue;
        }
        let same = n
            .licenses
            .iter()
            .filter_map(|l| extract_copyright_holder(&l.text))
            .any(|h| normalize_holder(&h.name) == owner);
        if same {
            out.insert(id);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ActionCategory::*;

    fn m(entries: &[(ActionCategory, Attitude)]) -> TermMatrix {
        entries.iter().fold(TermMatrix::new("t"), |m, &(a, att)| {
            m.with(GroupKey::work(a), Stance::new(att))
        })
    }

    #[test]
    fn reflexive() {
        let a = m(&[(Distribute, Attitude::Can), (ContactAuthor, Attitude::Must)]);
        assert!(check_pair(&a, &a).is_empty());
    }

    #[test]
    fn contact_author_conflict() {
        let issues = check_pair(
            &m(&[(ContactAuthor, Attitude::Cannot)]),
            &m(&[(ContactAuthor, Attitude::Must)]),
        );
        assert!(issues.is_empty(), "CANNOT parent is stricter than MUST child");
        let issues = check_pair(
            &m(&[(ContactAuthor, Attitude::Must)]),
            &m(&[(ContactAuthor, Attitude::Cannot)]),
        );
        assert_eq!(issues.len(), 1);
    }

    #[test]
    fn silence_reads_as_can() {
        let issues = check_pair(&TermMatrix::new("p"), &m(&[(Sublicense, Attitude::Cannot)]));
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].parent, None);
        assert!(check_pair(&m(&[(Sublicense, Attitude::Cannot)]), &TermMatrix::new("c")).is_empty());
    }

    #[test]
    fn conditional_child_conflict() {
        let child = TermMatrix::new("c").with(
            GroupKey::new(DiscloseSource, "source code"),
            Stance::when(Attitude::Must, "distribute the software"),
        );
        let issues = check_pair(&TermMatrix::new("p"), &child);
        assert_eq!(issues.len(), 1);
        assert!(issues[0].conditional);
        assert_eq!(
            issues[0].child.as_ref().unwrap().condition.as_deref(),
            Some("distribute the software")
        );
    }

    #[test]
    fn missing_object_falls_back_to_work() {
        let parent = m(&[(IncludeNotice, Attitude::Must)]);
        let child = TermMatrix::new("c").with(
            GroupKey::new(IncludeNotice, "documentation"),
            Stance::new(Attitude::Must),
        );
        assert!(check_pair(&parent, &child).is_empty());
        assert_eq!(check_pair(&child, &parent).len(), 1);
    }

    #[test]
    fn holders() {
        assert_eq!(
            extract_copyright_holder("Copyright (c) Chris Tabor").unwrap().name,
            "Chris Tabor"
        );
        assert_eq!(
            extract_copyright_holder("Copyright (c) 2015-2020 Example Corp <dev@example.com>. All rights reserved.")
                .unwrap()
                .name,
            "Example Corp"
        );
        assert_eq!(
            extract_copyright_holder("Copyright (C) 2007 Free Software Foundation, Inc. <https://fsf.org/>")
                .unwrap()
                .name,
            "Free Software Foundation, Inc."
        );
        assert_eq!(
            extract_copyright_holder("Written by Jane Q. Doe.").unwrap().name,
            "Jane Q. Doe"
        );
        assert_eq!(
            extract_copyright_holder("Copyright 2019 Ada Lovelace").unwrap().name,
            "Ada Lovelace"
        );
        assert!(extract_copyright_holder("Permission is hereby granted").is_none());
        assert!(extract_copyright_holder("Copyright (c) <year> <copyright holders>").is_none());
    }
}
