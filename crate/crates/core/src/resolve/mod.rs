//! Resolution of incompatibilities: attitude intervals each modifiable
//! license must fall into, official licenses that fit them, and generated
//! custom licenses when none does.

mod generate;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attitude::Attitude;
use crate::compat::{
    all_rights_reserved, check_pair, detect_matrices, effective, license_ref, node_matrices, IncompatibilityIssue,
    Interpreted, LicenseRef,
};
use crate::corpus::{Corpus, OfficialLicense};
use crate::error::Result;
use crate::extract::interpret;
use crate::matrix::{cosine, GroupKey, Stance, TermMatrix};
use crate::scan::{LicenseTree, NodeId};

pub use generate::{attach_exception, generate_custom, generate_custom_with, CustomOptions, EXCEPTIONS_HEADING};

/// One representative stance per group.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirements {
    pub bounds: BTreeMap<GroupKey, Stance>,
}

impl Requirements {
    /// What a license demands of the licenses below it: the most
    /// restrictive stance of each group, conditional ones included.
    pub fn ceiling_of(m: &TermMatrix) -> Self {
        Self {
            bounds: m
                .keys()
                .filter_map(|g| Some((g.clone(), m.representative(g)?)))
                .collect(),
        }
    }

    /// What a license tolerates in the licenses above it: the stance of
    /// each group that holds when no condition does.
    pub fn floor_of(m: &TermMatrix) -> Self {
        Self {
            bounds: m.keys().map(|g| (g.clone(), floor_stance(m, g))).collect(),
        }
    }

    /// Bound on `group`, falling back to the action's bound on the work.
    pub fn get(&self, group: &GroupKey) -> Option<&Stance> {
        self.bounds
            .get(group)
            .or_else(|| self.bounds.get(&GroupKey::work(group.action)))
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }
}

fn floor_stance(m: &TermMatrix, g: &GroupKey) -> Stance {
    effective(m, g, &|_| false)
        .cloned()
        .unwrap_or(Stance::new(Attitude::Can))
}

/// Least attitude a matrix can take on a group, silence read as CAN.
pub fn floor_attitude(m: &TermMatrix, g: &GroupKey) -> Attitude {
    Attitude::effective(effective(m, g, &|_| false).map(|s| s.attitude))
}

/// Greatest attitude a matrix can take on a group, silence read as CAN.
pub fn ceiling_attitude(m: &TermMatrix, g: &GroupKey) -> Attitude {
    let key = if m.stances(g).is_some() {
        g.clone()
    } else {
        GroupKey::work(g.action)
    };
    Attitude::effective(m.representative(&key).map(|s| s.attitude))
}

/// Value of the merge lattice: an attitude, or the unsatisfiable
/// combination of MUST and CANNOT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Merged {
    Attitude(Attitude),
    Conflict,
}

impl Merged {
    pub fn join(self, other: Merged) -> Merged {
        match (self, other) {
            (Merged::Conflict, _) | (_, Merged::Conflict) => Merged::Conflict,
            (Merged::Attitude(a), Merged::Attitude(b)) => {
                if (a, b) == (Attitude::Must, Attitude::Cannot) || (a, b) == (Attitude::Cannot, Attitude::Must) {
                    Merged::Conflict
                } else {
                    Merged::Attitude(a.max(b))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScopedAttitude {
    pub scope: String,
    pub attitude: Attitude,
}

/// A group on which children demand both MUST and CANNOT.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictGroup {
    pub group: GroupKey,
    /// Children with a MUST or CANNOT stance, ordered by scope.
    pub scopes: Vec<ScopedAttitude>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeResult {
    pub requirements: Requirements,
    pub conflict: bool,
    pub conflict_groups: Vec<ConflictGroup>,
}

/// Merges the requirements of sibling licenses, given as (scope, matrix).
/// Each group takes the most restrictive attitude; a group with both MUST
/// and CANNOT cannot be met by one attitude and is set aside.
pub fn merge_child_requirements(children: &[(&str, &TermMatrix)]) -> MergeResult {
    let groups: BTreeSet<&GroupKey> = children.iter().flat_map(|(_, m)| m.keys()).collect();
    let reqs: Vec<(&str, Requirements)> = children
        .iter()
        .map(|(s, m)| (*s, Requirements::ceiling_of(m)))
        .collect();

    let mut out = MergeResult::default();
    for group in groups {
        let mut merged = Merged::Attitude(Attitude::Can);
        let mut best: Option<&Stance> = None;
        let mut scopes = Vec::new();
        for (scope, r) in &reqs {
            let Some(s) = r.get(group) else { continue };
            merged = merged.join(Merged::Attitude(s.attitude));
            if s.attitude != Attitude::Can {
                scopes.push(ScopedAttitude {
                    scope: scope.to_string(),
                    attitude: s.attitude,
                });
            }
            let better = best.is_none_or(|b| {
                s.attitude > b.attitude || (s.attitude == b.attitude && b.is_conditional() && !s.is_conditional())
            });
            if better {
                best = Some(s);
            }
        }
        match merged {
            Merged::Conflict => {
                scopes.sort();
                out.conflict = true;
                out.conflict_groups.push(ConflictGroup {
                    group: group.clone(),
                    scopes,
                });
            }
            Merged::Attitude(_) => {
                if let Some(s) = best {
                    out.requirements.bounds.insert(group.clone(), s.clone());
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: Attitude,
    pub upper: Attitude,
    /// Condition under which a child asks for `lower`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
}

impl Interval {
    pub fn contains(&self, a: Attitude) -> bool {
        self.lower <= a && a <= self.upper
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub intervals: BTreeMap<GroupKey, Interval>,
    pub exception_groups: Vec<ConflictGroup>,
    /// Set when a parent bounds the license: a group outside `intervals`
    /// is then held to the parent's silence, CAN.
    #[serde(default)]
    pub closed: bool,
}

const SILENT: Interval = Interval {
    lower: Attitude::Can,
    upper: Attitude::Can,
    condition: None,
};

impl ConstraintSet {
    /// Interval that applies to `g`: its own, else the one on the
    /// action's work, else CAN..CAN for a closed set.
    pub fn interval_for(&self, g: &GroupKey) -> Option<&Interval> {
        self.intervals
            .get(g)
            .or_else(|| self.intervals.get(&GroupKey::work(g.action)))
            .or(self.closed.then_some(&SILENT))
    }

    /// Whether `m` meets every interval: its least attitude on a group is
    /// at least the lower bound and its greatest at most the upper one.
    pub fn admits(&self, m: &TermMatrix) -> bool {
        let fits = |g: &GroupKey, iv: &Interval| floor_attitude(m, g) >= iv.lower && ceiling_attitude(m, g) <= iv.upper;
        self.intervals.iter().all(|(g, iv)| fits(g, iv))
            && m.keys().all(|g| self.interval_for(g).is_none_or(|iv| fits(g, iv)))
    }
}

/// Intervals a replacement license must fall into: at least as restrictive
/// as the merged children, at most as restrictive as the parent (CANNOT
/// when there is no parent bound). `None` when some interval is empty.
pub fn resolve_constraints(
    parent: Option<&Requirements>,
    merged: &Requirements,
    conflicts: &[ConflictGroup],
) -> Option<ConstraintSet> {
    let excluded: BTreeSet<&GroupKey> = conflicts.iter().map(|c| &c.group).collect();
    let upper_of = |g: &GroupKey| match parent {
        Some(p) => Attitude::effective(p.get(g).map(|s| s.attitude)),
        None => Attitude::Cannot,
    };

    let mut groups: BTreeSet<&GroupKey> = merged.bounds.keys().collect();
    if let Some(p) = parent {
        groups.extend(p.bounds.keys());
    }
    let mut out = ConstraintSet::default();
    for g in groups.into_iter().filter(|g| !excluded.contains(g)) {
        let lower = merged.get(g);
        let interval = Interval {
            lower: Attitude::effective(lower.map(|s| s.attitude)),
            upper: upper_of(g),
            condition: lower.and_then(|s| s.condition.clone()),
        };
        if interval.lower > interval.upper {
            return None;
        }
        out.intervals.insert(g.clone(), interval);
    }
    for c in conflicts {
        if c.scopes.iter().any(|s| s.attitude > upper_of(&c.group)) {
            return None;
        }
    }
    out.exception_groups = conflicts.to_vec();
    out.closed = parent.is_some();
    Some(out)
}

/// Official licenses that meet every interval, most similar to `original`
/// first. Ties go to the smaller identifier.
pub fn recommend_official<'c>(
    constraints: &ConstraintSet,
    corpus: &'c Corpus,
    original: &TermMatrix,
) -> Vec<(&'c OfficialLicense, f64)> {
    if !constraints.exception_groups.is_empty() {
        return Vec::new();
    }
    let target = original.vector();
    let mut out: Vec<(&OfficialLicense, f64)> = corpus
        .licenses()
        .par_iter()
        .filter(|l| constraints.admits(&l.matrix))
        .map(|l| (l, cosine(&l.vector, &target)))
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.spdx_id.cmp(&b.0.spdx_id)));
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preference {
    #[default]
    Official,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuggestionKind {
    Official,
    Custom,
    CustomWithException,
    Unresolvable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionSuggestion {
    pub target: LicenseRef,
    pub kind: SuggestionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub official_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_text: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rank_alternatives: Vec<String>,
    /// MUST and CANNOT groups the replacement adds beyond its constraints.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Outcome of re-running detection with every suggestion applied.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PostCheck {
    pub passed: bool,
    pub remaining_issues: usize,
    pub new_issues: Vec<IncompatibilityIssue>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub suggestions: Vec<ResolutionSuggestion>,
    pub post_check: PostCheck,
}

#[derive(Debug, Clone, Default)]
pub struct ResolveSettings {
    pub prefer: Preference,
}

/// Walks the incompatible licenses bottom-up and suggests a replacement
/// for each one the owner may modify. A replacement is applied in memory
/// before its ancestors are handled, and detection is re-run at the end.
/// Issues between two licenses the owner cannot touch are unresolvable.
pub fn resolve_project(
    tree: &LicenseTree,
    interpreted: &Interpreted,
    issues: &[IncompatibilityIssue],
    modifiable: &BTreeSet<NodeId>,
    corpus: &Corpus,
    settings: &ResolveSettings,
) -> Result<Resolution> {
    let original = node_matrices(tree, interpreted)?;
    let mut current = original.clone();
    let mut involved: BTreeSet<NodeId> = issues
        .iter()
        .flat_map(|i| [i.parent_license.node, i.child_license.node])
        .collect();

    let mut suggestions = Vec::new();
    let mut changed: BTreeSet<NodeId> = BTreeSet::new();
    for id in tree.post_order() {
        if !involved.contains(&id) || !modifiable.contains(&id) {
            continue;
        }
        let Some(own) = original[id].as_ref() else { continue };
        let target = license_ref(tree, id, own);

        let parent_req = tree.parent(id).filter(|p| !modifiable.contains(p)).map(|p| {
            let m = current[p].clone().unwrap_or_else(all_rights_reserved);
            Requirements::floor_of(&m)
        });
        let labels: Vec<String> = tree.children(id).iter().map(|&c| tree.node(c).label()).collect();
        let children: Vec<(&str, &TermMatrix)> = tree
            .children(id)
            .iter()
            .zip(&labels)
            .filter_map(|(&c, l)| current[c].as_ref().map(|m| (l.as_str(), m)))
            .collect();
        let merged = merge_child_requirements(&children);
        let Some(cs) = resolve_constraints(parent_req.as_ref(), &merged.requirements, &merged.conflict_groups) else {
            suggestions.push(unresolvable(target));
            continue;
        };

        let ranked = if settings.prefer == Preference::Official {
            recommend_official(&cs, corpus, own)
        } else {
            Vec::new()
        };
        let (suggestion, replacement) = if let Some((best, _)) = ranked.first() {
            let replacement = best.matrix.clone();
            let s = ResolutionSuggestion {
                target,
                kind: SuggestionKind::Official,
                official_id: Some(best.spdx_id.clone()),
                custom_text: None,
                rank_alternatives: ranked[1..].iter().map(|(l, _)| l.spdx_id.clone()).collect(),
                notes: added_terms(&cs, &replacement),
            };
            (s, replacement)
        } else {
            let mut provenance: Vec<String> = children
                .iter()
                .map(|(l, m)| format!("{l} ({})", m.license_id))
                .collect();
            if let (Some(p), Some(_)) = (tree.parent(id), &parent_req) {
                let label = tree.node(p).label();
                let id = current[p]
                    .as_ref()
                    .map_or("all rights reserved", |m| m.license_id.as_str());
                provenance.push(format!("{label} ({id})"));
            }
            let opts = CustomOptions {
                provenance,
                ..CustomOptions::default()
            };
            let mut text = generate_custom_with(&cs, &opts);
            let kind = if merged.conflict {
                text = attach_exception(&cs, &text, &merged.conflict_groups);
                SuggestionKind::CustomWithException
            } else {
                SuggestionKind::Custom
            };
            let replacement = interpret(&text, &format!("custom:{}", target.path));
            let s = ResolutionSuggestion {
                target,
                kind,
                official_id: None,
                custom_text: Some(text),
                rank_alternatives: Vec::new(),
                notes: Vec::new(),
            };
            (s, replacement)
        };
        suggestions.push(suggestion);
        // A replacement can break the edge to a parent the owner controls,
        // which is then handled further up.
        if let Some(p) = tree.parent(id).filter(|p| modifiable.contains(p)) {
            let pm = current[p].clone().unwrap_or_else(all_rights_reserved);
            if !check_pair(&pm, &replacement).is_empty() {
                involved.insert(p);
            }
        }
        current[id] = Some(replacement);
        changed.insert(id);
    }

    // Issues no modifiable participant can fix.
    let handled: BTreeSet<NodeId> = suggestions.iter().map(|s| s.target.node).collect();
    for issue in issues {
        let (p, c) = (issue.parent_license.node, issue.child_license.node);
        if modifiable.contains(&p) || modifiable.contains(&c) || handled.contains(&c) {
            continue;
        }
        if !suggestions.iter().any(|s: &ResolutionSuggestion| s.target.node == c) {
            suggestions.push(unresolvable(issue.child_license.clone()));
        }
    }
    suggestions.sort_by(|a, b| a.target.path.cmp(&b.target.path));

    let before: BTreeSet<(NodeId, NodeId, GroupKey)> = issues
        .iter()
        .map(|i| (i.parent_license.node, i.child_license.node, i.group.clone()))
        .collect();
    let after = detect_matrices(tree, &current);
    let new_issues: Vec<IncompatibilityIssue> = after
        .iter()
        .filter(|i| changed.contains(&i.parent_license.node) || changed.contains(&i.child_license.node))
        .filter(|i| !before.contains(&(i.parent_license.node, i.child_license.node, i.group.clone())))
        .cloned()
        .collect();
    Ok(Resolution {
        suggestions,
        post_check: PostCheck {
            passed: new_issues.is_empty(),
            remaining_issues: after.len(),
            new_issues,
        },
    })
}

fn unresolvable(target: LicenseRef) -> ResolutionSuggestion {
    ResolutionSuggestion {
        target,
        kind: SuggestionKind::Unresolvable,
        official_id: None,
        custom_text: None,
        rank_alternatives: Vec::new(),
        notes: Vec::new(),
    }
}

/// Groups on which `replacement` is MUST or CANNOT although no interval
/// asks for it.
fn added_terms(cs: &ConstraintSet, replacement: &TermMatrix) -> Vec<String> {
    replacement
        .keys()
        .filter(|g| cs.intervals.get(*g).is_none_or(|iv| iv.lower == Attitude::Can))
        .filter_map(|g| {
            let s = replacement.representative(g)?;
            (s.attitude != Attitude::Can).then(|| format!("adds {g}: {s}"))
        })
        .collect()
}
