//! The analysis report and its text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::attitude::Attitude;
use crate::compat::IncompatibilityIssue;
use crate::matrix::Stance;
use crate::pipeline::Analysis;
use crate::resolve::{PostCheck, ResolutionSuggestion, SuggestionKind};

/// Version of the report layout; bumped on incompatible changes.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Report layout as a JSON schema.
pub const REPORT_SCHEMA: &str = include_str!("../../../docs/report.schema.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNodeSummary {
    pub path: String,
    pub licenses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    pub modifiable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub corpus_version: String,
    pub project_root: String,
    pub tree: Vec<TreeNodeSummary>,
    pub issues: Vec<IncompatibilityIssue>,
    pub suggestions: Vec<ResolutionSuggestion>,
    pub post_check: PostCheck,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(analysis: &Analysis, corpus_version: &str) -> Self {
        let tree = &analysis.tree;
        let nodes = tree
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, n)| TreeNodeSummary {
                path: n.label(),
                licenses: (0..n.licenses.len())
                    .filter_map(|i| analysis.interpreted.get(&(id, i)).map(|m| m.license_id.clone()))
                    .collect(),
                parent: tree.parent(id).map(|p| tree.node(p).label()),
                modifiable: analysis.modifiable.contains(&id),
            })
            .collect();
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            corpus_version: corpus_version.to_string(),
            project_root: analysis.root.display().to_string(),
            tree: nodes,
            issues: analysis.issues.clone(),
            suggestions: analysis.resolution.suggestions.clone(),
            post_check: analysis.resolution.post_check.clone(),
            warnings: analysis.warnings.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn has_issues(&self) -> bool {
        !self.issues.is_empty()
    }
}

fn attitude(s: &Option<Stance>) -> &'static str {
    Attitude::effective(s.as_ref().map(|s| s.attitude)).as_str()
}

/// Human-readable summary: one line per incompatible license pair listing
/// the conflicting groups, then one line per suggestion.
pub fn render_text(report: &Report) -> String {
    if report.issues.is_empty() {
        let mut out = String::from("No incompatibility issues found.\n");
        for w in &report.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        return out;
    }

    let mut out = String::new();
    let mut i = 0;
    while i < report.issues.len() {
        let first = &report.issues[i];
        let same_pair = |x: &IncompatibilityIssue| {
            x.child_license == first.child_license && x.parent_license == first.parent_license
        };
        let run = report.issues[i..].iter().take_while(|x| same_pair(x)).count();
        let groups: Vec<String> = report.issues[i..i + run]
            .iter()
            .map(|x| {
                let cond = if x.conditional { " (conditional)" } else { "" };
                format!(
                    "{} {}/{}{cond}",
                    x.group,
                    attitude(&x.child_attitude),
                    attitude(&x.parent_attitude)
                )
            })
            .collect();
        let _ = writeln!(
            out,
            "{} [{}] vs {} [{}]: {}",
            first.child_license.path,
            first.child_license.license,
            first.parent_license.path,
            first.parent_license.license,
            groups.join("; ")
        );
        i += run;
    }

    if !report.suggestions.is_empty() {
        out.push_str("\nSuggestions:\n");
        for s in &report.suggestions {
            let what = match s.kind {
                SuggestionKind::Official => {
                    let mut w = format!("use {}", s.official_id.as_deref().unwrap_or("?"));
                    if !s.rank_alternatives.is_empty() {
                        let _ = write!(w, " (alternatives: {})", s.rank_alternatives.join(", "));
                    }
                    w
                }
                SuggestionKind::Custom => "use the generated custom license".to_string(),
                SuggestionKind::CustomWithException => "use the generated custom license with exceptions".to_string(),
                SuggestionKind::Unresolvable => "UNRESOLVABLE (replace third-party package)".to_string(),
            };
            let _ = writeln!(out, "  {} [{}]: {what}", s.target.path, s.target.license);
        }
    }
    let pc = &report.post_check;
    let _ = writeln!(
        out,
        "\nRe-check with suggestions applied: {} ({} issue(s) remain, {} new)",
        if pc.passed { "passed" } else { "FAILED" },
        pc.remaining_issues,
        pc.new_issues.len()
    );
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}
