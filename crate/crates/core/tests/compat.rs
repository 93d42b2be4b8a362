mod common;

use licentia::action::ActionCategory::*;
use licentia::attitude::Attitude::*;
use licentia::compat::{check_pair, detect, modifiable_set, IssueRelation};
use licentia::matrix::{GroupKey, Stance, TermMatrix};

#[test]
fn sublicense_permitted_above_prohibited_below() {
    let parent = TermMatrix::new("p").with(GroupKey::work(Sublicense), Stance::new(Can));
    let child = TermMatrix::new("c").with(GroupKey::work(Sublicense), Stance::new(Cannot));
    let conflicts = check_pair(&parent, &child);
    assert_eq!(conflicts.len(), 1);
    assert_eq!(conflicts[0].group, GroupKey::work(Sublicense));
    assert!(check_pair(&child, &parent).is_empty());
}

#[test]
fn mongo_app_issues_sit_at_db_py() {
    let a = common::run_analysis(&common::fixture("mongo_app"));
    assert!(a.issues.len() >= 2);
    assert!(a.issues.iter().all(|i| i.parent_license.path == "/db.py"));
    let children: std::collections::BTreeSet<&str> =
        a.issues.iter().map(|i| i.child_license.license.as_str()).collect();
    assert_eq!(children, ["Apache-2.0", "ZPL-2.1"].into_iter().collect());
    assert_eq!(a.issues[0].parent_license.span, Some((1, 3)));

    let labels: Vec<String> = modifiable_set(&a.tree)
        .iter()
        .map(|&n| a.tree.node(n).label())
        .collect();
    assert_eq!(labels, vec!["/", "/db.py"]);
}

#[test]
fn without_project_license_first_level_pairs_are_compared() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    common::write(root, "a/LICENSE", &common::license_text("MIT", "A Person"));
    common::write(root, "b/LICENSE", &common::license_text("GPL-3.0", "B Person"));
    let a = common::run_analysis(root);
    assert!(!a.issues.is_empty());
    assert!(a.issues.iter().all(|i| i.relation == IssueRelation::FirstLevelPair));
    let pairs: std::collections::BTreeSet<(&str, &str)> = a
        .issues
        .iter()
        .map(|i| (i.parent_license.path.as_str(), i.child_license.path.as_str()))
        .collect();
    assert!(pairs.contains(&("/a", "/b")) || pairs.contains(&("/b", "/a")));
    assert!(a.issues.iter().all(|i| i.parent_license.path != "/"));
}

#[test]
fn compatible_siblings_without_project_license_are_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    common::write(root, "a/LICENSE", &common::license_text("MIT", "A Person"));
    common::write(root, "b/LICENSE", &common::license_text("ISC", "B Person"));
    assert!(common::run_analysis(root).issues.is_empty());
}

#[test]
fn detection_is_deterministic() {
    let a = common::run_analysis(&common::fixture("mongo_app"));
    let b = common::run_analysis(&common::fixture("mongo_app"));
    assert_eq!(a.issues, b.issues);
    assert_eq!(detect(&a.tree, &a.interpreted).unwrap(), a.issues);
}
