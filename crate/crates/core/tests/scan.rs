mod common;

use licentia::corpus::PackageLicenseIndex;
use licentia::scan::inline::leading_comment_block;
use licentia::scan::{build_hierarchy, detect_inline, scan_tree, ScanOptions, SourceKind};
use proptest::prelude::*;

#[test]
fn mongo_app_fixture_scan() {
    let out = scan_tree(
        &common::fixture("mongo_app"),
        &PackageLicenseIndex::bundled(),
        &ScanOptions::default(),
    )
    .unwrap();
    let found: Vec<(SourceKind, &str, Option<&str>)> = out
        .licenses
        .iter()
        .map(|l| (l.source.kind, l.source.path.as_str(), l.source.origin.as_deref()))
        .collect();
    assert_eq!(
        found,
        vec![
            (SourceKind::Declared, "/LICENSE", None),
            (SourceKind::Referenced, "/db.py", Some("datetime")),
            (SourceKind::Referenced, "/db.py", Some("pymongo")),
            (SourceKind::Inline, "/db.py", None),
        ]
    );
    let inline = &out.licenses[3];
    assert_eq!(inline.source.span, Some((1, 3)));
    // `db` is a module of the project itself.
    assert!(out.warnings.is_empty(), "{:?}", out.warnings);

    let tree = build_hierarchy(&out.licenses);
    let db = tree.find("/db.py").unwrap();
    assert_eq!(tree.parent(db), Some(tree.root()));
    assert_eq!(tree.children(db).len(), 2);
}

#[test]
fn nested_declared_and_unknown_packages() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    common::write(root, "LICENSE", &common::license_text("MIT", "Ada Lovelace"));
    common::write(
        root,
        "vendor/lib/COPYING",
        &common::license_text("GPL-3.0", "Someone Else"),
    );
    common::write(root, "vendor/lib/x.py", "import totally_unknown_pkg\n");
    common::write(root, "requirements.txt", "requests==2.0\n");
    let out = scan_tree(root, &PackageLicenseIndex::bundled(), &ScanOptions::default()).unwrap();
    assert!(out.warnings.iter().any(|w| w.contains("totally_unknown_pkg")));
    let tree = build_hierarchy(&out.licenses);
    let labels: Vec<String> = tree.nodes().iter().map(|n| n.label()).collect();
    assert!(labels.contains(&"/vendor/lib".to_string()));
    assert!(labels.contains(&"/::requests".to_string()), "{labels:?}");
}

#[test]
fn missing_root_is_an_error() {
    let r = scan_tree(
        std::path::Path::new("/definitely/not/here"),
        &PackageLicenseIndex::bundled(),
        &ScanOptions::default(),
    );
    assert!(r.is_err());
}

fn comment_line() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("# Licensed under the MIT License.".to_string()),
        "[a-z ]{0,30}".prop_map(|s| format!("# {s}")),
        Just("#".to_string()),
        Just(String::new()),
    ]
}

fn code_line() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("x = 1".to_string()),
        Just("import os".to_string()),
        Just("def f(): pass".to_string())
    ]
}

proptest! {
    #[test]
    fn inline_span_stays_within_the_leading_block(
        head in proptest::collection::vec(comment_line(), 0..12),
        body in proptest::collection::vec(code_line(), 1..6),
        window in 1usize..30,
    ) {
        let lines: Vec<String> = head.iter().chain(&body).cloned().collect();
        let text = lines.join("\n");
        if let Some(block) = leading_comment_block(&text, window) {
            prop_assert!(block.start_line >= 1 && block.start_line <= block.end_line);
            prop_assert!(block.end_line <= window.min(lines.len()));
            for l in &lines[block.start_line - 1..block.end_line] {
                prop_assert!(l.trim().is_empty() || l.starts_with('#'));
            }
        }
        if let Some(lic) = detect_inline("/f.py", &text, window) {
            let (s, e) = lic.source.span.unwrap();
            prop_assert!(lines[s - 1..e].iter().any(|l| l.contains("Licensed under")));
        }
    }
}
