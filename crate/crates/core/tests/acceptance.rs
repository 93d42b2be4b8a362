//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL
//! line; the binary exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use licentia::action::ActionCategory::{self, *};
use licentia::attitude::Attitude::{self, *};
use licentia::compat::{check_pair, IssueRelation};
use licentia::corpus::{Corpus, PackageLicenseIndex};
use licentia::extract::interpret;
use licentia::matrix::{GroupKey, Stance, TermMatrix};
use licentia::resolve::*;
use licentia::scan::{build_hierarchy, scan_tree, LicenseTree, RawLicense, ScanOptions, SourceKind};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

const SEED: u64 = 0x11c3_2024;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "end-to-end fixture (db.py importing pymongo and datetime)",
            end_to_end_fixture,
        ),
        ("golden matrices of the bundled corpus", golden_matrices),
        ("conflict lattice against brute-force enumeration", conflict_lattice),
        (
            "recommendation soundness on random constraint sets",
            recommendation_soundness,
        ),
        ("generated licenses stay within their intervals", round_trip),
        ("hierarchy properties on random directory trees", hierarchy_fuzz),
        ("sublicense and contact-author scenarios", scenarios),
        ("projects without a root license", no_project_license),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({detail})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn end_to_end_fixture() -> Outcome {
    let start = Instant::now();
    let a = common::run_analysis(&common::fixture("mongo_app"));
    let elapsed = start.elapsed();

    ensure(a.issues.len() >= 2, || format!("{} issues", a.issues.len()))?;
    ensure(a.issues.iter().all(|i| i.parent_license.path == "/db.py"), || {
        "an issue is not located at /db.py".into()
    })?;
    let children: BTreeSet<&str> = a.issues.iter().map(|i| i.child_license.license.as_str()).collect();
    ensure(children == BTreeSet::from(["Apache-2.0", "ZPL-2.1"]), || {
        format!("children {children:?}")
    })?;

    let modifiable: BTreeSet<String> = a.modifiable.iter().map(|&n| a.tree.node(n).label()).collect();
    let targets: BTreeSet<String> = a.resolution.suggestions.iter().map(|s| s.target.path.clone()).collect();
    ensure(
        modifiable == BTreeSet::from(["/".to_string(), "/db.py".to_string()]),
        || format!("modifiable {modifiable:?}"),
    )?;
    ensure(targets == modifiable, || format!("suggestions for {targets:?}"))?;
    ensure(a.resolution.post_check.passed, || {
        format!("{:?}", a.resolution.post_check)
    })?;
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} issues at /db.py, suggestions for / and /db.py, re-check passed, {:.2}s",
        a.issues.len(),
        elapsed.as_secs_f64()
    ))
}

fn golden_matrices() -> Outcome {
    let corpus = Corpus::bundled();
    ensure(corpus.len() >= 10, || format!("only {} licenses", corpus.len()))?;
    let mut entries = 0;
    let mut mismatches = Vec::new();
    for l in corpus.licenses() {
        let got = interpret(&l.text, &l.spdx_id);
        let keys: BTreeSet<&GroupKey> = got.groups.keys().chain(l.matrix.groups.keys()).collect();
        for k in keys {
            entries += 1;
            if got.groups.get(k) != l.matrix.groups.get(k) {
                mismatches.push(format!("{} {k}", l.spdx_id));
            }
        }
    }
    ensure(mismatches.is_empty(), || format!("mismatched entries: {mismatches:?}"))?;
    Ok(format!("{} licenses, {entries} entries identical", corpus.len()))
}

const GROUPS: [ActionCategory; 3] = [Distribute, ContactAuthor, Sublicense];

/// Attitude of `m` on `g` when the condition `c` has truth value `c_holds`.
fn naive_in_world(m: &TermMatrix, g: &GroupKey, c_holds: bool) -> Attitude {
    m.groups
        .get(g)
        .into_iter()
        .flatten()
        .filter(|s| s.condition.is_none() || c_holds)
        .map(|s| s.attitude)
        .max()
        .unwrap_or(Can)
}

fn lattice_matrix(options: &[Option<Stance>], picks: &[usize]) -> TermMatrix {
    GROUPS
        .iter()
        .zip(picks)
        .fold(TermMatrix::new("m"), |m, (&a, &i)| match &options[i] {
            Some(s) => m.with(GroupKey::work(a), s.clone()),
            None => m,
        })
}

fn assignments(options: usize, slots: usize) -> Vec<Vec<usize>> {
    (0..options.pow(slots as u32))
        .map(|mut n| {
            (0..slots)
                .map(|_| {
                    let d = n % options;
                    n /= options;
                    d
                })
                .collect()
        })
        .collect()
}

fn conflict_lattice() -> Outcome {
    let stances = vec![
        None,
        Some(Stance::new(Can)),
        Some(Stance::new(Must)),
        Some(Stance::new(Cannot)),
        Some(Stance::when(Can, "c")),
        Some(Stance::when(Must, "c")),
        Some(Stance::when(Cannot, "c")),
    ];
    let matrices: Vec<TermMatrix> = assignments(stances.len(), 3)
        .iter()
        .map(|p| lattice_matrix(&stances, p))
        .collect();
    let mut pairs = 0;
    for parent in &matrices {
        for child in &matrices {
            pairs += 1;
            let got: BTreeSet<(GroupKey, bool)> = check_pair(parent, child)
                .into_iter()
                .map(|c| (c.group, c.conditional))
                .collect();
            let want: BTreeSet<(GroupKey, bool)> = GROUPS
                .iter()
                .map(|&a| GroupKey::work(a))
                .filter_map(|g| {
                    let bad = |w| naive_in_world(child, &g, w) > naive_in_world(parent, &g, w);
                    if bad(false) {
                        Some((g, false))
                    } else if bad(true) {
                        Some((g, true))
                    } else {
                        None
                    }
                })
                .collect();
            ensure(got == want, || {
                format!("check_pair {parent:?} / {child:?}: {got:?} vs {want:?}")
            })?;
        }
    }

    let plain = [
        None,
        Some(Stance::new(Can)),
        Some(Stance::new(Must)),
        Some(Stance::new(Cannot)),
    ];
    let scopes = ["/a", "/b", "/c"];
    let mut merges = 0;
    for n in 1..=3usize {
        // Three children take a stance on every group: 3^9 cases.
        let options: &[Option<Stance>] = if n == 3 { &plain[1..] } else { &plain };
        for picks in assignments(options.len(), 3 * n) {
            merges += 1;
            let children: Vec<TermMatrix> = picks.chunks(3).map(|p| lattice_matrix(options, p)).collect();
            let args: Vec<(&str, &TermMatrix)> = scopes.iter().copied().zip(&children).collect();
            let got = merge_child_requirements(&args);

            let mut want_groups = Vec::new();
            let mut want_bounds = BTreeMap::new();
            for &a in &GROUPS {
                let g = GroupKey::work(a);
                let present: Vec<(&str, Attitude)> = args
                    .iter()
                    .filter_map(|(s, m)| m.groups.get(&g).map(|st| (*s, st.iter().next().unwrap().attitude)))
                    .collect();
                let has = |x| present.iter().any(|(_, p)| *p == x);
                if has(Must) && has(Cannot) {
                    let mut sc: Vec<(String, Attitude)> = present
                        .iter()
                        .filter(|(_, p)| *p != Can)
                        .map(|(s, p)| (s.to_string(), *p))
                        .collect();
                    sc.sort();
                    want_groups.push((g, sc));
                } else if let Some(max) = present.iter().map(|(_, p)| *p).max() {
                    want_bounds.insert(g, max);
                }
            }
            want_groups.sort();
            let got_groups: Vec<(GroupKey, Vec<(String, Attitude)>)> = got
                .conflict_groups
                .iter()
                .map(|c| {
                    (
                        c.group.clone(),
                        c.scopes.iter().map(|s| (s.scope.clone(), s.attitude)).collect(),
                    )
                })
                .collect();
            let got_bounds: BTreeMap<GroupKey, Attitude> = got
                .requirements
                .bounds
                .iter()
                .map(|(g, s)| (g.clone(), s.attitude))
                .collect();
            ensure(got.conflict == !want_groups.is_empty(), || {
                format!("conflict flag for {picks:?}")
            })?;
            ensure(got_groups == want_groups, || {
                format!("conflict groups for {picks:?}: {got_groups:?}")
            })?;
            ensure(got_bounds == want_bounds, || {
                format!("bounds for {picks:?}: {got_bounds:?}")
            })?;
        }
    }
    Ok(format!("{pairs} pairs and {merges} merges agree"))
}

/// Lowest and highest attitude `m` can take on `g`, silence read as CAN.
fn naive_range(m: &TermMatrix, g: &GroupKey) -> (Attitude, Attitude) {
    let stances = m.groups.get(g).or_else(|| m.groups.get(&GroupKey::work(g.action)));
    let Some(stances) = stances else { return (Can, Can) };
    let low = stances
        .iter()
        .filter(|s| s.condition.is_none())
        .map(|s| s.attitude)
        .max()
        .unwrap_or(Can);
    let high = stances.iter().map(|s| s.attitude).max().unwrap_or(Can);
    (low, high)
}

fn within(m: &TermMatrix, g: &GroupKey, lower: Attitude, upper: Attitude) -> bool {
    let (low, high) = naive_range(m, g);
    lower <= low && high <= upper
}

fn verify(cs: &ConstraintSet, m: &TermMatrix) -> bool {
    let listed = cs.intervals.iter().all(|(g, iv)| within(m, g, iv.lower, iv.upper));
    let unlisted = m.groups.keys().all(|g| {
        match cs
            .intervals
            .get(g)
            .or_else(|| cs.intervals.get(&GroupKey::work(g.action)))
        {
            Some(iv) => within(m, g, iv.lower, iv.upper),
            None => !cs.closed || within(m, g, Can, Can),
        }
    });
    listed && unlisted
}

fn naive_cosine(a: &[u8], b: &[u8]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| f64::from(*x) * f64::from(*y)).sum();
    let norm = |v: &[u8]| v.iter().map(|x| f64::from(*x).powi(2)).sum::<f64>().sqrt();
    if norm(a) == 0.0 || norm(b) == 0.0 {
        0.0
    } else {
        dot / (norm(a) * norm(b))
    }
}

fn random_attitude(rng: &mut StdRng) -> Attitude {
    *[Can, Must, Cannot].choose(rng).unwrap()
}

/// 100 constraint sets: half derived from random parents and children
/// built out of corpus licenses, half drawn directly as intervals.
fn random_constraint_sets(corpus: &Corpus) -> Vec<ConstraintSet> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let universe: Vec<GroupKey> = corpus
        .licenses()
        .iter()
        .flat_map(|l| l.matrix.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let licenses = corpus.licenses();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < 50 && attempts < 100_000 {
        attempts += 1;
        let children: Vec<TermMatrix> = (0..rng.random_range(1..=3))
            .map(|_| {
                if rng.random_bool(0.5) {
                    licenses.choose(&mut rng).unwrap().matrix.clone()
                } else {
                    (0..rng.random_range(1..=5)).fold(TermMatrix::new("synthetic"), |m, _| {
                        let g = universe.choose(&mut rng).unwrap().clone();
                        let a = random_attitude(&mut rng);
                        m.with(g, Stance::new(a))
                    })
                }
            })
            .collect();
        let scopes: Vec<String> = (0..children.len()).map(|i| format!("/pkg{i}")).collect();
        let args: Vec<(&str, &TermMatrix)> = scopes.iter().map(String::as_str).zip(&children).collect();
        let merged = merge_child_requirements(&args);
        let parent = rng
            .random_bool(0.5)
            .then(|| Requirements::floor_of(&licenses.choose(&mut rng).unwrap().matrix));
        if let Some(cs) = resolve_constraints(parent.as_ref(), &merged.requirements, &merged.conflict_groups) {
            out.push(cs);
        }
    }
    while out.len() < 100 {
        let mut cs = ConstraintSet {
            closed: rng.random_bool(0.3),
            ..ConstraintSet::default()
        };
        for _ in 0..rng.random_range(1..=6) {
            let (a, b) = (random_attitude(&mut rng), random_attitude(&mut rng));
            cs.intervals.insert(
                universe.choose(&mut rng).unwrap().clone(),
                Interval {
                    lower: a.min(b),
                    upper: a.max(b),
                    condition: None,
                },
            );
        }
        out.push(cs);
    }
    out
}

fn recommendation_soundness() -> Outcome {
    let corpus = Corpus::bundled();
    let sets = random_constraint_sets(&corpus);
    let mut rng = StdRng::seed_from_u64(SEED ^ 1);
    let mut recommended = 0;
    for cs in &sets {
        let original = &corpus.licenses().choose(&mut rng).unwrap().matrix;
        let got = recommend_official(cs, &corpus, original);
        recommended += got.len();
        for (l, _) in &got {
            ensure(verify(cs, &l.matrix), || {
                format!("{} recommended outside {cs:?}", l.spdx_id)
            })?;
        }
        let scores: Vec<f64> = got
            .iter()
            .map(|(l, _)| naive_cosine(&l.vector, &original.vector()))
            .collect();
        ensure(scores.windows(2).all(|w| w[0] >= w[1] - 1e-12), || {
            format!("ranking not sorted: {scores:?}")
        })?;
        if cs.exception_groups.is_empty() {
            let want: BTreeSet<&str> = corpus
                .licenses()
                .iter()
                .filter(|l| verify(cs, &l.matrix))
                .map(|l| l.spdx_id.as_str())
                .collect();
            let have: BTreeSet<&str> = got.iter().map(|(l, _)| l.spdx_id.as_str()).collect();
            ensure(want == have, || format!("missed licenses {:?}", want.difference(&have)))?;
        }
    }
    Ok(format!(
        "{} sets, {recommended} recommendations, 0 violations",
        sets.len()
    ))
}

fn round_trip() -> Outcome {
    let corpus = Corpus::bundled();
    let sets = random_constraint_sets(&corpus);
    let mut checked = 0;
    for cs in &sets {
        let text = generate_custom(cs);
        let m = interpret(&text, "custom");
        for (g, iv) in &cs.intervals {
            checked += 1;
            ensure(within(&m, g, iv.lower, iv.upper), || {
                format!(
                    "{g} read back as {:?}, wanted {:?}..{:?}\n{text}",
                    naive_range(&m, g),
                    iv.lower,
                    iv.upper
                )
            })?;
        }
    }
    Ok(format!(
        "{} sets, {checked} constrained groups, 0 violations",
        sets.len()
    ))
}

/// Inclusive path containment on `/`-separated scopes.
fn contains(outer: &str, inner: &str) -> bool {
    outer == "/" || inner == outer || inner.starts_with(&format!("{outer}/"))
}

fn expected_scope(l: &RawLicense) -> String {
    match l.source.kind {
        SourceKind::Declared => match l.source.path.rsplit_once('/') {
            Some(("", _)) | None => "/".to_string(),
            Some((dir, _)) => dir.to_string(),
        },
        _ => l.source.path.clone(),
    }
}

fn check_tree(tree: &LicenseTree, licenses: &[RawLicense]) -> Result<(), String> {
    for l in licenses {
        let holders = tree.nodes().iter().filter(|n| n.licenses.contains(l)).count();
        ensure(holders == 1, || format!("{} held by {holders} nodes", l.source.path))?;
    }
    let own: BTreeSet<String> = licenses
        .iter()
        .filter(|l| l.source.kind != SourceKind::Referenced)
        .map(expected_scope)
        .collect();
    for (id, n) in tree.nodes().iter().enumerate() {
        if id != tree.root() {
            ensure(!n.licenses.is_empty(), || format!("license-free node {}", n.label()))?;
        }
        let Some(p) = tree.parent(id) else { continue };
        let parent = tree.node(p);
        ensure(contains(&parent.scope_path, &n.scope_path), || {
            format!("{} under {}", n.label(), parent.label())
        })?;
        // The parent is the deepest licensed scope above this one.
        let anchor = match &n.package {
            Some(_) if own.contains(&n.licenses[0].source.path) => n.licenses[0].source.path.clone(),
            Some(_) => strict_ancestor(&own, &n.licenses[0].source.path),
            None => strict_ancestor(&own, &n.scope_path),
        };
        ensure(parent.package.is_none() && parent.scope_path == anchor, || {
            format!("{} hangs below {} instead of {anchor}", n.label(), parent.label())
        })?;
    }
    Ok(())
}

fn strict_ancestor(scopes: &BTreeSet<String>, path: &str) -> String {
    scopes
        .iter()
        .filter(|s| s.as_str() != path && contains(s, path))
        .max_by_key(|s| s.len())
        .cloned()
        .unwrap_or_else(|| "/".to_string())
}

fn random_project(rng: &mut StdRng, corpus: &Corpus) -> Vec<(String, String)> {
    const DIRS: [&str; 5] = ["src", "lib", "vendor", "pkg", "util"];
    const IMPORTS: [&str; 7] = [
        "pymongo",
        "requests",
        "datetime",
        "os",
        "numpy",
        "not_a_real_pkg",
        "yaml",
    ];
    let mut files = Vec::new();
    for _ in 0..rng.random_range(1..=10) {
        let depth = rng.random_range(0..=4);
        let dir: String = (0..depth).map(|_| format!("/{}", DIRS.choose(rng).unwrap())).collect();
        let license = corpus.licenses().choose(rng).unwrap();
        if rng.random_bool(0.4) {
            let name = *["LICENSE", "COPYING", "LICENSE.txt"].choose(rng).unwrap();
            files.push((
                format!("{dir}/{name}"),
                format!("Copyright (c) 2020 Someone\n\n{}", license.text),
            ));
        } else {
            let mut body = String::new();
            if rng.random_bool(0.5) {
                body.push_str(&format!(
                    "# Copyright 2020 Someone\n# Licensed under the {} license.\n\n",
                    license.spdx_id
                ));
            }
            for _ in 0..rng.random_range(0..3) {
                body.push_str(&format!("import {}\n", IMPORTS.choose(rng).unwrap()));
            }
            body.push_str("x = 1\n");
            files.push((format!("{dir}/m{}.py", rng.random_range(0..4)), body));
        }
    }
    files.sort();
    files.dedup_by(|a, b| a.0 == b.0);
    files
}

fn write_project(root: &Path, files: &[(String, String)]) {
    for (path, body) in files {
        common::write(root, path.trim_start_matches('/'), body);
    }
}

fn hierarchy_fuzz() -> Outcome {
    let corpus = Corpus::bundled();
    let index = PackageLicenseIndex::bundled();
    let opts = ScanOptions::default();
    let mut rng = StdRng::seed_from_u64(SEED ^ 2);
    let mut nodes = 0;
    for case in 0..1000 {
        let files = random_project(&mut rng, &corpus);
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        write_project(&a, &files);
        let mut reversed = files.clone();
        reversed.reverse();
        write_project(&b, &reversed);

        let scan_a = scan_tree(&a, &index, &opts).map_err(|e| e.to_string())?;
        let scan_b = scan_tree(&b, &index, &opts).map_err(|e| e.to_string())?;
        ensure(
            scan_a.licenses == scan_b.licenses && scan_a.warnings == scan_b.warnings,
            || format!("case {case}: scans differ"),
        )?;
        let tree = build_hierarchy(&scan_a.licenses);
        ensure(tree == build_hierarchy(&scan_b.licenses), || {
            format!("case {case}: trees differ")
        })?;
        check_tree(&tree, &scan_a.licenses).map_err(|e| format!("case {case}: {e} in {files:?}"))?;
        nodes += tree.len();
    }
    Ok(format!("1000 trees, {nodes} nodes, 0 violations"))
}

fn scenarios() -> Outcome {
    let g = GroupKey::work(Sublicense);
    let parent = TermMatrix::new("p").with(g.clone(), Stance::new(Can));
    let child = TermMatrix::new("c").with(g.clone(), Stance::new(Cannot));
    let found = check_pair(&parent, &child);
    ensure(found.len() == 1 && found[0].group == g && !found[0].conditional, || {
        format!("{found:?}")
    })?;

    let contact = GroupKey::work(ContactAuthor);
    let must = TermMatrix::new("a").with(contact.clone(), Stance::new(Must));
    let cannot = TermMatrix::new("b").with(contact.clone(), Stance::new(Cannot));
    let merged = merge_child_requirements(&[("/pkgA", &must), ("/pkgB", &cannot)]);
    ensure(merged.conflict, || "merge did not flag the conflict".into())?;

    let corpus = Corpus::bundled();
    let mut parents: Vec<TermMatrix> = [None, Some(Can), Some(Must), Some(Cannot)]
        .into_iter()
        .map(|a| match a {
            Some(a) => TermMatrix::new("parent").with(contact.clone(), Stance::new(a)),
            None => TermMatrix::new("parent"),
        })
        .collect();
    parents.extend(corpus.licenses().iter().map(|l| l.matrix.clone()));
    // The parent is the license being replaced, so it ranks candidates
    // but does not bound them.
    for p in &parents {
        let cs = resolve_constraints(None, &merged.requirements, &merged.conflict_groups)
            .ok_or("no constraint set for conflicting siblings")?;
        ensure(recommend_official(&cs, &corpus, p).is_empty(), || {
            "official license offered despite conflict".into()
        })?;
        let text = attach_exception(&cs, &generate_custom(&cs), &cs.exception_groups);
        let exceptions = text.split(EXCEPTIONS_HEADING).nth(1).unwrap_or_default();
        ensure(
            exceptions.contains("For files under /pkgA you must contact the author.")
                && exceptions.contains("For files under /pkgB you must not contact the author."),
            || format!("exception clauses missing:\n{text}"),
        )?;
    }

    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    common::write(root, "LICENSE", &common::license_text("MIT", "Project Owner"));
    common::write(
        root,
        "pkgA/LICENSE",
        "Copyright (c) 2020 A Vendor\n\nYou must contact the author of the software.\n",
    );
    common::write(
        root,
        "pkgB/LICENSE",
        "Copyright (c) 2020 B Vendor\n\nYou must not contact the author of the software.\n",
    );
    let a = common::run_analysis(root);
    let s = &a.resolution.suggestions;
    ensure(s.len() == 1 && s[0].kind == SuggestionKind::CustomWithException, || {
        format!("{s:?}")
    })?;
    ensure(a.resolution.post_check.passed, || {
        format!("{:?}", a.resolution.post_check)
    })?;
    Ok(format!(
        "sublicense flagged; exception license for {} parents and the MIT project",
        parents.len()
    ))
}

fn no_project_license() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    common::write(root, "a/LICENSE", &common::license_text("MIT", "A Person"));
    common::write(root, "b/LICENSE", &common::license_text("GPL-3.0", "B Person"));
    let a = common::run_analysis(root);
    ensure(!a.issues.is_empty(), || "no issues".into())?;
    ensure(
        a.issues.iter().all(|i| i.relation == IssueRelation::FirstLevelPair),
        || "an issue is not a first-level pair".into(),
    )?;
    ensure(
        a.issues
            .iter()
            .all(|i| i.parent_license.path != "/" && i.child_license.path != "/"),
        || "an issue touches the root".into(),
    )?;
    let pairs: BTreeSet<(&str, &str)> = a
        .issues
        .iter()
        .map(|i| (i.parent_license.license.as_str(), i.child_license.license.as_str()))
        .collect();
    Ok(format!("{} issues on pairs {pairs:?}", a.issues.len()))
}
