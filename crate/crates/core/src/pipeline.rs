//! One analysis run: scan, hierarchy, term matrices, detection and
//! resolution.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use crate::compat::{detect, modifiable_set, IncompatibilityIssue, Interpreted};
use crate::corpus::{Corpus, PackageLicenseIndex};
use crate::error::Result;
use crate::extract::interpret;
use crate::matrix::TermMatrix;
use crate::resolve::{resolve_project, Preference, Resolution, ResolveSettings};
use crate::scan::{
    build_hierarchy, scan_tree, LicenseSource, LicenseTree, NodeId, RawLicense, ScanOptions, SourceKind,
};

#[derive(Debug, Clone, Default)]
pub struct AnalysisOptions {
    pub scan: ScanOptions,
    pub prefer: Preference,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub root: PathBuf,
    pub tree: LicenseTree,
    pub interpreted: Interpreted,
    pub issues: Vec<IncompatibilityIssue>,
    pub modifiable: BTreeSet<NodeId>,
    pub resolution: Resolution,
    pub warnings: Vec<String>,
}

/// How a license's terms were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identification {
    SpdxHint,
    FullText,
    Mention,
    Interpreted,
}

/// Term matrix of one found license. Known licenses take the reviewed
/// corpus matrix; anything else is interpreted and labelled
/// `custom:<path>` unless its terms equal a corpus license.
pub fn license_matrix(raw: &RawLicense, corpus: &Corpus) -> Option<(TermMatrix, Identification)> {
    let official = |l: &crate::corpus::OfficialLicense, how| {
        let mut m = l.matrix.clone();
        m.license_id = l.spdx_id.clone();
        Some((m, how))
    };
    if let Some(hint) = &raw.spdx_hint {
        if let Some(l) = corpus.lookup(hint) {
            return official(l, Identification::SpdxHint);
        }
    }
    if raw.source.kind == SourceKind::Referenced {
        return None;
    }
    if let Some(l) = corpus.identify_text(&raw.text) {
        return official(l, Identification::FullText);
    }
    if let Some(l) = corpus.identify_mention(&raw.text) {
        return official(l, Identification::Mention);
    }
    let mut m = interpret(&raw.text, &format!("custom:{}", raw.source.path));
    if m.is_empty() {
        return None;
    }
    if let Some(l) = corpus.licenses().iter().find(|l| l.matrix.same_terms(&m)) {
        m.license_id = l.spdx_id.clone();
    }
    Some((m, Identification::Interpreted))
}

/// Runs the whole analysis on a project directory.
pub fn analyze(root: &Path, corpus: &Corpus, index: &PackageLicenseIndex, opts: &AnalysisOptions) -> Result<Analysis> {
    let scanned = scan_tree(root, index, &opts.scan)?;
    let mut warnings = scanned.warnings;

    let mut kept = Vec::with_capacity(scanned.licenses.len());
    let mut matrices = Vec::with_capacity(scanned.licenses.len());
    for raw in scanned.licenses {
        match license_matrix(&raw, corpus) {
            Some((m, _)) => {
                kept.push(raw);
                matrices.push(m);
            }
            None => warnings.push(match &raw.spdx_hint {
                Some(id) => format!("license `{id}` at {} is not in the corpus; skipped", raw.source.path),
                None => format!("no license terms recognized at {}; skipped", raw.source.path),
            }),
        }
    }

    let tree = build_hierarchy(&kept);
    let by_source: HashMap<&LicenseSource, &TermMatrix> = kept.iter().map(|l| &l.source).zip(&matrices).collect();
    let mut interpreted = Interpreted::new();
    for (id, node) in tree.nodes().iter().enumerate() {
        for (i, l) in node.licenses.iter().enumerate() {
            interpreted.insert((id, i), by_source[&l.source].clone());
        }
    }

    let issues = detect(&tree, &interpreted)?;
    let modifiable = modifiable_set(&tree);
    let settings = ResolveSettings { prefer: opts.prefer };
    let resolution = resolve_project(&tree, &interpreted, &issues, &modifiable, corpus, &settings)?;
    Ok(Analysis {
        root: root.to_path_buf(),
        tree,
        interpreted,
        issues,
        modifiable,
        resolution,
        warnings,
    })
}
