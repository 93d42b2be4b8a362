//! The bundled knowledge base of official licenses and the offline
//! package-to-license index.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::action::ActionCategory;
use crate::error::{Error, Result};
use crate::matrix::{GroupKey, Stance, TermMatrix};

const BUNDLED_CORPUS: &str = include_str!("../data/corpus/corpus.json");
const BUNDLED_INDEX: &str = include_str!("../data/package_index.json");

const BUNDLED_TEXTS: &[(&str, &str)] = &[
    ("texts/AGPL-3.0.txt", include_str!("../data/corpus/texts/AGPL-3.0.txt")),
    (
        "texts/Apache-2.0.txt",
        include_str!("../data/corpus/texts/Apache-2.0.txt"),
    ),
    (
        "texts/BSD-3-Clause.txt",
        include_str!("../data/corpus/texts/BSD-3-Clause.txt"),
    ),
    ("texts/GPL-3.0.txt", include_str!("../data/corpus/texts/GPL-3.0.txt")),
    ("texts/ISC.txt", include_str!("../data/corpus/texts/ISC.txt")),
    ("texts/LGPL-2.1.txt", include_str!("../data/corpus/texts/LGPL-2.1.txt")),
    ("texts/MIT.txt", include_str!("../data/corpus/texts/MIT.txt")),
    ("texts/MPL-2.0.txt", include_str!("../data/corpus/texts/MPL-2.0.txt")),
    (
        "texts/Unlicense.txt",
        include_str!("../data/corpus/texts/Unlicense.txt"),
    ),
    ("texts/ZPL-2.1.txt", include_str!("../data/corpus/texts/ZPL-2.1.txt")),
];

/// An official license whose terms are known ahead of time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OfficialLicense {
    pub spdx_id: String,
    pub name: String,
    pub text: String,
    pub matrix: TermMatrix,
    /// Attitude encoding over the 23 actions (see [`TermMatrix::vector`]).
    pub vector: [u8; 23],
}

/// On-disk form of the corpus document.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusFile {
    #[serde(default)]
    pub version: String,
    pub licenses: Vec<LicenseRecord>,
    #[serde(default)]
    pub aliases: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LicenseRecord {
    pub spdx_id: String,
    pub name: String,
    pub text_file: String,
    pub matrix: BTreeMap<String, Vec<Stance>>,
    pub vector: Vec<u8>,
}

impl LicenseRecord {
    /// Record for `matrix`, with its vector computed.
    pub fn from_matrix(spdx_id: &str, name: &str, text_file: &str, matrix: &TermMatrix) -> Self {
        Self {
            spdx_id: spdx_id.to_string(),
            name: name.to_string(),
            text_file: text_file.to_string(),
            matrix: matrix
                .groups
                .iter()
                .map(|(k, v)| (k.to_string(), v.iter().cloned().collect()))
                .collect(),
            vector: matrix.vector().to_vec(),
        }
    }
}

/// The loaded, validated corpus. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Corpus {
    version: String,
    licenses: Vec<OfficialLicense>,
    /// Normalized id, name or alias to index into `licenses`.
    names: BTreeMap<String, usize>,
}

fn normalize_name(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

fn corpus_error(license: &str, field: &str, message: impl Into<String>) -> Error {
    Error::Corpus {
        license: license.to_string(),
        field: field.to_string(),
        message: message.into(),
    }
}

impl Corpus {
    /// The corpus compiled into the library.
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_CORPUS, |file| {
            BUNDLED_TEXTS
                .iter()
                .find(|(name, _)| *name == file)
                .map(|(_, text)| (*text).to_string())
                .ok_or_else(|| format!("no bundled text `{file}`"))
        })
        .expect("bundled corpus is valid")
    }

    /// Loads a corpus document; `text_file` entries resolve relative to the
    /// document's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let json = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Self::from_json(&json, |file| {
            let p = dir.join(file);
            fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))
        })
    }

    /// Parses and validates a corpus document. `read_text` maps a
    /// `text_file` entry to the license text.
    pub fn from_json(json: &str, read_text: impl Fn(&str) -> Result<String, String>) -> Result<Self> {
        let file: CorpusFile =
            serde_json::from_str(json).map_err(|e| corpus_error("<document>", "<root>", e.to_string()))?;
        Self::from_file(file, read_text)
    }

    pub fn from_file(file: CorpusFile, read_text: impl Fn(&str) -> Result<String, String>) -> Result<Self> {
        if file.licenses.is_empty() {
            return Err(corpus_error("<document>", "licenses", "corpus holds no licenses"));
        }
        let mut seen = HashSet::new();
        let mut licenses = Vec::with_capacity(file.licenses.len());
        for record in file.licenses {
            let id = record.spdx_id.trim().to_string();
            if id.is_empty() {
                return Err(corpus_error("<unnamed>", "spdx_id", "empty identifier"));
            }
            if !seen.insert(id.to_lowercase()) {
                return Err(corpus_error(&id, "spdx_id", "duplicate identifier"));
            }
            let mut matrix = TermMatrix::new(&id);
            for (key, stances) in &record.matrix {
                let key: GroupKey = key
                    .parse()
                    .map_err(|e: crate::matrix::BadGroupKey| corpus_error(&id, "matrix", e.to_string()))?;
                if stances.is_empty() {
                    return Err(corpus_error(&id, "matrix", format!("group `{key}` has no attitude")));
                }
                for s in stances {
                    matrix.insert(key.clone(), s.clone());
                }
            }
            let vector = matrix.vector();
            if record.vector.len() != ActionCategory::ALL.len() {
                return Err(corpus_error(
                    &id,
                    "vector",
                    format!(
                        "expected {} components, found {}",
                        ActionCategory::ALL.len(),
                        record.vector.len()
                    ),
                ));
            }
            if let Some(bad) = record.vector.iter().find(|v| **v > 3) {
                return Err(corpus_error(&id, "vector", format!("component {bad} outside 0..=3")));
            }
            if record.vector != vector {
                return Err(corpus_error(&id, "vector", "does not match the matrix encoding"));
            }
            let text = read_text(&record.text_file).map_err(|e| corpus_error(&id, "text_file", e))?;
            licenses.push(OfficialLicense {
                spdx_id: id,
                name: record.name,
                text,
                matrix,
                vector,
            });
        }
        licenses.sort_by(|a, b| a.spdx_id.cmp(&b.spdx_id));

        let mut names = BTreeMap::new();
        for (i, l) in licenses.iter().enumerate() {
            names.insert(normalize_name(&l.spdx_id), i);
            names.entry(normalize_name(&l.name)).or_insert(i);
        }
        for (alias, target) in &file.aliases {
            let i = licenses
                .iter()
                .position(|l| l.spdx_id.eq_ignore_ascii_case(target))
                .ok_or_else(|| corpus_error(target, "aliases", format!("alias `{alias}` names an unknown license")))?;
            names.entry(normalize_name(alias)).or_insert(i);
        }
        Ok(Self {
            version: file.version,
            licenses,
            names,
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// Licenses ordered by identifier.
    pub fn licenses(&self) -> &[OfficialLicense] {
        &self.licenses
    }

    pub fn len(&self) -> usize {
        self.licenses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.licenses.is_empty()
    }

    /// Case-insensitive lookup by identifier, display name or alias.
    pub fn lookup(&self, hint: &str) -> Option<&OfficialLicense> {
        self.names.get(&normalize_name(hint)).map(|&i| &self.licenses[i])
    }

    /// The license whose full text matches `text` after whitespace
    /// normalization. Copyright lines are ignored on both sides.
    pub fn identify_text(&self, text: &str) -> Option<&OfficialLicense> {
        let wanted = normalize_text(text);
        if wanted.is_empty() {
            return None;
        }
        self.licenses.iter().find(|l| normalize_text(&l.text) == wanted)
    }

    /// The license named after "licensed under" or a similar phrase, as in
    /// `Licensed under the Apache License, Version 2.0 (the "License")`.
    pub fn identify_mention(&self, text: &str) -> Option<&OfficialLicense> {
        static RE: OnceLock<Regex> = OnceLock::new();
        let re = RE.get_or_init(|| {
            Regex::new(
                r"(?i)\b(?:licensed|released|distributed|available)\s+under\s+(?:the\s+)?(?:terms\s+of\s+(?:the\s+)?)?",
            )
            .expect("valid regex")
        });
        for m in re.find_iter(text) {
            let words: Vec<&str> = text[m.end()..].split_whitespace().take(8).collect();
            for n in (1..=words.len()).rev() {
                let phrase = words[..n].join(" ");
                let phrase = phrase.trim_end_matches(|c: char| !c.is_alphanumeric());
                if let Some(l) = self.lookup(phrase) {
                    return Some(l);
                }
            }
        }
        None
    }
}

fn normalize_text(text: &str) -> String {
    let kept: Vec<&str> = text
        .lines()
        .filter(|l| !l.trim_start().to_lowercase().starts_with("copyright"))
        .collect();
    normalize_name(&kept.join("\n"))
}

/// Offline map from package name to SPDX identifier.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PackageLicenseIndex {
    entries: BTreeMap<String, String>,
}

/// Package names compare case-insensitively with `-` and `_` equivalent.
fn package_key(name: &str) -> String {
    name.trim().to_lowercase().replace('_', "-")
}

impl PackageLicenseIndex {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_INDEX).expect("bundled package index is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let json = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&json)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let raw: BTreeMap<String, String> = serde_json::from_str(json)?;
        Ok(raw.into_iter().collect())
    }

    pub fn get(&self, package: &str) -> Option<&str> {
        self.entries.get(&package_key(package)).map(String::as_str)
    }

    pub fn contains(&self, package: &str) -> bool {
        self.entries.contains_key(&package_key(package))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Identifiers the corpus does not know. Packages under these licenses
    /// are reported but cannot be compared.
    pub fn external_ids(&self, corpus: &Corpus) -> BTreeSet<&str> {
        self.entries
            .values()
            .filter(|id| corpus.lookup(id).is_none())
            .map(String::as_str)
            .collect()
    }
}

impl FromIterator<(String, String)> for PackageLicenseIndex {
    fn from_iter<I: IntoIterator<Item = (String, String)>>(iter: I) -> Self {
        Self {
            entries: iter.into_iter().map(|(k, v)| (package_key(&k), v)).collect(),
        }
    }
}
