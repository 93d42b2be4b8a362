//! Regulations and the term matrix that groups them by action and object.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::action::{ActionCategory, DEFAULT_OBJECT};
use crate::attitude::Attitude;

/// An (action, object) pair. Regulations about the same pair form one group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupKey {
    pub action: ActionCategory,
    pub object: String,
}

impl GroupKey {
    pub fn new(action: ActionCategory, object: impl Into<String>) -> Self {
        Self {
            action,
            object: object.into(),
        }
    }

    /// Key with the default `work` object.
    pub fn work(action: ActionCategory) -> Self {
        Self::new(action, DEFAULT_OBJECT)
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.action, self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed group key `{0}`, expected `Action|object`")]
pub struct BadGroupKey(pub String);

impl FromStr for GroupKey {
    type Err = BadGroupKey;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (action, object) = s.split_once('|').ok_or_else(|| BadGroupKey(s.to_string()))?;
        let action = action.parse().map_err(|_| BadGroupKey(s.to_string()))?;
        let object = object.trim();
        if object.is_empty() {
            return Err(BadGroupKey(s.to_string()));
        }
        Ok(GroupKey::new(action, object))
    }
}

impl Serialize for GroupKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An attitude, optionally qualified by the condition under which it applies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Stance {
    pub attitude: Attitude,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
}

impl Stance {
    pub fn new(attitude: Attitude) -> Self {
        Self {
            attitude,
            condition: None,
        }
    }

    pub fn when(attitude: Attitude, condition: impl Into<String>) -> Self {
        Self {
            attitude,
            condition: Some(condition.into()),
        }
    }

    pub fn is_conditional(&self) -> bool {
        self.condition.is_some()
    }
}

impl fmt::Display for Stance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.condition {
            Some(c) => write!(f, "{} (if {})", self.attitude, c),
            None => write!(f, "{}", self.attitude),
        }
    }
}

/// One (action, object, attitude, condition) tuple read from a license.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regulation {
    pub action: ActionCategory,
    pub object: String,
    pub attitude: Attitude,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    /// Index of the sentence the regulation was read from.
    pub provenance: usize,
}

impl Regulation {
    pub fn key(&self) -> GroupKey {
        GroupKey::new(self.action, self.object.clone())
    }

    pub fn stance(&self) -> Stance {
        Stance {
            attitude: self.attitude,
            condition: self.condition.clone(),
        }
    }
}

/// All regulations interpreted from one license, grouped by (action, object).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermMatrix {
    pub license_id: String,
    pub groups: BTreeMap<GroupKey, BTreeSet<Stance>>,
}

impl TermMatrix {
    pub fn new(license_id: impl Into<String>) -> Self {
        Self {
            license_id: license_id.into(),
            groups: BTreeMap::new(),
        }
    }

    pub fn from_regulations<'a>(
        license_id: impl Into<String>,
        regulations: impl IntoIterator<Item = &'a Regulation>,
    ) -> Self {
        let mut matrix = Self::new(license_id);
        for r in regulations {
            matrix.insert(r.key(), r.stance());
        }
        matrix
    }

    /// Builder-style insertion, mostly for tests and fixtures.
    pub fn with(mut self, key: GroupKey, stance: Stance) -> Self {
        self.insert(key, stance);
        self
    }

    pub fn insert(&mut self, key: GroupKey, stance: Stance) {
        self.groups.entry(key).or_default().insert(stance);
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn keys(&self) -> impl Iterator<Item = &GroupKey> {
        self.groups.keys()
    }

    pub fn stances(&self, key: &GroupKey) -> Option<&BTreeSet<Stance>> {
        self.groups.get(key)
    }

    /// The single most restrictive stance of a group. Among equally
    /// restrictive stances the unconditional one wins.
    pub fn representative(&self, key: &GroupKey) -> Option<Stance> {
        let stances = self.groups.get(key)?;
        let top = stances.iter().map(|s| s.attitude).max()?;
        stances.iter().find(|s| s.attitude == top).cloned()
    }

    /// Most restrictive attitude of a group whose conditions hold under
    /// `holds`. Unconditional stances always apply.
    pub fn stance_in_world(&self, key: &GroupKey, holds: impl Fn(&str) -> bool) -> Option<&Stance> {
        self.groups
            .get(key)?
            .iter()
            .filter(|s| s.condition.as_deref().is_none_or(&holds))
            .max_by_key(|s| (s.attitude, std::cmp::Reverse(s.condition.is_some())))
    }

    /// Distinct condition texts that occur in a group.
    pub fn conditions<'a>(&'a self, key: &GroupKey) -> impl Iterator<Item = &'a str> + 'a {
        self.groups
            .get(key)
            .into_iter()
            .flatten()
            .filter_map(|s| s.condition.as_deref())
    }

    /// Attitude encoding over the 23 actions: the most restrictive code
    /// across every object of an action, 0 when the action is absent.
    pub fn vector(&self) -> [u8; 23] {
        let mut v = [0u8; 23];
        for (key, stances) in &self.groups {
            let code = stances
                .iter()
                .map(|s| Attitude::encode(Some(s.attitude)))
                .max()
                .unwrap_or(0);
            let slot = &mut v[key.action.index()];
            *slot = (*slot).max(code);
        }
        v
    }

    /// Union of regulations, used when several licenses govern one scope.
    pub fn merge_from(&mut self, other: &TermMatrix) {
        for (key, stances) in &other.groups {
            self.groups
                .entry(key.clone())
                .or_default()
                .extend(stances.iter().cloned());
        }
    }

    /// Flat list of regulations, one per stance.
    pub fn regulations(&self) -> Vec<Regulation> {
        self.groups
            .iter()
            .flat_map(|(key, stances)| {
                stances.iter().map(move |s| Regulation {
                    action: key.action,
                    object: key.object.clone(),
                    attitude: s.attitude,
                    condition: s.condition.clone(),
                    provenance: 0,
                })
            })
            .collect()
    }

    /// Group-wise equality, ignoring the license identifier.
    pub fn same_terms(&self, other: &TermMatrix) -> bool {
        self.groups == other.groups
    }
}

/// Cosine similarity of two attitude vectors; zero when either is all-zero.
pub fn cosine(a: &[u8; 23], b: &[u8; 23]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| f64::from(*x) * f64::from(*y)).sum();
    let na: f64 = a.iter().map(|x| f64::from(*x).powi(2)).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| f64::from(*x).powi(2)).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}
