//! Licensor attitudes and the restrictiveness order over them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The stance a license takes towards an action.
///
/// Variants are declared in restrictiveness order, so the derived `Ord`
/// is the comparison used everywhere: `Can < Must < Cannot`. A license that
/// is silent on an action is treated as `Can`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Attitude {
    Can,
    Must,
    Cannot,
}

impl Attitude {
    pub const ALL: [Attitude; 3] = [Attitude::Can, Attitude::Must, Attitude::Cannot];

    pub fn restrictiveness(self) -> u8 {
        match self {
            Attitude::Can => 1,
            Attitude::Must => 2,
            Attitude::Cannot => 3,
        }
    }

    /// Vector component for an optional attitude: absent=0, CAN=1, MUST=2, CANNOT=3.
    pub fn encode(attitude: Option<Attitude>) -> u8 {
        attitude.map_or(0, Attitude::restrictiveness)
    }

    /// Effective attitude for comparison, with silence read as `Can`.
    pub fn effective(attitude: Option<Attitude>) -> Attitude {
        attitude.unwrap_or(Attitude::Can)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Attitude::Can => "CAN",
            Attitude::Must => "MUST",
            Attitude::Cannot => "CANNOT",
        }
    }
}

impl fmt::Display for Attitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown attitude label `{0}`")]
pub struct UnknownAttitude(pub String);

impl FromStr for Attitude {
    type Err = UnknownAttitude;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "CAN" => Ok(Attitude::Can),
            "MUST" => Ok(Attitude::Must),
            "CANNOT" => Ok(Attitude::Cannot),
            _ => Err(UnknownAttitude(s.to_string())),
        }
    }
}
