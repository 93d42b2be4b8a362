//! The canonical action categories and object qualifiers used to group
//! license regulations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! categories {
    ($($variant:ident),+ $(,)?) => {
        /// One of the 23 kinds of things a licensee may, must, or must not do.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum ActionCategory {
            $($variant),+
        }

        impl ActionCategory {
            pub const ALL: [ActionCategory; 23] = [$(ActionCategory::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(ActionCategory::$variant => stringify!($variant)),+
                }
            }
        }

        impl FromStr for ActionCategory {
            type Err = UnknownCategory;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim() {
                    $(stringify!($variant) => Ok(ActionCategory::$variant),)+
                    other => Err(UnknownCategory(other.to_string())),
                }
            }
        }
    };
}

categories!(
    Distribute,
    Modify,
    CommercialUse,
    HoldLiable,
    IncludeCopyright,
    IncludeLicense,
    Sublicense,
    UseTrademark,
    PrivateUse,
    DiscloseSource,
    StateChanges,
    PlaceWarranty,
    IncludeNotice,
    IncludeOriginal,
    GiveCredit,
    Rename,
    Relicense,
    ContactAuthor,
    IncludeInstallInstructions,
    CompensateForDamages,
    StaticallyLink,
    PayAboveUseThreshold,
    UsePatentClaims,
);

impl ActionCategory {
    /// Position in [`ActionCategory::ALL`]; the index of this action's
    /// component in attitude vectors.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ActionCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown action category `{0}`")]
pub struct UnknownCategory(pub String);

/// Object qualifier used when a regulation names no specific object.
pub const DEFAULT_OBJECT: &str = "work";

/// The closed set of object qualifiers that distinguish regulation groups.
pub const OBJECT_QUALIFIERS: [&str; 6] = [
    "work",
    "source code",
    "binaries",
    "documentation",
    "trademark",
    "patent",
];

pub fn is_qualifier(label: &str) -> bool {
    OBJECT_QUALIFIERS.contains(&label)
}
