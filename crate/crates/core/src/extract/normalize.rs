//! Mapping tagged surface forms onto attitudes and action categories.

use crate::action::{is_qualifier, ActionCategory, DEFAULT_OBJECT};
use crate::attitude::Attitude;
use crate::extract::entities::{Entity, EntityKind};
use crate::extract::lexicon::{ActionSense, Lexicon};

/// Attitude of a tagged attitude entity. A negation earlier in the clause
/// turns a permission or an obligation into a prohibition.
pub fn normalize_attitude(entity: &Entity, negated: bool) -> Option<Attitude> {
    if entity.kind != EntityKind::Attitude {
        return None;
    }
    let attitude: Attitude = entity.label.parse().ok()?;
    Some(if negated { Attitude::Cannot } else { attitude })
}

fn sense_of(entity: &Entity) -> Option<ActionSense> {
    if entity.kind != EntityKind::Action {
        return None;
    }
    Some(match entity.label.strip_prefix('@') {
        Some(sense) => ActionSense::Generic(sense.to_string()),
        None => ActionSense::Direct(entity.label.parse().ok()?),
    })
}

/// Category of an action given the label of its object, if any.
pub fn classify_action(lexicon: &Lexicon, action: &Entity, object: Option<&str>) -> Option<ActionCategory> {
    let sense = sense_of(action)?;
    lexicon.resolve_sense(&sense, object).map(|(c, _)| c)
}

/// Like [`classify_action`], also reporting whether an object-specific
/// rule consumed the object.
pub fn classify_with_consumption(
    lexicon: &Lexicon,
    action: &Entity,
    object: Option<&str>,
) -> Option<(ActionCategory, bool)> {
    lexicon.resolve_sense(&sense_of(action)?, object)
}

/// Object qualifier kept on a regulation for an object label that was not
/// consumed by a rule.
pub fn qualifier_of(label: &str) -> &str {
    if is_qualifier(label) {
        label
    } else {
        DEFAULT_OBJECT
    }
}
