//! Verb phrases classified into the three relationship kinds.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::model::RelationshipKind::{self, *};

/// Each phrase once, lowercase, with its kind. Column headings are included.
pub const PHRASES: &[(&str, RelationshipKind)] = &[
    ("supports", Supports),
    ("is supported", Supports),
    ("ensures communication to", Supports),
    ("is based on", Supports),
    ("is delivered by", Supports),
    ("is ensured by", Supports),
    ("is sustained by", Supports),
    ("may be acquired from", Supports),
    ("may be ensured by", Supports),
    ("may be the source of", Supports),
    ("may ensure", Supports),
    ("reaches", Supports),
    ("sustains", Supports),
    ("performs", Supports),
    ("builds on", Supports),
    ("provides", Supports),
    ("enables", Supports),
    ("is required by", Supports),
    ("established through", Supports),
    ("determines", Determines),
    ("is created for", Determines),
    ("generates", Determines),
    ("is determined by", Determines),
    ("is generated by", Determines),
    ("is generated from", Determines),
    ("addresses", Determines),
    ("targets", Determines),
    ("affects", Affects),
    ("allows to earn", Affects),
    ("contribute to", Affects),
    ("influences", Affects),
    ("is affected by", Affects),
    ("is earned thanks to", Affects),
    ("is influenced by", Affects),
];

fn lexicon() -> &'static HashMap<&'static str, RelationshipKind> {
    static LEXICON: OnceLock<HashMap<&'static str, RelationshipKind>> = OnceLock::new();
    LEXICON.get_or_init(|| PHRASES.iter().copied().collect())
}

/// Exact-phrase, case-insensitive lookup. Surrounding whitespace is ignored.
pub fn classify_verb(phrase: &str) -> Option<RelationshipKind> {
    lexicon().get(phrase.trim().to_lowercase().as_str()).copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        assert_eq!(classify_verb("reaches"), Some(Supports));
        assert_eq!(classify_verb("generates"), Some(Determines));
        assert_eq!(classify_verb("influences"), Some(Affects));
        assert_eq!(classify_verb("purchases"), None);
        assert_eq!(classify_verb("Is Required By"), Some(Supports));
        assert_eq!(classify_verb("may be acquired from"), Some(Supports));
        assert_eq!(classify_verb("builds on"), Some(Supports));
        assert_eq!(classify_verb("established through"), Some(Supports));
        // no stemming or partial matches
        assert_eq!(classify_verb("generate"), None);
        assert_eq!(classify_verb("may be acquired"), None);
    }

    #[test]
    fn phrases_unique() {
        assert_eq!(lexicon().len(), PHRASES.len());
        for (p, _) in PHRASES {
            assert_eq!(*p, p.to_lowercase());
        }
    }
}
