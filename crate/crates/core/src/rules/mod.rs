//! Relationship policy, design rules, verb lexicon and validation.

mod check;
pub mod design_rules;
mod lexicon;
mod lint;
pub mod policy;

pub use check::{check_relationship, check_relationship_with, validate, validate_with, ValidateOptions};
pub use design_rules::{
    applicable_rules, crosscheck_with, edge_rule, governing_rule, rules_crosscheck, DesignRule, Disagreement,
    RuleConfig, RuleId, DESIGN_RULES,
};
pub use lexicon::{classify_verb, PHRASES};
pub use lint::{lint, lint_siblings};
pub use policy::{required_kind, PolicyEntry, PolicyError, RelationshipPolicy, ACTIVE_EDGES};

pub(crate) use check::vrin_misplaced;
