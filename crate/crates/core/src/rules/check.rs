use std::collections::HashSet;

use crate::diagnostic::Diagnostic;
use crate::model::{BusinessModel, Element, ElementKind, Enterprise, Relationship, RelationshipKind};
use crate::rules::design_rules::{governing_rule, RuleId};
use crate::rules::lint::{lint, lint_siblings};
use crate::rules::policy::{PolicyEntry, RelationshipPolicy};

/// Checks one edge against the normative policy.
///
/// Returns no diagnostics iff the edge is legal: a self edge must be
/// `supports`, any other edge must match a `Required` cell. A wrong kind
/// yields `E010`, a wrong direction `E011` with the reversed edge as hint.
pub fn check_relationship(rel: &Relationship, bm: &BusinessModel) -> Vec<Diagnostic> {
    check_relationship_with(RelationshipPolicy::normative(), rel, bm)
}

pub fn check_relationship_with(
    policy: &RelationshipPolicy,
    rel: &Relationship,
    bm: &BusinessModel,
) -> Vec<Diagnostic> {
    let (Some(source), Some(target)) = (bm.resolve(rel.source.as_str()), bm.resolve(rel.target.as_str()))
    else {
        return unresolved(rel, bm);
    };

    if rel.is_self_edge() {
        if rel.kind == RelationshipKind::Supports {
            return Vec::new();
        }
        return vec![Diagnostic::error(
            "E010",
            format!(
                "`{}` relates to itself with `{}`; an element's relationship to itself must be `supports`",
                source.id, rel.kind
            ),
        )
        .with_span(rel.span)
        .with_rule(RuleId::Dr1.as_str())
        .with_hint(format!("use: {} supports {}", source.id, target.id))];
    }

    match policy.entry(source.kind, target.kind) {
        PolicyEntry::Required(expected) if expected == rel.kind => Vec::new(),
        PolicyEntry::Required(expected) => vec![Diagnostic::error(
            "E010",
            format!(
                "relationship {} -> {} (`{}` -> `{}`) must be `{}`, found `{}`",
                source.kind, target.kind, source.id, target.id, expected, rel.kind
            ),
        )
        .with_span(rel.span)
        .with_rule(governing_rule(source.kind, target.kind).as_str())
        .with_hint(format!("use: {} {} {}", source.id, expected, target.id))],
        PolicyEntry::ReverseOnly(reverse) => vec![Diagnostic::error(
            "E011",
            format!(
                "no relationship may go from {} to {} (`{}` -> `{}`); only {} {} {} exists",
                source.kind, target.kind, source.id, target.id, target.kind, reverse, source.kind
            ),
        )
        .with_span(rel.span)
        .with_rule(governing_rule(target.kind, source.kind).as_str())
        .with_hint(format!(
            "reverse: {} {} {} ({} {} {})",
            target.kind, reverse, source.kind, target.id, reverse, source.id
        ))],
    }
}

fn unresolved(rel: &Relationship, bm: &BusinessModel) -> Vec<Diagnostic> {
    [&rel.source, &rel.target]
        .into_iter()
        .filter(|id| bm.resolve(id.as_str()).is_none())
        .map(|id| {
            Diagnostic::error(
                "E002",
                format!("unresolved reference `{id}` in business model \"{}\"", bm.name),
            )
            .with_span(rel.span)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidateOptions {
    pub lints: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { lints: true }
    }
}

/// Validates a whole enterprise with lints enabled.
pub fn validate(enterprise: &Enterprise) -> Vec<Diagnostic> {
    validate_with(enterprise, ValidateOptions::default())
}

/// Diagnostics in model order: for each business model (parents before
/// nested ones) structural checks, then edges in order, then lints.
/// Sibling-level lints follow the sibling group they concern.
pub fn validate_with(enterprise: &Enterprise, options: ValidateOptions) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if enterprise.business_models.is_empty() {
        out.push(Diagnostic::error(
            "E001",
            format!(
                "enterprise \"{}\" must own at least one business model",
                enterprise.name
            ),
        ));
    }
    for bm in &enterprise.business_models {
        validate_business_model(bm, options, &mut out);
    }
    if options.lints {
        out.extend(lint_siblings(&enterprise.business_models));
    }
    out
}

fn validate_business_model(bm: &BusinessModel, options: ValidateOptions, out: &mut Vec<Diagnostic>) {
    structural(bm, out);
    for rel in &bm.relationships {
        // unresolved endpoints were reported by the structural pass
        if bm.contains_id(rel.source.as_str()) && bm.contains_id(rel.target.as_str()) {
            out.extend(check_relationship(rel, bm));
        }
    }
    if options.lints {
        out.extend(lint(bm));
    }
    for nested in &bm.business_models {
        validate_business_model(nested, options, out);
    }
    if options.lints {
        out.extend(lint_siblings(&bm.business_models));
    }
}

/// Re-checks the construction invariants for models assembled directly
/// from data rather than through the construction methods.
fn structural(bm: &BusinessModel, out: &mut Vec<Diagnostic>) {
    let mut seen: HashSet<&str> = HashSet::new();
    fn children(parent: &Element, out: &mut Vec<Diagnostic>) {
        for child in &parent.children {
            if child.kind != parent.kind {
                out.push(
                    Diagnostic::error(
                        "E005",
                        format!(
                            "`{}` ({}) cannot be nested under `{}` ({}); children share their parent's kind",
                            child.id, child.kind, parent.id, parent.kind
                        ),
                    )
                    .with_span(child.span),
                );
            }
            children(child, out);
        }
    }
    for (element, _) in bm.walk_elements() {
        if !seen.insert(element.id.as_str()) {
            out.push(
                Diagnostic::error("E003", format!("duplicate element id `{}`", element.id))
                    .with_span(element.span),
            );
        }
        if element.vrin.is_some() && element.kind != ElementKind::KeyResource {
            out.push(vrin_misplaced(element));
        }
    }
    for element in &bm.elements {
        children(element, out);
    }
    let mut pairs = HashSet::new();
    for rel in &bm.relationships {
        for id in [&rel.source, &rel.target] {
            if !seen.contains(id.as_str()) {
                out.push(
                    Diagnostic::error(
                        "E002",
                        format!("unresolved reference `{id}` in business model \"{}\"", bm.name),
                    )
                    .with_span(rel.span),
                );
            }
        }
        if !pairs.insert((rel.source.as_str(), rel.target.as_str())) {
            out.push(
                Diagnostic::error(
                    "E013",
                    format!(
                        "a relationship from `{}` to `{}` already exists",
                        rel.source, rel.target
                    ),
                )
                .with_span(rel.span),
            );
        }
    }
}

pub(crate) fn vrin_misplaced(element: &Element) -> Diagnostic {
    Diagnostic::error(
        "E012",
        format!(
            "`{}` is a {}; VRIN flags apply to key resources only",
            element.id, element.kind
        ),
    )
    .with_span(element.span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ElementKind::*;
    use crate::model::RelationshipKind::*;

    fn two(src: ElementKind, dst: ElementKind, kind: RelationshipKind) -> BusinessModel {
        let mut bm = BusinessModel::new("BM");
        bm.add_element(src, "S", "S").unwrap();
        bm.add_element(dst, "T", "T").unwrap();
        bm.add_relationship("S", "T", kind, None).unwrap();
        bm
    }

    fn codes(d: &[Diagnostic]) -> Vec<(&str, Vec<&str>)> {
        d.iter()
            .map(|d| (d.code.as_str(), d.rule_refs.iter().map(String::as_str).collect()))
            .collect()
    }

    #[test]
    fn wrong_kind_cites_dr3() {
        let bm = two(CustomerSegment, ValueProposition, Supports);
        let d = check_relationship(&bm.relationships[0], &bm);
        assert_eq!(codes(&d), vec![("E010", vec!["DR3"])]);
        assert!(d[0].message.contains("must be `determines`"));
    }

    #[test]
    fn legal_edge() {
        let bm = two(KeyResource, KeyActivity, Supports);
        assert!(check_relationship(&bm.relationships[0], &bm).is_empty());
    }

    #[test]
    fn wrong_direction_hints_reverse() {
        let bm = two(ValueProposition, CustomerSegment, Determines);
        let d = check_relationship(&bm.relationships[0], &bm);
        assert_eq!(codes(&d), vec![("E011", vec!["DR3"])]);
        assert!(d[0]
            .fix_hint
            .as_deref()
            .unwrap()
            .starts_with("reverse: CS determines VP"));
    }

    #[test]
    fn direction_rejected_even_when_kind_matches() {
        // KR -> KP supports would satisfy DR2 but the table stores KP -> KR
        let bm = two(KeyResource, KeyPartnership, Supports);
        let d = check_relationship(&bm.relationships[0], &bm);
        assert_eq!(codes(&d), vec![("E011", vec!["DR2"])]);
    }

    #[test]
    fn self_edge() {
        let mut bm = BusinessModel::new("BM");
        bm.add_element(RevenueStream, "R", "R").unwrap();
        bm.add_relationship("R", "R", Affects, None).unwrap();
        let d = check_relationship(&bm.relationships[0], &bm);
        assert_eq!(codes(&d), vec![("E010", vec!["DR1"])]);
        bm.relationships[0].kind = Supports;
        assert!(check_relationship(&bm.relationships[0], &bm).is_empty());
    }

    #[test]
    fn empty_enterprise() {
        let d = validate(&Enterprise::new("Empty"));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, "E001");
    }

    #[test]
    fn structural_checks_on_raw_data() {
        let mut bm = BusinessModel::new("BM");
        bm.add_element(KeyResource, "A", "A").unwrap();
        bm.add_element(KeyActivity, "B", "B").unwrap();
        // bypass the construction methods
        bm.elements.push(bm.elements[0].clone());
        bm.relationships.push(Relationship::new(
            crate::model::ElementId::new("A").unwrap(),
            crate::model::ElementId::new("Ghost").unwrap(),
            Supports,
        ));
        bm.relationships.push(Relationship::new(
            crate::model::ElementId::new("A").unwrap(),
            crate::model::ElementId::new("B").unwrap(),
            Supports,
        ));
        bm.relationships.push(bm.relationships[1].clone());
        bm.elements[1].vrin = Some(Default::default());
        bm.elements[0]
            .children
            .push(crate::model::Element::new(Channel, crate::model::ElementId::new("C").unwrap(), "C"));
        let mut e = Enterprise::new("E");
        e.business_models.push(bm);
        let errors: Vec<_> = validate_with(&e, ValidateOptions { lints: false })
            .into_iter()
            .map(|d| d.code)
            .collect();
        assert_eq!(errors, ["E012", "E003", "E005", "E002", "E013"]);
    }
}
