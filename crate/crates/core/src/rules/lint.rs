//! Advisory lints. Always warnings, never blocking.

use std::collections::BTreeMap;

use crate::diagnostic::Diagnostic;
use crate::model::{BusinessModel, ElementKind, RelationshipKind};

/// Lints for one business model (its own namespace only).
///
/// - `W101` element with no incident edge
/// - `W102` canvas block with no element
/// - `W103` revenue stream with nothing determining it
/// - `W104` value proposition not determined by any customer segment
/// - `W105` key resource without VRIN assessment
pub fn lint(bm: &BusinessModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let elements = bm.walk_elements();
    let kind_of = |id: &str| bm.resolve(id).map(|e| e.kind);

    for (element, _) in &elements {
        let id = element.id.as_str();
        let incident = bm
            .relationships
            .iter()
            .any(|r| r.source.as_str() == id || r.target.as_str() == id);
        if !incident {
            out.push(
                Diagnostic::warning(
                    "W101",
                    format!("`{id}` has no relationship to any other element"),
                )
                .with_span(element.span),
            );
        }
        let incoming_determines = |from: Option<ElementKind>| {
            bm.relationships.iter().any(|r| {
                r.target.as_str() == id
                    && r.kind == RelationshipKind::Determines
                    && from.is_none_or(|k| kind_of(r.source.as_str()) == Some(k))
            })
        };
        match element.kind {
            ElementKind::RevenueStream if !incoming_determines(None) => out.push(
                Diagnostic::warning(
                    "W103",
                    format!("revenue stream `{id}` is not determined by any element"),
                )
                .with_span(element.span)
                .with_hint("relate it to the customer segment or value proposition it comes from"),
            ),
            ElementKind::ValueProposition
                if !incoming_determines(Some(ElementKind::CustomerSegment)) =>
            {
                out.push(
                    Diagnostic::warning(
                        "W104",
                        format!("value proposition `{id}` is not determined by any customer segment"),
                    )
                    .with_span(element.span),
                )
            }
            ElementKind::KeyResource if element.vrin.is_none() => out.push(
                Diagnostic::warning(
                    "W105",
                    format!("key resource `{id}` has no VRIN assessment"),
                )
                .with_span(element.span)
                .with_hint("add `vrin <valuable> <rare> <inimitable> <non_substitutable>`"),
            ),
            _ => {}
        }
    }

    for kind in ElementKind::ALL {
        if !elements.iter().any(|(e, _)| e.kind == kind) {
            out.push(
                Diagnostic::warning(
                    "W102",
                    format!("business model \"{}\" has no {} ({})", bm.name, kind.title(), kind),
                )
                .with_span(bm.span),
            );
        }
    }
    out
}

/// `W106`: elements with the same display name in sibling business models
/// are candidates for a shared resource.
pub fn lint_siblings(siblings: &[BusinessModel]) -> Vec<Diagnostic> {
    let mut by_name: BTreeMap<(&str, ElementKind), Vec<usize>> = BTreeMap::new();
    for (i, bm) in siblings.iter().enumerate() {
        for (e, _) in bm.walk_elements() {
            let owners = by_name.entry((e.name.as_str(), e.kind)).or_default();
            if owners.last() != Some(&i) {
                owners.push(i);
            }
        }
    }
    let mut out = Vec::new();
    for ((name, kind), owners) in by_name {
        if owners.len() < 2 {
            continue;
        }
        let names: Vec<String> = owners
            .iter()
            .map(|&i| format!("\"{}\"", siblings[i].name))
            .collect();
        out.push(Diagnostic::warning(
            "W106",
            format!(
                "{kind} \"{name}\" appears in business models {}; consider whether it is one shared element",
                names.join(", ")
            ),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ElementKind::*;
    use crate::model::Vrin;

    fn codes(d: &[Diagnostic]) -> Vec<&str> {
        d.iter().map(|d| d.code.as_str()).collect()
    }

    #[test]
    fn unconnected_element() {
        let mut bm = BusinessModel::new("BM");
        bm.add_element(Channel, "Shop", "Shop").unwrap();
        let d = lint(&bm);
        assert!(codes(&d).contains(&"W101"));
        assert!(d.iter().all(|d| !d.is_error()));
    }

    #[test]
    fn revenue_without_determines() {
        let mut bm = BusinessModel::new("BM");
        bm.add_element(RevenueStream, "Sales", "Sales").unwrap();
        bm.add_element(KeyResource, "Brand", "Brand").unwrap().vrin = Some(Vrin::default());
        bm.add_relationship("Brand", "Sales", RelationshipKind::Affects, None)
            .unwrap();
        let d = lint(&bm);
        assert_eq!(codes(&d).iter().filter(|c| **c == "W103").count(), 1);
        assert!(!codes(&d).contains(&"W105"));
    }

    #[test]
    fn key_resource_without_vrin() {
        let mut bm = BusinessModel::new("BM");
        bm.add_element(KeyResource, "Factory", "Factory").unwrap();
        assert!(codes(&lint(&bm)).contains(&"W105"));
    }

    #[test]
    fn value_proposition_needs_segment() {
        let mut bm = BusinessModel::new("BM");
        bm.add_element(ValueProposition, "P", "P").unwrap();
        bm.add_element(CustomerSegment, "C", "C").unwrap();
        assert!(codes(&lint(&bm)).contains(&"W104"));
        bm.add_relationship("C", "P", RelationshipKind::Determines, None)
            .unwrap();
        assert!(!codes(&lint(&bm)).contains(&"W104"));
    }

    #[test]
    fn empty_blocks_per_business_model() {
        let bm = BusinessModel::new("Empty");
        assert_eq!(codes(&lint(&bm)), vec!["W102"; 9]);
    }

    #[test]
    fn shared_names_across_siblings() {
        let mut a = BusinessModel::new("A");
        a.add_element(KeyResource, "Plant", "Plant").unwrap();
        let mut b = BusinessModel::new("B");
        b.add_element(KeyResource, "Factory", "Plant").unwrap();
        let d = lint_siblings(&[a, b]);
        assert_eq!(codes(&d), vec!["W106"]);
        assert!(d[0].message.contains("\"A\", \"B\""));
    }
}
