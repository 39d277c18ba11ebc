//! Source tree to model. Two passes per business model: declare every
//! element (nested ones included), then resolve relationships. Passive
//! verbs are normalized by swapping endpoints.

use crate::diagnostic::Diagnostic;
use crate::dsl::parser::{BusinessModelNode, ElementNode, Item, SourceTree};
use crate::model::{BusinessModel, Element, ElementId, ElementKind, Enterprise, ModelError, Vrin};
use crate::rules::vrin_misplaced;

pub fn lower(tree: &SourceTree) -> (Enterprise, Vec<Diagnostic>) {
    let mut diagnostics = Vec::new();
    let Some(node) = &tree.enterprise else {
        return (Enterprise::default(), diagnostics);
    };
    let enterprise = Enterprise {
        name: node.name.value.clone(),
        business_models: node
            .business_models
            .iter()
            .map(|bm| lower_business_model(bm, &mut diagnostics))
            .collect(),
    };
    (enterprise, diagnostics)
}

fn lower_business_model(node: &BusinessModelNode, diags: &mut Vec<Diagnostic>) -> BusinessModel {
    let mut bm = BusinessModel::new(node.name.value.clone());
    bm.span = Some(node.span);

    for item in &node.items {
        if let Item::Element(e) = item {
            declare(&mut bm, e, None, diags);
        }
    }

    for item in &node.items {
        let Item::Relationship(r) = item else { continue };
        let (source, target) = if r.verb.value.passive {
            (&r.target, &r.source)
        } else {
            (&r.source, &r.target)
        };
        match bm.add_relationship(
            &source.value,
            &target.value,
            r.verb.value.kind,
            r.label.as_ref().map(|l| l.value.clone()),
        ) {
            Ok(rel) => rel.span = Some(r.span),
            Err(err) => {
                let span = match &err {
                    ModelError::UnresolvedReference(id) if *id == source.value => source.span,
                    ModelError::UnresolvedReference(_) => target.span,
                    _ => r.span,
                };
                diags.push(Diagnostic::from_model_error(&err, Some(span)));
            }
        }
    }

    for item in &node.items {
        if let Item::BusinessModel(nested) = item {
            let nested = lower_business_model(nested, diags);
            bm.business_models.push(nested);
        }
    }
    bm
}

/// Declares `node` (under `parent`, if any) and then its children. A
/// rejected element drops its whole subtree.
fn declare(
    bm: &mut BusinessModel,
    node: &ElementNode,
    parent: Option<&str>,
    diags: &mut Vec<Diagnostic>,
) {
    let id = match ElementId::new(node.id.value.clone()) {
        Ok(id) => id,
        Err(err) => {
            diags.push(Diagnostic::from_model_error(&err, Some(node.id.span)));
            return;
        }
    };
    let name = node
        .name
        .as_ref()
        .map(|n| n.value.clone())
        .unwrap_or_else(|| node.id.value.clone());
    let mut element = Element::new(node.kind.value, id, name).with_span(node.span);
    element.description = node.description.as_ref().map(|d| d.value.clone());
    if let Some(vrin) = &node.vrin {
        if node.kind.value == ElementKind::KeyResource {
            element.vrin = Some(Vrin::from_flags(vrin.value));
        } else {
            diags.push(vrin_misplaced(&element).with_span(Some(vrin.span)));
        }
    }
    let inserted = match parent {
        None => bm.push_element(element).map(|_| ()),
        Some(parent) => bm.nest_element(parent, element).map(|_| ()),
    };
    if let Err(err) = inserted {
        let span = match err {
            ModelError::KindMismatch { .. } => node.kind.span.join(node.id.span),
            _ => node.id.span,
        };
        diags.push(Diagnostic::from_model_error(&err, Some(span)));
        return;
    }
    for child in &node.children {
        declare(bm, child, Some(&node.id.value), diags);
    }
}
