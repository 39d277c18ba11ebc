//! Graphviz output.

use std::fmt::Write;

use crate::model::{BusinessModel, Element, RelationshipKind, SuperKind};

/// `(style, arrowhead)` per relationship kind. Shared with the SVG emitter.
pub fn edge_style(kind: RelationshipKind) -> (&'static str, &'static str) {
    match kind {
        RelationshipKind::Supports => ("solid", "vee"),
        RelationshipKind::Determines => ("bold", "normal"),
        RelationshipKind::Affects => ("dashed", "vee"),
    }
}

/// A quoted DOT id.
pub fn dot_id(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// One cluster per non-empty superkind, nodes in canonical order, edges
/// sorted by (source, target). Nested elements are linked to their parent
/// with a dotted, arrowless edge.
pub fn to_dot(bm: &BusinessModel) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", dot_id(&bm.name)).unwrap();
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box, fontname=\"Helvetica\"];\n");
    out.push_str("  edge [fontname=\"Helvetica\", fontsize=10];\n");

    let mut elements: Vec<(&Element, Option<&Element>)> = Vec::new();
    for top in &bm.elements {
        collect(top, None, &mut elements);
    }
    elements.sort_by_key(|(e, _)| e.kind);

    for sk in SuperKind::ALL {
        let members: Vec<&Element> = elements
            .iter()
            .map(|(e, _)| *e)
            .filter(|e| e.kind.super_kind() == sk)
            .collect();
        if members.is_empty() {
            continue;
        }
        writeln!(out, "  subgraph {} {{", dot_id(&format!("cluster_{}", sk.abbrev()))).unwrap();
        writeln!(out, "    label={};", dot_id(sk.title())).unwrap();
        for e in members {
            writeln!(
                out,
                "    {} [label={}];",
                dot_id(e.id.as_str()),
                dot_id(&format!("{}\n({})", e.name, e.kind.abbrev()))
            )
            .unwrap();
        }
        out.push_str("  }\n");
    }

    let mut relationships: Vec<_> = bm.relationships.iter().collect();
    relationships.sort_by(|a, b| (&a.source, &a.target).cmp(&(&b.source, &b.target)));
    for r in relationships {
        let (style, arrowhead) = edge_style(r.kind);
        let label = match &r.label {
            Some(label) => format!("{}: {}", r.kind.verb(), label),
            None => r.kind.verb().to_string(),
        };
        writeln!(
            out,
            "  {} -> {} [style={style}, arrowhead={arrowhead}, label={}];",
            dot_id(r.source.as_str()),
            dot_id(r.target.as_str()),
            dot_id(&label)
        )
        .unwrap();
    }

    let mut containment: Vec<(&Element, &Element)> = elements
        .iter()
        .filter_map(|(e, parent)| parent.map(|p| (p, *e)))
        .collect();
    containment.sort_by(|a, b| (&a.0.id, &a.1.id).cmp(&(&b.0.id, &b.1.id)));
    for (parent, child) in containment {
        writeln!(
            out,
            "  {} -> {} [style=dotted, arrowhead=none];",
            dot_id(parent.id.as_str()),
            dot_id(child.id.as_str())
        )
        .unwrap();
    }

    out.push_str("}\n");
    out
}

fn collect<'a>(e: &'a Element, parent: Option<&'a Element>, out: &mut Vec<(&'a Element, Option<&'a Element>)>) {
    out.push((e, parent));
    for child in &e.children {
        collect(child, Some(e), out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ElementKind;

    #[test]
    fn single_key_resource() {
        let mut bm = BusinessModel::new("B");
        bm.add_element(ElementKind::KeyResource, "F", "Factory").unwrap();
        let dot = to_dot(&bm);
        assert_eq!(dot.matches("subgraph").count(), 1);
        assert!(dot.contains("\"F\" [label=\"Factory\\n(KR)\"];"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn styles_and_quoting() {
        let mut bm = BusinessModel::new("say \"hi\"");
        bm.add_element(ElementKind::CustomerSegment, "C", "C").unwrap();
        bm.add_element(ElementKind::ValueProposition, "P", "P").unwrap();
        bm.add_relationship("C", "P", RelationshipKind::Determines, None).unwrap();
        let dot = to_dot(&bm);
        assert!(dot.starts_with("digraph \"say \\\"hi\\\"\" {"));
        assert!(dot.contains("\"C\" -> \"P\" [style=bold, arrowhead=normal, label=\"determines\"];"));
    }

    #[test]
    fn children_get_containment_edges() {
        let mut bm = BusinessModel::new("B");
        bm.add_element(ElementKind::KeyResource, "F", "Factory").unwrap();
        let child = Element::new(ElementKind::KeyResource, crate::model::ElementId::new("L").unwrap(), "Lathe");
        bm.nest_element("F", child).unwrap();
        let dot = to_dot(&bm);
        assert!(dot.contains("\"L\" [label=\"Lathe\\n(KR)\"];"));
        assert!(dot.contains("\"F\" -> \"L\" [style=dotted, arrowhead=none];"));
    }
}
