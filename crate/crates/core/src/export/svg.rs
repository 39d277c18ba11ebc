//! SVG rendering of [`layout_canvas`](super::layout_canvas).

use std::fmt::Write;

use crate::export::layout::{layout_canvas, CanvasGeometry, PlacedEdge, ELEMENT_HEIGHT};
use crate::model::{BusinessModel, RelationshipKind};

/// Escapes text for XML content and attribute values.
pub fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn to_svg(bm: &BusinessModel) -> String {
    render(bm, &layout_canvas(bm))
}

/// Stroke attributes, mirroring the DOT styles.
fn stroke(kind: RelationshipKind) -> &'static str {
    match kind {
        RelationshipKind::Supports => r##"stroke="#333" stroke-width="1.5" marker-end="url(#arrow-open)""##,
        RelationshipKind::Determines => {
            r##"stroke="#111" stroke-width="3" marker-end="url(#arrow-filled)""##
        }
        RelationshipKind::Affects => {
            r##"stroke="#333" stroke-width="1.5" stroke-dasharray="6 4" marker-end="url(#arrow-open)""##
        }
    }
}

fn path_data(edge: &PlacedEdge) -> String {
    let (x1, y1) = edge.points[0];
    let (x2, y2) = edge.points[edge.points.len() - 1];
    if edge.source == edge.target {
        // a loop over the top right corner of the element
        let r = ELEMENT_HEIGHT / 2.0;
        return format!("M {} {} a {r} {r} 0 1 1 {} {}", x1 + r, y1, -r, -r);
    }
    format!("M {x1} {y1} L {x2} {y2}")
}

pub fn render(bm: &BusinessModel, g: &CanvasGeometry) -> String {
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" data-bm="{}">"#,
        xml_escape(&bm.name),
        w = g.width,
        h = g.height
    )
    .unwrap();
    out.push_str(concat!(
        "  <defs>\n",
        "    <marker id=\"arrow-open\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\">",
        "<path d=\"M 0 0 L 10 5 L 0 10\" fill=\"none\" stroke=\"#333\"/></marker>\n",
        "    <marker id=\"arrow-filled\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\">",
        "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#111\"/></marker>\n",
        "  </defs>\n",
    ));

    out.push_str("  <g class=\"blocks\">\n");
    for block in &g.blocks {
        let r = block.rect;
        writeln!(
            out,
            r##"    <g class="block" data-block="{}"><rect x="{}" y="{}" width="{}" height="{}" fill="#fafafa" stroke="#999"/><text x="{}" y="{}" font-family="Helvetica" font-size="13" font-weight="bold">{}</text></g>"##,
            block.kind.abbrev(),
            r.x,
            r.y,
            r.width,
            r.height,
            r.x + 8.0,
            r.y + 18.0,
            xml_escape(block.kind.title())
        )
        .unwrap();
    }
    out.push_str("  </g>\n");

    out.push_str("  <g class=\"edges\" fill=\"none\">\n");
    for edge in &g.edges {
        writeln!(
            out,
            r#"    <path class="edge" data-kind="{}" data-rule="{}" data-source="{}" data-target="{}" d="{}" {}/>"#,
            edge.kind.verb(),
            edge.rule.as_str(),
            xml_escape(edge.source.as_str()),
            xml_escape(edge.target.as_str()),
            path_data(edge),
            stroke(edge.kind)
        )
        .unwrap();
    }
    out.push_str("  </g>\n");

    out.push_str("  <g class=\"elements\">\n");
    for e in &g.elements {
        let r = e.rect;
        let (cx, cy) = r.center();
        writeln!(
            out,
            r##"    <g class="element" data-kind="{}" data-id="{}" data-depth="{}"><rect x="{}" y="{}" width="{}" height="{}" rx="4" fill="#fff" stroke="#333"/><text x="{cx}" y="{}" text-anchor="middle" font-family="Helvetica" font-size="12">{}</text></g>"##,
            e.kind.abbrev(),
            xml_escape(e.id.as_str()),
            e.depth,
            r.x,
            r.y,
            r.width,
            r.height,
            cy + 4.0,
            xml_escape(&e.name)
        )
        .unwrap();
    }
    for o in &g.overflow {
        let (cx, cy) = o.rect.center();
        writeln!(
            out,
            r#"    <g class="overflow" data-block="{}" data-hidden="{}"><text x="{cx}" y="{}" text-anchor="middle" font-family="Helvetica" font-size="12">… +{} more</text></g>"#,
            o.kind.abbrev(),
            o.hidden,
            cy + 4.0,
            o.hidden
        )
        .unwrap();
    }
    out.push_str("  </g>\n");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ElementKind;

    #[test]
    fn empty_model_is_a_skeleton() {
        let svg = to_svg(&BusinessModel::new("B"));
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let blocks: Vec<_> = doc
            .descendants()
            .filter(|n| n.attribute("class") == Some("block"))
            .collect();
        assert_eq!(blocks.len(), 9);
        for b in &blocks {
            let label = b.descendants().find(|n| n.has_tag_name("text")).unwrap();
            assert!(!label.text().unwrap().is_empty());
        }
        assert!(doc.descendants().all(|n| n.attribute("class") != Some("element")));
    }

    #[test]
    fn names_are_escaped() {
        let mut bm = BusinessModel::new("<B & \"co\">");
        bm.add_element(ElementKind::KeyResource, "F", "R&D <lab>").unwrap();
        let svg = to_svg(&bm);
        let doc = roxmltree::Document::parse(&svg).unwrap();
        assert_eq!(doc.root_element().attribute("data-bm"), Some("<B & \"co\">"));
        let text = doc
            .descendants()
            .find(|n| n.attribute("data-id") == Some("F"))
            .and_then(|n| n.descendants().find(|t| t.has_tag_name("text")))
            .unwrap();
        assert_eq!(text.text(), Some("R&D <lab>"));
    }

    #[test]
    fn self_loop_is_an_arc() {
        let mut bm = BusinessModel::new("B");
        bm.add_element(ElementKind::KeyResource, "F", "F").unwrap();
        bm.add_relationship("F", "F", RelationshipKind::Supports, None).unwrap();
        let svg = to_svg(&bm);
        assert!(svg.contains("data-rule=\"DR1\""));
        assert!(svg.contains(" a 18 18 0 1 1 "));
    }
}
