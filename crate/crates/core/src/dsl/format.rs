//! Canonical text rendering.

use std::fmt::Write;

use crate::model::{BusinessModel, Element, Enterprise, Relationship};

const INDENT: &str = "  ";

/// Canonical text: two-space indentation, elements grouped by kind (then
/// declaration order), relationships sorted by (source, target) in active
/// voice, nested business models last.
pub fn format(enterprise: &Enterprise) -> String {
    let mut out = String::new();
    write!(out, "enterprise {}", quote(&enterprise.name)).unwrap();
    if enterprise.business_models.is_empty() {
        out.push_str(" {}\n");
        return out;
    }
    out.push_str(" {\n");
    for (i, bm) in enterprise.business_models.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        business_model(&mut out, bm, 1);
    }
    out.push_str("}\n");
    out
}

fn pad(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str(INDENT);
    }
}

fn business_model(out: &mut String, bm: &BusinessModel, depth: usize) {
    pad(out, depth);
    write!(out, "business_model {}", quote(&bm.name)).unwrap();
    if bm.elements.is_empty() && bm.relationships.is_empty() && bm.business_models.is_empty() {
        out.push_str(" {}\n");
        return;
    }
    out.push_str(" {\n");

    let mut elements: Vec<&Element> = bm.elements.iter().collect();
    elements.sort_by_key(|e| e.kind);
    let mut relationships: Vec<&Relationship> = bm.relationships.iter().collect();
    relationships.sort_by(|a, b| (&a.source, &a.target).cmp(&(&b.source, &b.target)));

    let mut sections = 0;
    if !elements.is_empty() {
        sections += 1;
        for e in elements {
            element(out, e, depth + 1);
        }
    }
    if !relationships.is_empty() {
        if sections > 0 {
            out.push('\n');
        }
        sections += 1;
        for r in relationships {
            pad(out, depth + 1);
            write!(out, "{} {} {}", r.source, r.kind.verb(), r.target).unwrap();
            if let Some(label) = &r.label {
                write!(out, ", {}", quote(label)).unwrap();
            }
            out.push('\n');
        }
    }
    for nested in &bm.business_models {
        if sections > 0 {
            out.push('\n');
        }
        sections += 1;
        business_model(out, nested, depth + 1);
    }

    pad(out, depth);
    out.push_str("}\n");
}

fn element(out: &mut String, e: &Element, depth: usize) {
    pad(out, depth);
    write!(out, "{} {} {}", e.kind.keyword(), e.id, quote(&e.name)).unwrap();
    if e.description.is_none() && e.vrin.is_none() && e.children.is_empty() {
        out.push('\n');
        return;
    }
    out.push_str(" {\n");
    if let Some(desc) = &e.description {
        pad(out, depth + 1);
        writeln!(out, "desc {}", quote(desc)).unwrap();
    }
    if let Some(vrin) = e.vrin {
        pad(out, depth + 1);
        let flags: Vec<&str> = vrin
            .flags()
            .iter()
            .map(|b| if *b { "true" } else { "false" })
            .collect();
        writeln!(out, "vrin {}", flags.join(" ")).unwrap();
    }
    for child in &e.children {
        element(out, child, depth + 1);
    }
    pad(out, depth);
    out.push_str("}\n");
}

/// Double-quoted with `\"`, `\\` and `\n` escaped; nothing else.
pub fn quote(text: &str) -> String {
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
