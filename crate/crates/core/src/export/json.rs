//! Canonical JSON interchange.
//!
//! ```text
//! { "format": "bmc-model", "version": 1,
//!   "enterprise": { "name": str, "business_models": [ BM ] } }
//! BM := { "name", "elements": [Element], "relationships": [Rel], "business_models"?: [BM] }
//! Element := { "id", "kind", "name", "desc"?, "vrin"?: [bool; 4], "children"?: [Element] }
//! Rel := { "source", "target", "kind": "supports"|"determines"|"affects", "label"? }
//! ```
//!
//! Keys are emitted in this order. Unknown keys are rejected.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::diagnostic::{offset_of, Diagnostic};
use crate::model::{
    BusinessModel, Element, ElementId, ElementKind, Enterprise, ModelError, RelationshipKind, Span,
    Vrin,
};
use crate::rules::vrin_misplaced;

pub const FORMAT_TAG: &str = "bmc-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format: String,
    version: u32,
    enterprise: EnterpriseDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnterpriseDoc {
    name: String,
    business_models: Vec<BusinessModelDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BusinessModelDoc {
    name: String,
    elements: Vec<ElementDoc>,
    relationships: Vec<RelationshipDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    business_models: Vec<BusinessModelDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    id: String,
    kind: KindDoc,
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    desc: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vrin: Option<[bool; 4]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<ElementDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationshipDoc {
    source: String,
    target: String,
    kind: RelKindDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum KindDoc {
    KeyResource,
    KeyActivity,
    KeyPartnership,
    CustomerSegment,
    ValueProposition,
    Channel,
    CustomerRelationship,
    RevenueStream,
    CostStructure,
}

impl From<ElementKind> for KindDoc {
    fn from(k: ElementKind) -> Self {
        match k {
            ElementKind::KeyResource => KindDoc::KeyResource,
            ElementKind::KeyActivity => KindDoc::KeyActivity,
            ElementKind::KeyPartnership => KindDoc::KeyPartnership,
            ElementKind::CustomerSegment => KindDoc::CustomerSegment,
            ElementKind::ValueProposition => KindDoc::ValueProposition,
            ElementKind::Channel => KindDoc::Channel,
            ElementKind::CustomerRelationship => KindDoc::CustomerRelationship,
            ElementKind::RevenueStream => KindDoc::RevenueStream,
            ElementKind::CostStructure => KindDoc::CostStructure,
        }
    }
}

impl From<KindDoc> for ElementKind {
    fn from(k: KindDoc) -> Self {
        match k {
            KindDoc::KeyResource => ElementKind::KeyResource,
            KindDoc::KeyActivity => ElementKind::KeyActivity,
            KindDoc::KeyPartnership => ElementKind::KeyPartnership,
            KindDoc::CustomerSegment => ElementKind::CustomerSegment,
            KindDoc::ValueProposition => ElementKind::ValueProposition,
            KindDoc::Channel => ElementKind::Channel,
            KindDoc::CustomerRelationship => ElementKind::CustomerRelationship,
            KindDoc::RevenueStream => ElementKind::RevenueStream,
            KindDoc::CostStructure => ElementKind::CostStructure,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RelKindDoc {
    Supports,
    Determines,
    Affects,
}

impl From<RelationshipKind> for RelKindDoc {
    fn from(k: RelationshipKind) -> Self {
        match k {
            RelationshipKind::Supports => RelKindDoc::Supports,
            RelationshipKind::Determines => RelKindDoc::Determines,
            RelationshipKind::Affects => RelKindDoc::Affects,
        }
    }
}

impl From<RelKindDoc> for RelationshipKind {
    fn from(k: RelKindDoc) -> Self {
        match k {
            RelKindDoc::Supports => RelationshipKind::Supports,
            RelKindDoc::Determines => RelationshipKind::Determines,
            RelKindDoc::Affects => RelationshipKind::Affects,
        }
    }
}

fn element_doc(e: &Element) -> ElementDoc {
    ElementDoc {
        id: e.id.to_string(),
        kind: e.kind.into(),
        name: e.name.clone(),
        desc: e.description.clone(),
        vrin: e.vrin.map(Vrin::flags),
        children: e.children.iter().map(element_doc).collect(),
    }
}

fn business_model_doc(bm: &BusinessModel) -> BusinessModelDoc {
    BusinessModelDoc {
        name: bm.name.clone(),
        elements: bm.elements.iter().map(element_doc).collect(),
        relationships: bm
            .relationships
            .iter()
            .map(|r| RelationshipDoc {
                source: r.source.to_string(),
                target: r.target.to_string(),
                kind: r.kind.into(),
                label: r.label.clone(),
            })
            .collect(),
        business_models: bm.business_models.iter().map(business_model_doc).collect(),
    }
}

fn document(enterprise: &Enterprise) -> Document {
    Document {
        format: FORMAT_TAG.to_string(),
        version: FORMAT_VERSION,
        enterprise: EnterpriseDoc {
            name: enterprise.name.clone(),
            business_models: enterprise
                .business_models
                .iter()
                .map(business_model_doc)
                .collect(),
        },
    }
}

/// Pretty-printed (two-space) with a trailing newline.
pub fn to_json(enterprise: &Enterprise) -> String {
    let mut text = serde_json::to_string_pretty(&document(enterprise)).expect("plain data");
    text.push('\n');
    text
}

/// The same document as a JSON value, for embedding in responses.
pub fn to_json_value(enterprise: &Enterprise) -> serde_json::Value {
    serde_json::to_value(document(enterprise)).expect("plain data")
}

/// Deserializes `text` strictly. Any failure, including trailing
/// characters, becomes one `E007` with a `$`-rooted path and a span.
pub fn parse_json_as<T: DeserializeOwned>(text: &str) -> Result<T, Diagnostic> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = json_path(&err.path().to_string());
        schema_error(text, &path, err.inner())
    })?;
    de.end().map_err(|err| schema_error(text, "$", &err))?;
    Ok(value)
}

fn schema_error(text: &str, path: &str, err: &serde_json::Error) -> Diagnostic {
    let span = (err.line() > 0).then(|| {
        // serde_json reports the column just past the offending character
        let start = offset_of(text, err.line(), err.column().saturating_sub(1).max(1));
        let width = text[start..].chars().next().map_or(0, char::len_utf8);
        Span::new(start, start + width)
    });
    let message = strip_position(&err.to_string());
    Diagnostic::error("E007", format!("schema violation at `{path}`: {message}")).with_span(span)
}

/// Parses and lowers a JSON document. Schema violations are `E007` with a
/// `$`-rooted path; model-level problems use the same codes as the DSL.
pub fn from_json(text: &str) -> (Enterprise, Vec<Diagnostic>) {
    let doc: Document = match parse_json_as(text) {
        Ok(doc) => doc,
        Err(d) => return (Enterprise::default(), vec![d]),
    };

    let mut diags = Vec::new();
    if doc.format != FORMAT_TAG {
        diags.push(Diagnostic::error(
            "E007",
            format!(
                "schema violation at `$.format`: expected \"{FORMAT_TAG}\", found \"{}\"",
                doc.format
            ),
        ));
    }
    if doc.version != FORMAT_VERSION {
        diags.push(Diagnostic::error(
            "E007",
            format!(
                "schema violation at `$.version`: expected {FORMAT_VERSION}, found {}",
                doc.version
            ),
        ));
    }
    let enterprise = Enterprise {
        name: doc.enterprise.name,
        business_models: doc
            .enterprise
            .business_models
            .iter()
            .enumerate()
            .map(|(i, bm)| {
                lower_business_model(bm, &format!("$.enterprise.business_models[{i}]"), &mut diags)
            })
            .collect(),
    };
    (enterprise, diags)
}

fn json_path(serde_path: &str) -> String {
    if serde_path == "." || serde_path.is_empty() {
        "$".to_string()
    } else {
        format!("$.{serde_path}")
    }
}

/// serde_json appends " at line L column C"; the span carries that.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

fn lower_business_model(doc: &BusinessModelDoc, path: &str, diags: &mut Vec<Diagnostic>) -> BusinessModel {
    let mut bm = BusinessModel::new(doc.name.clone());
    for (i, e) in doc.elements.iter().enumerate() {
        declare(&mut bm, e, None, &format!("{path}.elements[{i}]"), diags);
    }
    for (i, r) in doc.relationships.iter().enumerate() {
        if let Err(err) = bm.add_relationship(&r.source, &r.target, r.kind.into(), r.label.clone()) {
            diags.push(at_path(&err, &format!("{path}.relationships[{i}]")));
        }
    }
    for (i, nested) in doc.business_models.iter().enumerate() {
        let nested = lower_business_model(nested, &format!("{path}.business_models[{i}]"), diags);
        bm.business_models.push(nested);
    }
    bm
}

fn at_path(err: &ModelError, path: &str) -> Diagnostic {
    Diagnostic::error(err.code(), format!("{err} (at `{path}`)"))
}

fn declare(
    bm: &mut BusinessModel,
    doc: &ElementDoc,
    parent: Option<&str>,
    path: &str,
    diags: &mut Vec<Diagnostic>,
) {
    let id = match ElementId::new(doc.id.clone()) {
        Ok(id) => id,
        Err(err) => {
            diags.push(at_path(&err, &format!("{path}.id")));
            return;
        }
    };
    let mut element = Element::new(doc.kind.into(), id, doc.name.clone());
    element.description = doc.desc.clone();
    if let Some(flags) = doc.vrin {
        if element.kind == ElementKind::KeyResource {
            element.vrin = Some(Vrin::from_flags(flags));
        } else {
            let d = vrin_misplaced(&element);
            diags.push(Diagnostic {
                message: format!("{} (at `{path}.vrin`)", d.message),
                ..d
            });
        }
    }
    let inserted = match parent {
        None => bm.push_element(element).map(|_| ()),
        Some(parent) => bm.nest_element(parent, element).map(|_| ()),
    };
    if let Err(err) = inserted {
        diags.push(at_path(&err, path));
        return;
    }
    for (i, child) in doc.children.iter().enumerate() {
        declare(bm, child, Some(&doc.id), &format!("{path}.children[{i}]"), diags);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_enterprise_round_trips() {
        let e = Enterprise::new("Nobody");
        let text = to_json(&e);
        let (back, diags) = from_json(&text);
        assert!(diags.is_empty());
        assert_eq!(back, e);
    }

    #[test]
    fn key_order_is_fixed() {
        let mut bm = BusinessModel::new("B");
        bm.add_element(ElementKind::KeyResource, "F", "Factory").unwrap();
        let mut e = Enterprise::new("E");
        e.business_models.push(bm);
        let text = to_json(&e);
        let order: Vec<usize> = ["\"format\"", "\"version\"", "\"enterprise\"", "\"id\"", "\"kind\"", "\"name\": \"Factory\"", "\"relationships\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);
        assert!(!text.contains("\"children\""));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn bad_kind_reports_path() {
        let text = r#"{"format":"bmc-model","version":1,"enterprise":{"name":"E","business_models":[
            {"name":"B","elements":[{"id":"A","kind":"channelz","name":"A"}],"relationships":[]}]}}"#;
        let (_, diags) = from_json(text);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, "E007");
        assert!(
            diags[0]
                .message
                .contains("`$.enterprise.business_models[0].elements[0].kind`"),
            "{}",
            diags[0].message
        );
        let span = diags[0].span.unwrap();
        assert!(span.end <= text.len());
    }

    #[test]
    fn unknown_key_rejected() {
        let text = r#"{"format":"bmc-model","version":1,"enterprise":{"name":"E","business_models":[],"owner":"me"}}"#;
        let (_, diags) = from_json(text);
        assert_eq!(diags[0].code, "E007");
        assert!(diags[0].message.contains("`$.enterprise"), "{}", diags[0].message);
        assert!(diags[0].message.contains("owner"));
    }

    #[test]
    fn wrong_tag_and_model_errors() {
        let text = r#"{"format":"bmc","version":2,"enterprise":{"name":"E","business_models":[
            {"name":"B","elements":[{"id":"A","kind":"channel","name":"A","vrin":[true,true,true,true]},
                                    {"id":"A","kind":"channel","name":"dup"}],
             "relationships":[{"source":"A","target":"Z","kind":"supports"}]}]}}"#;
        let (e, diags) = from_json(text);
        let codes: Vec<_> = diags.iter().map(|d| d.code.as_str()).collect();
        assert_eq!(codes, ["E007", "E007", "E012", "E003", "E002"]);
        assert!(diags[4].message.contains("$.enterprise.business_models[0].relationships[0]"));
        assert_eq!(e.business_models[0].elements.len(), 1);
    }

    #[test]
    fn malformed_json_has_span() {
        let text = "{\n  \"format\": \"bmc-model\",\n  oops\n}";
        let (_, diags) = from_json(text);
        assert_eq!(diags[0].code, "E007");
        let span = diags[0].span.unwrap();
        assert_eq!(crate::diagnostic::line_col(text, span.start).0, 3);
    }
}
