//! The typed data model: element and relationship kinds, the superkind
//! taxonomy, and the enterprise / business model / element containment tree.
//!
//! Construction through [`BusinessModel`] methods is unchecked with respect to
//! the relationship policy. It only enforces the structural invariants that
//! every later pass relies on (well-formed ids, unique ids per namespace,
//! resolvable edge endpoints, one edge per ordered pair, same-kind nesting).

use std::fmt;

use thiserror::Error;

/// Byte range into a source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    /// Smallest span covering both.
    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// The nine canvas building blocks, in their canonical listing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
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

impl ElementKind {
    pub const ALL: [ElementKind; 9] = [
        ElementKind::KeyResource,
        ElementKind::KeyActivity,
        ElementKind::KeyPartnership,
        ElementKind::CustomerSegment,
        ElementKind::ValueProposition,
        ElementKind::Channel,
        ElementKind::CustomerRelationship,
        ElementKind::RevenueStream,
        ElementKind::CostStructure,
    ];

    /// Position in [`ElementKind::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    /// Short form: `KR`, `KA`, `KP`, `CS`, `VP`, `CH`, `CR`, `R$`, `C$`.
    pub fn abbrev(self) -> &'static str {
        match self {
            ElementKind::KeyResource => "KR",
            ElementKind::KeyActivity => "KA",
            ElementKind::KeyPartnership => "KP",
            ElementKind::CustomerSegment => "CS",
            ElementKind::ValueProposition => "VP",
            ElementKind::Channel => "CH",
            ElementKind::CustomerRelationship => "CR",
            ElementKind::RevenueStream => "R$",
            ElementKind::CostStructure => "C$",
        }
    }

    /// Snake-case keyword used by the textual language and the JSON schema.
    pub fn keyword(self) -> &'static str {
        match self {
            ElementKind::KeyResource => "key_resource",
            ElementKind::KeyActivity => "key_activity",
            ElementKind::KeyPartnership => "key_partnership",
            ElementKind::CustomerSegment => "customer_segment",
            ElementKind::ValueProposition => "value_proposition",
            ElementKind::Channel => "channel",
            ElementKind::CustomerRelationship => "customer_relationship",
            ElementKind::RevenueStream => "revenue_stream",
            ElementKind::CostStructure => "cost_structure",
        }
    }

    /// Human-readable block title.
    pub fn title(self) -> &'static str {
        match self {
            ElementKind::KeyResource => "Key Resources",
            ElementKind::KeyActivity => "Key Activities",
            ElementKind::KeyPartnership => "Key Partnerships",
            ElementKind::CustomerSegment => "Customer Segments",
            ElementKind::ValueProposition => "Value Propositions",
            ElementKind::Channel => "Channels",
            ElementKind::CustomerRelationship => "Customer Relationships",
            ElementKind::RevenueStream => "Revenue Streams",
            ElementKind::CostStructure => "Cost Structure",
        }
    }

    /// Accepts either the keyword or the abbreviation (case-sensitive).
    pub fn from_token(token: &str) -> Option<ElementKind> {
        ElementKind::ALL
            .into_iter()
            .find(|k| k.keyword() == token || k.abbrev() == token)
    }

    pub fn super_kind(self) -> SuperKind {
        self.taxonomy().0
    }

    pub fn subgroup(self) -> Subgroup {
        self.taxonomy().1
    }

    /// Superkind and subgroup of this kind.
    pub fn taxonomy(self) -> (SuperKind, Subgroup) {
        use ElementKind::*;
        match self {
            KeyResource | KeyActivity => (SuperKind::KeyElement, Subgroup::InternalKey),
            KeyPartnership => (SuperKind::KeyElement, Subgroup::ExternalKey),
            CustomerSegment | ValueProposition => {
                (SuperKind::ValueElement, Subgroup::ValueCreation)
            }
            Channel | CustomerRelationship => (SuperKind::ValueElement, Subgroup::ValueDelivery),
            RevenueStream | CostStructure => {
                (SuperKind::PerformanceElement, Subgroup::Performance)
            }
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbrev())
    }
}

/// Free function form of [`ElementKind::taxonomy`].
pub fn taxonomy(kind: ElementKind) -> (SuperKind, Subgroup) {
    kind.taxonomy()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuperKind {
    KeyElement,
    ValueElement,
    PerformanceElement,
}

impl SuperKind {
    pub const ALL: [SuperKind; 3] = [
        SuperKind::KeyElement,
        SuperKind::ValueElement,
        SuperKind::PerformanceElement,
    ];

    pub fn abbrev(self) -> &'static str {
        match self {
            SuperKind::KeyElement => "KE",
            SuperKind::ValueElement => "VE",
            SuperKind::PerformanceElement => "PE",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            SuperKind::KeyElement => "Key Elements",
            SuperKind::ValueElement => "Value Elements",
            SuperKind::PerformanceElement => "Performance Elements",
        }
    }

    pub fn members(self) -> impl Iterator<Item = ElementKind> {
        ElementKind::ALL
            .into_iter()
            .filter(move |k| k.super_kind() == self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subgroup {
    InternalKey,
    ExternalKey,
    ValueCreation,
    ValueDelivery,
    Performance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationshipKind {
    Supports,
    Determines,
    Affects,
}

impl RelationshipKind {
    pub const ALL: [RelationshipKind; 3] = [
        RelationshipKind::Supports,
        RelationshipKind::Determines,
        RelationshipKind::Affects,
    ];

    /// Active-voice verb: `supports`, `determines`, `affects`.
    pub fn verb(self) -> &'static str {
        match self {
            RelationshipKind::Supports => "supports",
            RelationshipKind::Determines => "determines",
            RelationshipKind::Affects => "affects",
        }
    }

    /// Passive surface alias. Never stored in a model.
    pub fn passive_verb(self) -> &'static str {
        match self {
            RelationshipKind::Supports => "is_supported_by",
            RelationshipKind::Determines => "is_determined_by",
            RelationshipKind::Affects => "is_affected_by",
        }
    }

    /// One-letter matrix cell code.
    pub fn letter(self) -> char {
        match self {
            RelationshipKind::Supports => 'S',
            RelationshipKind::Determines => 'D',
            RelationshipKind::Affects => 'A',
        }
    }

    pub fn from_verb(verb: &str) -> Option<RelationshipKind> {
        RelationshipKind::ALL.into_iter().find(|k| k.verb() == verb)
    }
}

impl fmt::Display for RelationshipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.verb())
    }
}

/// Identifier of an element, `[A-Za-z_][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(String);

impl ElementId {
    pub fn new(text: impl Into<String>) -> Result<Self, ModelError> {
        let text = text.into();
        if Self::is_well_formed(&text) {
            Ok(ElementId(text))
        } else {
            Err(ModelError::MalformedId(text))
        }
    }

    pub fn is_well_formed(text: &str) -> bool {
        let mut chars = text.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for ElementId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Resource-based-view flags for a key resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Vrin {
    pub valuable: bool,
    pub rare: bool,
    pub inimitable: bool,
    pub non_substitutable: bool,
}

impl Vrin {
    pub fn from_flags(flags: [bool; 4]) -> Self {
        Vrin {
            valuable: flags[0],
            rare: flags[1],
            inimitable: flags[2],
            non_substitutable: flags[3],
        }
    }

    pub fn flags(self) -> [bool; 4] {
        [
            self.valuable,
            self.rare,
            self.inimitable,
            self.non_substitutable,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: ElementId,
    pub kind: ElementKind,
    pub name: String,
    pub description: Option<String>,
    pub vrin: Option<Vrin>,
    pub children: Vec<Element>,
    pub span: Option<Span>,
}

impl Element {
    pub fn new(kind: ElementKind, id: ElementId, name: impl Into<String>) -> Self {
        Element {
            id,
            kind,
            name: name.into(),
            description: None,
            vrin: None,
            children: Vec::new(),
            span: None,
        }
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = Some(description.into());
        self
    }

    pub fn with_vrin(mut self, vrin: Vrin) -> Self {
        self.vrin = Some(vrin);
        self
    }

    pub fn with_span(mut self, span: Span) -> Self {
        self.span = Some(span);
        self
    }

    /// This element followed by all descendants, depth-first, with depth.
    pub fn walk(&self) -> Vec<(&Element, usize)> {
        let mut out = Vec::new();
        fn go<'a>(e: &'a Element, depth: usize, out: &mut Vec<(&'a Element, usize)>) {
            out.push((e, depth));
            for c in &e.children {
                go(c, depth + 1, out);
            }
        }
        go(self, 0, &mut out);
        out
    }

    fn find(&self, id: &str) -> Option<&Element> {
        if self.id.as_str() == id {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(id))
    }

    fn find_mut(&mut self, id: &str) -> Option<&mut Element> {
        if self.id.as_str() == id {
            return Some(self);
        }
        self.children.iter_mut().find_map(|c| c.find_mut(id))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relationship {
    pub source: ElementId,
    pub target: ElementId,
    pub kind: RelationshipKind,
    pub label: Option<String>,
    pub span: Option<Span>,
}

impl Relationship {
    pub fn new(source: ElementId, target: ElementId, kind: RelationshipKind) -> Self {
        Relationship {
            source,
            target,
            kind,
            label: None,
            span: None,
        }
    }

    pub fn is_self_edge(&self) -> bool {
        self.source == self.target
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BusinessModel {
    pub name: String,
    pub elements: Vec<Element>,
    pub relationships: Vec<Relationship>,
    pub business_models: Vec<BusinessModel>,
    pub span: Option<Span>,
}

impl BusinessModel {
    pub fn new(name: impl Into<String>) -> Self {
        BusinessModel {
            name: name.into(),
            ..Default::default()
        }
    }

    /// Every element of this namespace (not crossing into nested business
    /// models) in declaration pre-order, with nesting depth.
    pub fn walk_elements(&self) -> Vec<(&Element, usize)> {
        self.elements.iter().flat_map(|e| e.walk()).collect()
    }

    /// Looks `id` up in this namespace, including nested element children
    /// but not nested business models.
    pub fn resolve(&self, id: &str) -> Option<&Element> {
        self.elements.iter().find_map(|e| e.find(id))
    }

    pub fn resolve_mut(&mut self, id: &str) -> Option<&mut Element> {
        self.elements.iter_mut().find_map(|e| e.find_mut(id))
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.resolve(id).is_some()
    }

    /// Appends a fresh top-level element.
    pub fn add_element(
        &mut self,
        kind: ElementKind,
        id: &str,
        name: impl Into<String>,
    ) -> Result<&mut Element, ModelError> {
        let id = ElementId::new(id)?;
        self.push_element(Element::new(kind, id, name))
    }

    /// Appends an already-built element (with its children) at top level.
    pub fn push_element(&mut self, element: Element) -> Result<&mut Element, ModelError> {
        self.check_insertable(&element, None)?;
        self.elements.push(element);
        Ok(self.elements.last_mut().expect("just pushed"))
    }

    /// Appends `child` (with its subtree) under the element bound to `parent`.
    pub fn nest_element(
        &mut self,
        parent: &str,
        child: Element,
    ) -> Result<&mut Element, ModelError> {
        let parent_kind = self
            .resolve(parent)
            .ok_or_else(|| ModelError::UnresolvedReference(parent.to_string()))?
            .kind;
        self.check_insertable(&child, Some((parent, parent_kind)))?;
        let parent = self.resolve_mut(parent).expect("resolved above");
        parent.children.push(child);
        Ok(parent.children.last_mut().expect("just pushed"))
    }

    fn check_insertable(
        &self,
        element: &Element,
        parent: Option<(&str, ElementKind)>,
    ) -> Result<(), ModelError> {
        if let Some((parent_id, parent_kind)) = parent {
            if element.kind != parent_kind {
                return Err(ModelError::KindMismatch {
                    parent: parent_id.to_string(),
                    parent_kind,
                    child: element.id.to_string(),
                    child_kind: element.kind,
                });
            }
        }
        let mut seen = std::collections::HashSet::new();
        for (e, _) in element.walk() {
            if e.kind != element.kind {
                return Err(ModelError::KindMismatch {
                    parent: element.id.to_string(),
                    parent_kind: element.kind,
                    child: e.id.to_string(),
                    child_kind: e.kind,
                });
            }
            if self.contains_id(e.id.as_str()) || !seen.insert(e.id.as_str()) {
                return Err(ModelError::DuplicateId(e.id.clone()));
            }
        }
        Ok(())
    }

    /// Appends an edge. Both endpoints must already be declared here and the
    /// ordered pair must not carry an edge yet.
    pub fn add_relationship(
        &mut self,
        source: &str,
        target: &str,
        kind: RelationshipKind,
        label: Option<String>,
    ) -> Result<&mut Relationship, ModelError> {
        for id in [source, target] {
            if !self.contains_id(id) {
                return Err(ModelError::UnresolvedReference(id.to_string()));
            }
        }
        if self.edge_between(source, target).is_some() {
            return Err(ModelError::DuplicateRelationship {
                from: source.to_string(),
                to: target.to_string(),
            });
        }
        let mut rel = Relationship::new(
            ElementId::new(source)?,
            ElementId::new(target)?,
            kind,
        );
        rel.label = label;
        self.relationships.push(rel);
        Ok(self.relationships.last_mut().expect("just pushed"))
    }

    pub fn edge_between(&self, source: &str, target: &str) -> Option<&Relationship> {
        self.relationships
            .iter()
            .find(|r| r.source.as_str() == source && r.target.as_str() == target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Enterprise {
    pub name: String,
    pub business_models: Vec<BusinessModel>,
}

impl Enterprise {
    pub fn new(name: impl Into<String>) -> Self {
        Enterprise {
            name: name.into(),
            business_models: Vec::new(),
        }
    }

    /// All business models, recursively, parents before their children.
    pub fn all_business_models(&self) -> Vec<&BusinessModel> {
        fn go<'a>(bm: &'a BusinessModel, out: &mut Vec<&'a BusinessModel>) {
            out.push(bm);
            for nested in &bm.business_models {
                go(nested, out);
            }
        }
        let mut out = Vec::new();
        for bm in &self.business_models {
            go(bm, &mut out);
        }
        out
    }

    /// Finds a business model by name anywhere in the tree.
    pub fn find_business_model(&self, name: &str) -> Option<&BusinessModel> {
        self.all_business_models()
            .into_iter()
            .find(|bm| bm.name == name)
    }

    /// Copy with every source span removed.
    pub fn without_spans(&self) -> Enterprise {
        let mut e = self.clone();
        fn element(e: &mut Element) {
            e.span = None;
            e.children.iter_mut().for_each(element);
        }
        fn bm(b: &mut BusinessModel) {
            b.span = None;
            b.elements.iter_mut().for_each(element);
            b.relationships.iter_mut().for_each(|r| r.span = None);
            b.business_models.iter_mut().for_each(bm);
        }
        e.business_models.iter_mut().for_each(bm);
        e
    }

    /// Span-free copy in canonical order: top-level elements stably sorted by
    /// kind, edges sorted by (source id, target id). Two models that differ
    /// only in declaration order of kinds or edges canonicalize equally.
    pub fn canonicalized(&self) -> Enterprise {
        let mut e = self.without_spans();
        fn bm(b: &mut BusinessModel) {
            b.elements.sort_by_key(|e| e.kind);
            b.relationships
                .sort_by(|x, y| (&x.source, &x.target).cmp(&(&y.source, &y.target)));
            b.business_models.iter_mut().for_each(bm);
        }
        e.business_models.iter_mut().for_each(bm);
        e
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unresolved reference `{0}`")]
    UnresolvedReference(String),
    #[error("duplicate element id `{0}`")]
    DuplicateId(ElementId),
    #[error("malformed element id `{0}`")]
    MalformedId(String),
    #[error("`{child}` ({child_kind}) cannot be nested under `{parent}` ({parent_kind}); children share their parent's kind")]
    KindMismatch {
        parent: String,
        parent_kind: ElementKind,
        child: String,
        child_kind: ElementKind,
    },
    #[error("a relationship from `{from}` to `{to}` already exists")]
    DuplicateRelationship { from: String, to: String },
}

impl ModelError {
    /// Stable diagnostic code.
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::UnresolvedReference(_) => "E002",
            ModelError::DuplicateId(_) => "E003",
            ModelError::MalformedId(_) => "E004",
            ModelError::KindMismatch { .. } => "E005",
            ModelError::DuplicateRelationship { .. } => "E013",
        }
    }
}
