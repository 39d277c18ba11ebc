//! The normalized 9x9 relationship policy.
//!
//! Only active-voice edges are listed; every other cross-kind cell is the
//! reverse of a listed edge. Same-kind cells are `supports`, and an edge from
//! an element to itself is `supports` regardless of the table.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::model::ElementKind::{self, *};
use crate::model::RelationshipKind::{self, *};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyEntry {
    /// An edge in this direction is legal with exactly this kind.
    Required(RelationshipKind),
    /// No edge in this direction; the reverse direction requires this kind.
    ReverseOnly(RelationshipKind),
}

impl PolicyEntry {
    pub fn kind(self) -> RelationshipKind {
        match self {
            PolicyEntry::Required(k) | PolicyEntry::ReverseOnly(k) => k,
        }
    }

    pub fn is_required(self) -> bool {
        matches!(self, PolicyEntry::Required(_))
    }

    /// Matrix cell: `S`, `D`, `A`, or `·S`, `·D`, `·A` for reverse-only.
    pub fn cell(self) -> String {
        match self {
            PolicyEntry::Required(k) => k.letter().to_string(),
            PolicyEntry::ReverseOnly(k) => format!("·{}", k.letter()),
        }
    }

    /// `required` or `reverse-only`.
    pub fn status(self) -> &'static str {
        match self {
            PolicyEntry::Required(_) => "required",
            PolicyEntry::ReverseOnly(_) => "reverse-only",
        }
    }
}

impl fmt::Display for PolicyEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyEntry::Required(k) => write!(f, "{k}"),
            PolicyEntry::ReverseOnly(k) => write!(f, "reverse-only (reverse kind: {k})"),
        }
    }
}

/// Cross-kind active edges of the normative policy.
pub const ACTIVE_EDGES: &[(ElementKind, RelationshipKind, ElementKind)] = &[
    (KeyResource, Supports, KeyActivity),
    (KeyResource, Supports, CustomerSegment),
    (KeyResource, Supports, ValueProposition),
    (KeyResource, Supports, Channel),
    (KeyResource, Supports, CustomerRelationship),
    (KeyResource, Affects, RevenueStream),
    (KeyResource, Affects, CostStructure),
    (KeyActivity, Supports, CustomerSegment),
    (KeyActivity, Supports, ValueProposition),
    (KeyActivity, Supports, Channel),
    (KeyActivity, Supports, CustomerRelationship),
    (KeyActivity, Affects, RevenueStream),
    (KeyActivity, Affects, CostStructure),
    (KeyPartnership, Supports, KeyResource),
    (KeyPartnership, Supports, KeyActivity),
    (KeyPartnership, Supports, CustomerSegment),
    (KeyPartnership, Supports, ValueProposition),
    (KeyPartnership, Supports, Channel),
    (KeyPartnership, Supports, CustomerRelationship),
    (KeyPartnership, Affects, RevenueStream),
    (KeyPartnership, Affects, CostStructure),
    (CustomerSegment, Determines, ValueProposition),
    (CustomerSegment, Determines, RevenueStream),
    (CustomerSegment, Affects, CostStructure),
    (ValueProposition, Determines, RevenueStream),
    (ValueProposition, Affects, CostStructure),
    (Channel, Supports, CustomerSegment),
    (Channel, Supports, ValueProposition),
    (Channel, Supports, CustomerRelationship),
    (Channel, Determines, RevenueStream),
    (Channel, Affects, CostStructure),
    (CustomerRelationship, Supports, CustomerSegment),
    (CustomerRelationship, Affects, ValueProposition),
    (CustomerRelationship, Determines, RevenueStream),
    (CustomerRelationship, Affects, CostStructure),
    (RevenueStream, Affects, CostStructure),
    (CostStructure, Affects, RevenueStream),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("same-kind pair {0}->{0} must not be listed; the diagonal is always supports")]
    DiagonalListed(ElementKind),
    #[error("pair {0}->{1} listed twice")]
    Duplicate(ElementKind, ElementKind),
    #[error("pair {0}<->{1} has no active direction")]
    Uncovered(ElementKind, ElementKind),
}

/// Total map over the 81 ordered kind pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationshipPolicy {
    entries: [[PolicyEntry; 9]; 9],
}

impl RelationshipPolicy {
    /// The normative policy, built once.
    pub fn normative() -> &'static RelationshipPolicy {
        static POLICY: OnceLock<RelationshipPolicy> = OnceLock::new();
        POLICY.get_or_init(|| {
            RelationshipPolicy::from_active_edges(ACTIVE_EDGES)
                .expect("normative edge list is total")
        })
    }

    /// Builds a policy from a list of cross-kind active edges. The diagonal
    /// is filled with `supports`; every unlisted cell must be the reverse of
    /// a listed one.
    pub fn from_active_edges(
        edges: &[(ElementKind, RelationshipKind, ElementKind)],
    ) -> Result<RelationshipPolicy, PolicyError> {
        let mut cells: [[Option<PolicyEntry>; 9]; 9] = [[None; 9]; 9];
        for k in ElementKind::ALL {
            cells[k.index()][k.index()] = Some(PolicyEntry::Required(Supports));
        }
        for &(src, kind, dst) in edges {
            if src == dst {
                return Err(PolicyError::DiagonalListed(src));
            }
            let cell = &mut cells[src.index()][dst.index()];
            if cell.is_some() {
                return Err(PolicyError::Duplicate(src, dst));
            }
            *cell = Some(PolicyEntry::Required(kind));
        }
        for &(src, kind, dst) in edges {
            let reverse = &mut cells[dst.index()][src.index()];
            if reverse.is_none() {
                *reverse = Some(PolicyEntry::ReverseOnly(kind));
            }
        }
        let mut entries = [[PolicyEntry::Required(Supports); 9]; 9];
        for a in ElementKind::ALL {
            for b in ElementKind::ALL {
                entries[a.index()][b.index()] =
                    cells[a.index()][b.index()].ok_or(PolicyError::Uncovered(a, b))?;
            }
        }
        Ok(RelationshipPolicy { entries })
    }

    pub fn entry(&self, source: ElementKind, target: ElementKind) -> PolicyEntry {
        self.entries[source.index()][target.index()]
    }

    /// The entry for a concrete edge; an element's edge to itself is always
    /// `supports`.
    pub fn entry_for_edge(
        &self,
        source: ElementKind,
        target: ElementKind,
        same_element: bool,
    ) -> PolicyEntry {
        if same_element {
            PolicyEntry::Required(Supports)
        } else {
            self.entry(source, target)
        }
    }

    /// All 81 entries, rows in kind order.
    pub fn iter(&self) -> impl Iterator<Item = (ElementKind, ElementKind, PolicyEntry)> + '_ {
        ElementKind::ALL.into_iter().flat_map(move |a| {
            ElementKind::ALL
                .into_iter()
                .map(move |b| (a, b, self.entry(a, b)))
        })
    }

    /// `src,dst,entry` header plus one row per ordered pair, rows in kind
    /// order. This is also the shape of `data/policy.golden`.
    pub fn csv_rows(&self) -> Vec<String> {
        std::iter::once("src,dst,entry".to_string())
            .chain(
                self.iter()
                    .map(|(a, b, e)| format!("{},{},{}", a.abbrev(), b.abbrev(), e.cell())),
            )
            .collect()
    }
}

/// Entry of the normative policy for an ordered kind pair.
pub fn required_kind(source: ElementKind, target: ElementKind) -> PolicyEntry {
    RelationshipPolicy::normative().entry(source, target)
}
