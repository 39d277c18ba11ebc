//! The eleven design rules and the cross-check that proves them consistent
//! with the policy table.
//!
//! The table is authoritative for gating. The rules are kept as independent
//! kind-level predicates so that every `Required` cell can be re-derived and
//! so that diagnostics can cite the most specific rule for a pair.
//!
//! Precedence, most specific first:
//!
//! 1. an edge from an element to itself is `supports` (DR1);
//! 2. a same-kind pair is `supports`;
//! 3. the concrete-kind entry of the table;
//! 4. superkind rules (DR2, DR7, DR8, DR9) and group rules (DR3 to DR6,
//!    DR10, DR11) only cross-check the table.
//!
//! DR7 is restricted to the cross-kind pairs `R$ <-> C$`; same-kind
//! performance pairs follow the diagonal.

use std::fmt;

use crate::model::ElementKind::{self, *};
use crate::model::RelationshipKind::{self, *};
use crate::model::SuperKind;
use crate::rules::policy::{PolicyEntry, RelationshipPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Dr1,
    Dr2,
    Dr3,
    Dr4,
    Dr5,
    Dr6,
    Dr7,
    Dr8,
    Dr9,
    Dr10,
    Dr11,
    /// The policy table itself, for pairs no design rule covers.
    Matrix,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Dr1 => "DR1",
            RuleId::Dr2 => "DR2",
            RuleId::Dr3 => "DR3",
            RuleId::Dr4 => "DR4",
            RuleId::Dr5 => "DR5",
            RuleId::Dr6 => "DR6",
            RuleId::Dr7 => "DR7",
            RuleId::Dr8 => "DR8",
            RuleId::Dr9 => "DR9",
            RuleId::Dr10 => "DR10",
            RuleId::Dr11 => "DR11",
            RuleId::Matrix => "MATRIX",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A kind-level design rule: whenever `applies(source, target)` holds, the
/// edge kind must be `demands`.
#[derive(Debug, Clone, Copy)]
pub struct DesignRule {
    pub id: RuleId,
    pub statement: &'static str,
    pub demands: RelationshipKind,
    /// Lower is more specific.
    pub specificity: u8,
    applies: fn(ElementKind, ElementKind) -> bool,
}

impl DesignRule {
    pub fn applies(&self, source: ElementKind, target: ElementKind) -> bool {
        (self.applies)(source, target)
    }
}

fn is(super_kind: SuperKind) -> impl Fn(ElementKind) -> bool {
    move |k| k.super_kind() == super_kind
}

/// DR1 constrains element instances, not kinds, and is handled separately.
pub const DR1_STATEMENT: &str = "the relationship between an element and itself must be Supports";

pub const DESIGN_RULES: [DesignRule; 10] = [
    DesignRule {
        id: RuleId::Dr2,
        statement: "the relationship between KE and KE must be Supports",
        demands: Supports,
        specificity: 3,
        applies: |s, t| is(SuperKind::KeyElement)(s) && is(SuperKind::KeyElement)(t),
    },
    DesignRule {
        id: RuleId::Dr3,
        statement: "the relationship between CS and VP must be Determines",
        demands: Determines,
        specificity: 1,
        applies: |s, t| s == CustomerSegment && t == ValueProposition,
    },
    DesignRule {
        id: RuleId::Dr4,
        statement: "the relationship between CH and VP must be Supports",
        demands: Supports,
        specificity: 1,
        applies: |s, t| s == Channel && t == ValueProposition,
    },
    DesignRule {
        id: RuleId::Dr5,
        statement: "the relationship between CR and VP must be Affects",
        demands: Affects,
        specificity: 1,
        applies: |s, t| s == CustomerRelationship && t == ValueProposition,
    },
    DesignRule {
        id: RuleId::Dr6,
        statement: "the relationship between (CH or CR) and (CS or CR) must be Supports",
        demands: Supports,
        specificity: 1,
        applies: |s, t| {
            matches!(s, Channel | CustomerRelationship)
                && matches!(t, CustomerSegment | CustomerRelationship)
        },
    },
    DesignRule {
        id: RuleId::Dr7,
        statement: "the relationship between PE and PE must be Affects",
        demands: Affects,
        specificity: 3,
        applies: |s, t| {
            s != t && is(SuperKind::PerformanceElement)(s) && is(SuperKind::PerformanceElement)(t)
        },
    },
    DesignRule {
        id: RuleId::Dr8,
        statement: "the relationship between KE and VE must be Supports",
        demands: Supports,
        specificity: 3,
        applies: |s, t| is(SuperKind::KeyElement)(s) && is(SuperKind::ValueElement)(t),
    },
    DesignRule {
        id: RuleId::Dr9,
        statement: "the relationship between KE and PE must be Affects",
        demands: Affects,
        specificity: 3,
        applies: |s, t| is(SuperKind::KeyElement)(s) && is(SuperKind::PerformanceElement)(t),
    },
    DesignRule {
        id: RuleId::Dr10,
        statement: "the relationship between VE and C$ must be Affects",
        demands: Affects,
        specificity: 2,
        applies: |s, t| is(SuperKind::ValueElement)(s) && t == CostStructure,
    },
    DesignRule {
        id: RuleId::Dr11,
        statement: "the relationship between VE and R$ must be Determines",
        demands: Determines,
        specificity: 2,
        applies: |s, t| is(SuperKind::ValueElement)(s) && t == RevenueStream,
    },
];

/// Knobs for exercising the cross-check against known misreadings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RuleConfig {
    /// Apply DR7 to same-kind performance pairs as well.
    pub dr7_on_same_kind: bool,
}

impl RuleConfig {
    fn applies(&self, rule: &DesignRule, source: ElementKind, target: ElementKind) -> bool {
        if rule.id == RuleId::Dr7 && self.dr7_on_same_kind {
            return source.super_kind() == SuperKind::PerformanceElement
                && target.super_kind() == SuperKind::PerformanceElement;
        }
        rule.applies(source, target)
    }
}

pub fn rule(id: RuleId) -> Option<&'static DesignRule> {
    DESIGN_RULES.iter().find(|r| r.id == id)
}

/// Kind-level rules that apply to an ordered pair, most specific first.
pub fn applicable_rules(source: ElementKind, target: ElementKind) -> Vec<&'static DesignRule> {
    applicable_with(RuleConfig::default(), source, target)
}

fn applicable_with(
    config: RuleConfig,
    source: ElementKind,
    target: ElementKind,
) -> Vec<&'static DesignRule> {
    let mut rules: Vec<_> = DESIGN_RULES
        .iter()
        .filter(|r| config.applies(r, source, target))
        .collect();
    rules.sort_by_key(|r| (r.specificity, r.id));
    rules
}

/// The rule a diagnostic about this ordered pair should cite.
pub fn governing_rule(source: ElementKind, target: ElementKind) -> RuleId {
    applicable_rules(source, target)
        .first()
        .map(|r| r.id)
        .unwrap_or(RuleId::Matrix)
}

/// The rule behind a concrete edge: DR1 for an element relating to itself,
/// otherwise the rule governing the direction the policy allows.
pub fn edge_rule(source: ElementKind, target: ElementKind, same_element: bool) -> RuleId {
    if same_element {
        return RuleId::Dr1;
    }
    match RelationshipPolicy::normative().entry(source, target) {
        PolicyEntry::Required(_) => governing_rule(source, target),
        PolicyEntry::ReverseOnly(_) => governing_rule(target, source),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub source: ElementKind,
    pub target: ElementKind,
    pub rule: RuleId,
    pub rule_demands: RelationshipKind,
    pub entry: PolicyEntry,
    /// Whether this concerns the element-to-itself override.
    pub same_element: bool,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}->{}: {} demands {}, policy says {}",
            if self.same_element { "self edge " } else { "" },
            self.source.abbrev(),
            self.target.abbrev(),
            self.rule,
            self.rule_demands,
            self.entry
        )
    }
}

/// Cross-checks the normative policy against every design rule.
pub fn rules_crosscheck() -> Vec<Disagreement> {
    crosscheck_with(RelationshipPolicy::normative(), RuleConfig::default())
}

/// For each of the 81 pairs whose entry is `Required(k)`, every applicable
/// rule must demand exactly `k`. The element-to-itself override is checked
/// against DR1 for all nine kinds.
pub fn crosscheck_with(policy: &RelationshipPolicy, config: RuleConfig) -> Vec<Disagreement> {
    let mut out = Vec::new();
    for kind in ElementKind::ALL {
        let entry = policy.entry_for_edge(kind, kind, true);
        if entry != PolicyEntry::Required(Supports) {
            out.push(Disagreement {
                source: kind,
                target: kind,
                rule: RuleId::Dr1,
                rule_demands: Supports,
                entry,
                same_element: true,
            });
        }
    }
    for (source, target, entry) in policy.iter() {
        let PolicyEntry::Required(kind) = entry else {
            continue;
        };
        for rule in applicable_with(config, source, target) {
            if rule.demands != kind {
                out.push(Disagreement {
                    source,
                    target,
                    rule: rule.id,
                    rule_demands: rule.demands,
                    entry,
                    same_element: false,
                });
            }
        }
    }
    out
}
