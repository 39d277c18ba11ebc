//! The textual `.bmc` language.
//!
//! ```text
//! file           := enterprise EOF
//! enterprise     := "enterprise" STRING "{" business_model+ "}"
//! business_model := "business_model" STRING "{" item* "}"
//! item           := element_decl | rel_decl | business_model
//! element_decl   := kind_kw IDENT STRING? body?
//! body           := "{" (("desc" STRING) | ("vrin" BOOL BOOL BOOL BOOL) | element_decl)* "}"
//! rel_decl       := IDENT verb IDENT ("," STRING)?
//! ```
//!
//! Kind keywords are the snake-case names (`key_resource`, ...) or their
//! abbreviations (`KR`, ..., `R$`, `C$`). Verbs are `supports`,
//! `determines`, `affects` and the passive `is_supported_by`,
//! `is_determined_by`, `is_affected_by`.

mod format;
pub mod lexer;
mod lower;
pub mod parser;

pub use format::{format, quote};
pub use lexer::{tokenize, Keyword, Token, TokenKind, Verb};
pub use lower::lower;
pub use parser::{parse, SourceTree};

use crate::diagnostic::Diagnostic;
use crate::model::Enterprise;

/// Tokenize, parse and lower in one go. Diagnostics are in pass order.
pub fn parse_source(text: &str) -> (Enterprise, Vec<Diagnostic>) {
    let (tokens, mut diagnostics) = tokenize(text);
    let (tree, more) = parse(&tokens);
    diagnostics.extend(more);
    let (enterprise, more) = lower(&tree);
    diagnostics.extend(more);
    (enterprise, diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ElementKind, RelationshipKind};

    fn wrap(items: &str) -> String {
        format!("enterprise \"E\" {{\n  business_model \"B\" {{\n{items}\n  }}\n}}\n")
    }

    #[test]
    fn passive_normalization() {
        let decls = "customer_segment Customers\nvalue_proposition Panels\n";
        let (passive, d1) = parse_source(&wrap(&format!("{decls}Panels is_determined_by Customers")));
        let (active, d2) = parse_source(&wrap(&format!("{decls}Customers determines Panels")));
        assert!(d1.is_empty() && d2.is_empty());
        let rel = &passive.business_models[0].relationships[0];
        assert_eq!(rel.source.as_str(), "Customers");
        assert_eq!(rel.target.as_str(), "Panels");
        assert_eq!(rel.kind, RelationshipKind::Determines);
        assert_eq!(passive.without_spans(), active.without_spans());
    }

    #[test]
    fn forward_references_resolve() {
        let (e, d) = parse_source(&wrap("A supports B\nKR A\nKA B"));
        assert!(d.is_empty(), "{d:?}");
        assert_eq!(e.business_models[0].relationships.len(), 1);
    }

    #[test]
    fn lowering_errors() {
        let (e, d) = parse_source(&wrap(
            "KR A { KA Sub }\nKR A\nKR 9x\nA supports Ghost\nVP P { vrin true true true true }\nA supports P\nA supports P",
        ));
        let codes: Vec<_> = d.iter().map(|d| d.code.as_str()).collect();
        assert_eq!(codes, ["E005", "E003", "E004", "E012", "E002", "E013"]);
        let bm = &e.business_models[0];
        assert_eq!(bm.elements.len(), 2);
        assert!(bm.resolve("P").unwrap().vrin.is_none());
        // E002 points at the unresolved id
        let text = wrap("A supports Ghost\nKR A");
        let (_, d) = parse_source(&text);
        let span = d[0].span.unwrap();
        assert_eq!(&text[span.start..span.end], "Ghost");
    }

    #[test]
    fn nested_business_models_have_fresh_namespaces() {
        let (e, d) = parse_source(&wrap(
            "KR A\nbusiness_model \"Inner\" { KR A\nKA B\nA supports B }\nA supports B",
        ));
        let codes: Vec<_> = d.iter().map(|d| d.code.as_str()).collect();
        // the outer edge cannot see the inner B
        assert_eq!(codes, ["E002"]);
        assert_eq!(e.business_models[0].business_models[0].relationships.len(), 1);
    }

    #[test]
    fn element_defaults_and_attributes() {
        let (e, d) = parse_source(&wrap(
            "KR F \"Factory\" { desc \"the plant\" vrin true false true false KR L \"Lathe\" }\nC$ Costs",
        ));
        assert!(d.is_empty());
        let bm = &e.business_models[0];
        let f = bm.resolve("F").unwrap();
        assert_eq!(f.name, "Factory");
        assert_eq!(f.description.as_deref(), Some("the plant"));
        assert_eq!(f.vrin.unwrap().flags(), [true, false, true, false]);
        assert_eq!(f.children[0].name, "Lathe");
        assert_eq!(bm.resolve("Costs").unwrap().name, "Costs");
        assert_eq!(bm.resolve("Costs").unwrap().kind, ElementKind::CostStructure);
    }

    #[test]
    fn format_empty_business_model() {
        let (e, _) = parse_source("enterprise \"E\" { business_model \"X\" { } }");
        assert_eq!(format(&e), "enterprise \"E\" {\n  business_model \"X\" {}\n}\n");
    }

    #[test]
    fn format_is_canonical() {
        let (e, d) = parse_source(&wrap(
            "Panels is_determined_by Customers\nVP Panels \"Panels\"\nCS Customers\nKR F { KR G desc \"x\\ny\" }\nF supports Panels, \"makes \\\"them\\\"\"",
        ));
        assert!(d.is_empty(), "{d:?}");
        let expected = r#"enterprise "E" {
  business_model "B" {
    key_resource F "F" {
      desc "x\ny"
      key_resource G "G"
    }
    customer_segment Customers "Customers"
    value_proposition Panels "Panels"

    Customers determines Panels
    F supports Panels, "makes \"them\""
  }
}
"#;
        assert_eq!(format(&e), expected);
        let (again, _) = parse_source(expected);
        assert_eq!(format(&again), expected);
    }
}
