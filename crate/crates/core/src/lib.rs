//! Business Model Canvas models: a typed metamodel, an 81-cell relationship
//! policy with its design rules, a small textual language, and emitters for
//! JSON, DOT and SVG.
//!
//! ```
//! use bmc_core::{check_source, SourceFormat};
//!
//! let text = r#"
//! enterprise "Acme" {
//!   business_model "Main" {
//!     KR Factory
//!     KA Production
//!     Factory supports Production
//!   }
//! }"#;
//! let (model, diagnostics) = check_source(text, SourceFormat::Dsl, false);
//! assert!(diagnostics.is_empty());
//! assert_eq!(model.business_models[0].relationships.len(), 1);
//! ```

pub mod diagnostic;
pub mod dsl;
pub mod export;
pub mod model;
pub mod rules;

pub use diagnostic::{has_errors, Diagnostic, Severity};
pub use model::{
    BusinessModel, Element, ElementId, ElementKind, Enterprise, ModelError, Relationship,
    RelationshipKind, Span, Subgroup, SuperKind,
};
pub use rules::{validate, validate_with, ValidateOptions};

/// Which loader to use for input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SourceFormat {
    #[default]
    Dsl,
    Json,
}

impl SourceFormat {
    /// `.json` files are JSON, everything else is the DSL.
    pub fn from_path(path: &std::path::Path) -> SourceFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => SourceFormat::Json,
            _ => SourceFormat::Dsl,
        }
    }
}

/// Loads `text` and validates the result.
///
/// Diagnostics come in pass order: loading first, then validation. When
/// loading hits a syntax or schema error the partial model is not
/// validated.
pub fn check_source(text: &str, format: SourceFormat, lints: bool) -> (Enterprise, Vec<Diagnostic>) {
    let (enterprise, mut diagnostics) = match format {
        SourceFormat::Dsl => dsl::parse_source(text),
        SourceFormat::Json => export::from_json(text),
    };
    if diagnostics.iter().any(|d| d.code == "E001" || d.code == "E007") {
        return (enterprise, diagnostics);
    }
    diagnostics.extend(validate_with(&enterprise, ValidateOptions { lints }));
    (enterprise, diagnostics)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SelectError {
    #[error("the enterprise has no business model")]
    Empty,
    #[error("business model \"{0}\" not found")]
    NotFound(String),
    #[error("the enterprise has several business models ({}); choose one", .0.join(", "))]
    Ambiguous(Vec<String>),
}

/// Picks the business model to draw: the named one (searching nested
/// models too), or the only one there is.
pub fn select_business_model<'a>(
    enterprise: &'a Enterprise,
    name: Option<&str>,
) -> Result<&'a BusinessModel, SelectError> {
    let all = enterprise.all_business_models();
    match name {
        Some(name) => all
            .into_iter()
            .find(|bm| bm.name == name)
            .ok_or_else(|| SelectError::NotFound(name.to_string())),
        None => match all.as_slice() {
            [] => Err(SelectError::Empty),
            [only] => Ok(only),
            many => Err(SelectError::Ambiguous(
                many.iter().map(|bm| format!("\"{}\"", bm.name)).collect(),
            )),
        },
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/metamodel.md")]
    mod metamodel {}
    #[doc = include_str!("../../../book/src/policy.md")]
    mod policy {}
    #[doc = include_str!("../../../book/src/design-rules.md")]
    mod design_rules {}
    #[doc = include_str!("../../../book/src/language.md")]
    mod language {}
    #[doc = include_str!("../../../book/src/exports.md")]
    mod exports {}
}
