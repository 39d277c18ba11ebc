//! Diagnostics shared by every pass, plus their wire and text renderings.

use std::fmt;

use serde::Serialize;

use crate::model::{ModelError, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Codes: `DRn` rule ids appear in `rule_refs`; `E0xx` are structural and
/// semantic errors; `W1xx` are lints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub span: Option<Span>,
    pub rule_refs: Vec<String>,
    pub fix_hint: Option<String>,
}

impl Diagnostic {
    pub fn error(code: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code: code.to_string(),
            message: message.into(),
            span: None,
            rule_refs: Vec::new(),
            fix_hint: None,
        }
    }

    pub fn warning(code: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(code, message)
        }
    }

    pub fn with_span(mut self, span: Option<Span>) -> Self {
        self.span = span;
        self
    }

    pub fn with_rule(mut self, rule: impl Into<String>) -> Self {
        self.rule_refs.push(rule.into());
        self
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.fix_hint = Some(hint.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    pub fn from_model_error(err: &ModelError, span: Option<Span>) -> Self {
        Diagnostic::error(err.code(), err.to_string()).with_span(span)
    }

    pub fn to_wire(&self) -> WireDiagnostic {
        WireDiagnostic {
            severity: self.severity,
            code: self.code.clone(),
            message: self.message.clone(),
            span: self.span.map(|s| WireSpan {
                start: s.start,
                end: s.end,
            }),
            rule: (!self.rule_refs.is_empty()).then(|| self.rule_refs.join(",")),
            hint: self.fix_hint.clone(),
        }
    }

    /// `SEVERITY CODE file:line:col message [rule]`
    pub fn render_line(&self, file: &str, source: &str) -> String {
        let (line, col) = self
            .span
            .map(|s| line_col(source, s.start))
            .unwrap_or((1, 1));
        let mut out = format!(
            "{} {} {}:{}:{} {}",
            self.severity, self.code, file, line, col, self.message
        );
        if !self.rule_refs.is_empty() {
            out.push_str(&format!(" [{}]", self.rule_refs.join(",")));
        }
        out
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// The JSON shape of a diagnostic, shared by `check --json` and the service.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WireDiagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<WireSpan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WireSpan {
    pub start: usize,
    pub end: usize,
}

/// 1-based line and column (in characters) of a byte offset.
pub fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let offset = floor_char_boundary(source, offset.min(source.len()));
    let before = &source[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map(|i| i + 1).unwrap_or(0);
    let col = source[line_start..offset].chars().count() + 1;
    (line, col)
}

/// Byte offset of a 1-based (line, column) pair, clamped to the text.
pub fn offset_of(source: &str, line: usize, col: usize) -> usize {
    let mut start = 0;
    for _ in 1..line {
        match source[start..].find('\n') {
            Some(i) => start += i + 1,
            None => return source.len(),
        }
    }
    let rest = &source[start..];
    let end_of_line = rest.find('\n').unwrap_or(rest.len());
    let within = rest[..end_of_line]
        .char_indices()
        .nth(col.saturating_sub(1))
        .map(|(i, _)| i)
        .unwrap_or(end_of_line);
    start + within
}

fn floor_char_boundary(s: &str, mut i: usize) -> usize {
    while !s.is_char_boundary(i) {
        i -= 1;
    }
    i
}
