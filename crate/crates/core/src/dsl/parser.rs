//! Recursive-descent parser producing a span-carrying source tree.
//!
//! After an error the parser resynchronizes at the next item boundary (`}`,
//! a kind keyword, `business_model`, or an identifier followed by a verb),
//! so one pass reports every independent syntax error.

use crate::diagnostic::Diagnostic;
use crate::dsl::lexer::{Keyword, Token, TokenKind, Verb};
use crate::model::{ElementKind, RelationshipKind, Span};
use crate::rules::classify_verb;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned<T> {
    pub value: T,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceTree {
    pub enterprise: Option<EnterpriseNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnterpriseNode {
    pub name: Spanned<String>,
    pub business_models: Vec<BusinessModelNode>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BusinessModelNode {
    pub name: Spanned<String>,
    pub items: Vec<Item>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Element(ElementNode),
    Relationship(RelationshipNode),
    BusinessModel(BusinessModelNode),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementNode {
    pub kind: Spanned<ElementKind>,
    pub id: Spanned<String>,
    pub name: Option<Spanned<String>>,
    pub description: Option<Spanned<String>>,
    pub vrin: Option<Spanned<[bool; 4]>>,
    pub children: Vec<ElementNode>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationshipNode {
    pub source: Spanned<String>,
    pub verb: Spanned<Verb>,
    pub target: Spanned<String>,
    pub label: Option<Spanned<String>>,
    pub span: Span,
}

pub fn parse(tokens: &[Token]) -> (SourceTree, Vec<Diagnostic>) {
    let mut eof = tokens.last().cloned();
    if !matches!(eof.as_ref().map(|t| &t.kind), Some(TokenKind::Eof)) {
        let end = eof.as_ref().map(|t| t.span.end).unwrap_or(0);
        eof = Some(Token {
            kind: TokenKind::Eof,
            lexeme: String::new(),
            span: Span::new(end, end),
            newline_before: false,
        });
    }
    let mut p = Parser {
        tokens,
        eof: eof.expect("set above"),
        pos: 0,
        diagnostics: Vec::new(),
    };
    let tree = p.file();
    (tree, p.diagnostics)
}

struct Parser<'t> {
    tokens: &'t [Token],
    eof: Token,
    pos: usize,
    diagnostics: Vec<Diagnostic>,
}

impl<'t> Parser<'t> {
    fn peek_n(&self, n: usize) -> &Token {
        self.tokens.get(self.pos + n).unwrap_or(&self.eof)
    }

    fn peek(&self) -> &Token {
        self.peek_n(0)
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn at_keyword(&self, kw: Keyword) -> bool {
        self.peek().kind == TokenKind::Keyword(kw)
    }

    fn at_kind(&self) -> bool {
        matches!(self.peek().kind, TokenKind::Keyword(Keyword::Kind(_)))
    }

    fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    fn at_rbrace(&self) -> bool {
        self.peek().kind == TokenKind::RBrace
    }

    fn at_relationship_start(&self) -> bool {
        self.peek().kind == TokenKind::Ident
            && matches!(self.peek_n(1).kind, TokenKind::Keyword(Keyword::Verb(_)))
    }

    fn error(&mut self, message: impl Into<String>, span: Span) {
        self.diagnostics
            .push(Diagnostic::error("E001", message).with_span(Some(span)));
    }

    fn unexpected(&mut self, expected: &str) {
        let t = self.peek().clone();
        let found = if t.kind == TokenKind::Eof {
            "end of input".to_string()
        } else {
            format!("`{}`", t.lexeme)
        };
        self.error(format!("expected {expected}, found {found}"), t.span);
    }

    fn at_item_boundary(&self) -> bool {
        self.at_eof()
            || self.at_rbrace()
            || self.at_kind()
            || self.at_keyword(Keyword::BusinessModel)
            || self.at_relationship_start()
    }

    fn recover_item(&mut self) {
        if !self.at_item_boundary() {
            self.bump();
        }
        while !self.at_item_boundary() {
            self.bump();
        }
    }

    fn string(&mut self) -> Option<Spanned<String>> {
        if let TokenKind::Str(value) = &self.peek().kind {
            let value = value.clone();
            let span = self.bump().span;
            Some(Spanned { value, span })
        } else {
            None
        }
    }

    fn ident(&mut self) -> Option<Spanned<String>> {
        if self.peek().kind == TokenKind::Ident {
            let t = self.bump();
            Some(Spanned {
                value: t.lexeme,
                span: t.span,
            })
        } else {
            None
        }
    }

    fn open_brace(&mut self, after: &str) {
        if self.peek().kind == TokenKind::LBrace {
            self.bump();
        } else {
            self.unexpected(&format!("`{{` after {after}"));
        }
    }

    fn file(&mut self) -> SourceTree {
        if !self.at_keyword(Keyword::Enterprise) {
            self.unexpected("`enterprise`");
            while !self.at_eof() && !self.at_keyword(Keyword::Enterprise) {
                self.bump();
            }
        }
        let enterprise = if self.at_keyword(Keyword::Enterprise) {
            Some(self.enterprise())
        } else {
            None
        };
        if !self.at_eof() {
            self.unexpected("end of input after the enterprise block");
        }
        SourceTree { enterprise }
    }

    fn enterprise(&mut self) -> EnterpriseNode {
        let kw = self.bump();
        let name = self.string().unwrap_or_else(|| {
            self.unexpected("enterprise name string");
            Spanned {
                value: String::new(),
                span: kw.span,
            }
        });
        self.open_brace("enterprise name");
        let mut business_models = Vec::new();
        let end = loop {
            if self.at_keyword(Keyword::BusinessModel) {
                business_models.push(self.business_model());
            } else if self.at_rbrace() {
                break self.bump().span;
            } else if self.at_eof() {
                self.error("unclosed enterprise block; missing `}`", kw.span);
                break self.peek().span;
            } else {
                self.unexpected("`business_model` or `}`");
                self.bump();
                while !(self.at_eof()
                    || self.at_rbrace()
                    || self.at_keyword(Keyword::BusinessModel))
                {
                    self.bump();
                }
            }
        };
        EnterpriseNode {
            name,
            business_models,
            span: kw.span.join(end),
        }
    }

    fn business_model(&mut self) -> BusinessModelNode {
        let kw = self.bump();
        let name = self.string().unwrap_or_else(|| {
            self.unexpected("business model name string");
            Spanned {
                value: String::new(),
                span: kw.span,
            }
        });
        self.open_brace("business model name");
        let mut items = Vec::new();
        let end = loop {
            let t = self.peek().clone();
            match &t.kind {
                TokenKind::Keyword(Keyword::Kind(_)) => {
                    if let Some(e) = self.element() {
                        items.push(Item::Element(e));
                    }
                }
                TokenKind::Keyword(Keyword::BusinessModel) => {
                    items.push(Item::BusinessModel(self.business_model()));
                }
                TokenKind::Ident => {
                    if let Some(r) = self.relationship() {
                        items.push(Item::Relationship(r));
                    }
                }
                TokenKind::RBrace => break self.bump().span,
                TokenKind::Eof => {
                    self.error("unclosed business model block; missing `}`", kw.span);
                    break t.span;
                }
                _ => {
                    self.unexpected("an element, a relationship, `business_model` or `}`");
                    self.recover_item();
                }
            }
        };
        BusinessModelNode {
            name,
            items,
            span: kw.span.join(end),
        }
    }

    fn element(&mut self) -> Option<ElementNode> {
        let kw = self.bump();
        let TokenKind::Keyword(Keyword::Kind(kind)) = kw.kind else {
            unreachable!("called at a kind keyword")
        };
        let id = self.ident();
        if id.is_none() {
            self.unexpected("element id");
        }
        let name = self.string();
        let mut node = ElementNode {
            kind: Spanned {
                value: kind,
                span: kw.span,
            },
            id: id.clone().unwrap_or(Spanned {
                value: String::new(),
                span: kw.span,
            }),
            name,
            description: None,
            vrin: None,
            children: Vec::new(),
            span: kw.span,
        };
        node.span = node
            .name
            .as_ref()
            .map(|n| n.span)
            .or(id.as_ref().map(|i| i.span))
            .unwrap_or(kw.span)
            .join(kw.span);
        if self.peek().kind == TokenKind::LBrace {
            let end = self.element_body(&mut node);
            node.span = node.span.join(end);
        }
        id.map(|_| node)
    }

    fn element_body(&mut self, node: &mut ElementNode) -> Span {
        let open = self.bump();
        loop {
            let t = self.peek().clone();
            match &t.kind {
                TokenKind::Keyword(Keyword::Desc) => {
                    self.bump();
                    match self.string() {
                        Some(s) if node.description.is_some() => {
                            self.error("duplicate `desc`", t.span.join(s.span));
                        }
                        Some(s) => node.description = Some(s),
                        None => self.unexpected("description string after `desc`"),
                    }
                }
                TokenKind::Keyword(Keyword::Vrin) => {
                    self.bump();
                    let mut flags = [false; 4];
                    let mut span = t.span;
                    let mut complete = true;
                    for flag in &mut flags {
                        if let TokenKind::Keyword(Keyword::Bool(b)) = self.peek().kind {
                            *flag = b;
                            span = span.join(self.bump().span);
                        } else {
                            self.unexpected(
                                "four booleans after `vrin` (valuable rare inimitable non_substitutable)",
                            );
                            complete = false;
                            // a stray word stands in for the flag; skip it
                            if matches!(self.peek().kind, TokenKind::Ident | TokenKind::Str(_)) {
                                self.bump();
                            }
                            break;
                        }
                    }
                    if complete {
                        if node.vrin.is_some() {
                            self.error("duplicate `vrin`", span);
                        } else {
                            node.vrin = Some(Spanned { value: flags, span });
                        }
                    }
                }
                TokenKind::Keyword(Keyword::Kind(_)) => {
                    if let Some(child) = self.element() {
                        node.children.push(child);
                    }
                }
                TokenKind::RBrace => return self.bump().span,
                TokenKind::Eof => {
                    self.error("unclosed element body; missing `}`", open.span);
                    return t.span;
                }
                _ => {
                    self.unexpected("`desc`, `vrin`, a nested element or `}`");
                    self.bump();
                    while !(self.at_eof()
                        || self.at_rbrace()
                        || self.at_kind()
                        || self.at_keyword(Keyword::Desc)
                        || self.at_keyword(Keyword::Vrin))
                    {
                        self.bump();
                    }
                }
            }
        }
    }

    fn relationship(&mut self) -> Option<RelationshipNode> {
        let source = self.ident().expect("called at an identifier");
        match self.peek().kind.clone() {
            TokenKind::Keyword(Keyword::Verb(verb)) => {
                let verb_span = self.bump().span;
                let Some(target) = self.ident() else {
                    self.unexpected(&format!("target element id after `{}`", self.tokens[self.pos - 1].lexeme));
                    return None;
                };
                let mut span = source.span.join(target.span);
                let label = if self.peek().kind == TokenKind::Comma {
                    self.bump();
                    let label = self.string();
                    match &label {
                        Some(l) => span = span.join(l.span),
                        None => self.unexpected("label string after `,`"),
                    }
                    label
                } else {
                    None
                };
                Some(RelationshipNode {
                    source,
                    verb: Spanned {
                        value: verb,
                        span: verb_span,
                    },
                    target,
                    label,
                    span,
                })
            }
            TokenKind::Ident => {
                self.unknown_verb(&source);
                None
            }
            _ => {
                self.unexpected(&format!("a relationship verb after `{}`", source.value));
                self.recover_item();
                None
            }
        }
    }

    /// `A generates B` or `A may be acquired from B`: the words up to the
    /// end of the line (or the next statement) are the phrase plus target.
    fn unknown_verb(&mut self, source: &Spanned<String>) {
        let mut words: Vec<Token> = Vec::new();
        while self.peek().kind == TokenKind::Ident
            && !self.at_relationship_start()
            && !(self.peek().newline_before && !words.is_empty())
        {
            words.push(self.bump());
        }
        let (phrase_words, target) = if words.len() >= 2 {
            let target = words.pop();
            (words, target)
        } else {
            (words, None)
        };
        let Some(first) = phrase_words.first() else {
            self.unexpected(&format!("a relationship verb after `{}`", source.value));
            self.recover_item();
            return;
        };
        let span = first.span.join(phrase_words.last().expect("non-empty").span);
        let phrase = phrase_words
            .iter()
            .map(|w| w.lexeme.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        let readable = phrase.replace('_', " ");
        let target_text = target.as_ref().map(|t| t.lexeme.as_str()).unwrap_or("…");
        let hint = match classify_verb(&readable) {
            Some(kind) => format!(
                "`{readable}` classifies as `{kind}`; write `{} {kind} {target_text}` or `{target_text} {} {}`",
                source.value,
                kind.passive_verb(),
                source.value
            ),
            None => format!(
                "relationship verbs are {}",
                RelationshipKind::ALL
                    .iter()
                    .flat_map(|k| [k.verb(), k.passive_verb()])
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        };
        self.diagnostics.push(
            Diagnostic::error("E006", format!("unknown relationship verb `{phrase}`"))
                .with_span(Some(span))
                .with_hint(hint),
        );
        if self.peek().kind == TokenKind::Comma {
            self.bump();
            self.string();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::lexer::tokenize;

    fn parse_text(text: &str) -> (SourceTree, Vec<Diagnostic>) {
        let (tokens, mut diags) = tokenize(text);
        let (tree, more) = parse(&tokens);
        diags.extend(more);
        (tree, diags)
    }

    #[test]
    fn minimal_file() {
        let (tree, diags) = parse_text(r#"enterprise "E" { business_model "B" {} }"#);
        assert!(diags.is_empty(), "{diags:?}");
        let e = tree.enterprise.unwrap();
        assert_eq!(e.business_models.len(), 1);
        assert_eq!(e.business_models[0].name.value, "B");
    }

    #[test]
    fn missing_brace_recovers() {
        let (tree, diags) = parse_text(
            r#"enterprise "E" { business_model "B" key_resource F "Factory" F supports F } }"#,
        );
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert!(diags[0].message.contains("`{`"));
        let bm = &tree.enterprise.unwrap().business_models[0];
        assert_eq!(bm.items.len(), 2);
    }

    #[test]
    fn relationships_may_precede_elements() {
        let (tree, diags) = parse_text(
            r#"enterprise "E" { business_model "B" { A supports B key_resource A key_activity B } }"#,
        );
        assert!(diags.is_empty());
        let bm = &tree.enterprise.unwrap().business_models[0];
        assert!(matches!(bm.items[0], Item::Relationship(_)));
    }

    #[test]
    fn multiple_errors_in_one_pass() {
        let (_, diags) = parse_text(
            r#"enterprise "E" { business_model "B" {
                key_resource "no id"
                key_activity K { vrin true maybe }
                , ,
                K supports
                customer_segment C
            } }"#,
        );
        let codes: Vec<_> = diags.iter().map(|d| d.code.as_str()).collect();
        assert_eq!(codes, ["E001", "E001", "E001", "E001"], "{diags:#?}");
    }

    #[test]
    fn unknown_verbs() {
        let (tree, diags) = parse_text(
            r#"enterprise "E" { business_model "B" {
                C generates P
                K may be acquired from P
                X purchases Y
                C determines P
            } }"#,
        );
        let d: Vec<_> = diags.iter().map(|d| (d.code.as_str(), d.message.as_str())).collect();
        assert_eq!(
            d,
            [
                ("E006", "unknown relationship verb `generates`"),
                ("E006", "unknown relationship verb `may be acquired from`"),
                ("E006", "unknown relationship verb `purchases`"),
            ]
        );
        assert!(diags[0].fix_hint.as_deref().unwrap().contains("`determines`"));
        assert!(diags[0]
            .fix_hint
            .as_deref()
            .unwrap()
            .contains("write `C determines P`"));
        assert!(diags[2].fix_hint.as_deref().unwrap().starts_with("relationship verbs are"));
        let bm = &tree.enterprise.unwrap().business_models[0];
        assert_eq!(bm.items.len(), 1);
    }

    #[test]
    fn unknown_verb_does_not_swallow_next_statement() {
        let (tree, diags) = parse_text(
            r#"enterprise "E" { business_model "B" { A foo B C supports D } }"#,
        );
        assert_eq!(diags.len(), 1);
        let bm = &tree.enterprise.unwrap().business_models[0];
        assert_eq!(bm.items.len(), 1);
    }

    #[test]
    fn garbage_never_loops() {
        for text in ["", "}", "{{{{", "enterprise", "enterprise \"x\" { business_model", "enterprise \"x\" { ,,, } }}"] {
            let _ = parse_text(text);
        }
    }
}
