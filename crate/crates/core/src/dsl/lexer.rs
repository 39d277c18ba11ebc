//! Maximal-munch tokenizer. Whitespace, `//` line comments and `/* */`
//! block comments are trivia; illegal characters are skipped with a
//! diagnostic.

use crate::diagnostic::Diagnostic;
use crate::model::{ElementKind, RelationshipKind, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verb {
    pub kind: RelationshipKind,
    pub passive: bool,
}

impl Verb {
    pub fn from_word(word: &str) -> Option<Verb> {
        RelationshipKind::ALL.into_iter().find_map(|kind| {
            if word == kind.verb() {
                Some(Verb { kind, passive: false })
            } else if word == kind.passive_verb() {
                Some(Verb { kind, passive: true })
            } else {
                None
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Enterprise,
    BusinessModel,
    Desc,
    Vrin,
    Bool(bool),
    Kind(ElementKind),
    Verb(Verb),
}

impl Keyword {
    fn from_word(word: &str) -> Option<Keyword> {
        Some(match word {
            "enterprise" => Keyword::Enterprise,
            "business_model" => Keyword::BusinessModel,
            "desc" => Keyword::Desc,
            "vrin" => Keyword::Vrin,
            "true" => Keyword::Bool(true),
            "false" => Keyword::Bool(false),
            _ => {
                if let Some(kind) = ElementKind::from_token(word) {
                    Keyword::Kind(kind)
                } else {
                    Keyword::Verb(Verb::from_word(word)?)
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    /// A word that is not a keyword. May still be a malformed id (`9x`);
    /// that is reported where an id is bound.
    Ident,
    /// Decoded string contents.
    Str(String),
    LBrace,
    RBrace,
    Comma,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Exact source slice.
    pub lexeme: String,
    pub span: Span,
    /// Whether trivia before this token contains a line break. Only used
    /// as a recovery heuristic; the grammar itself ignores newlines.
    pub newline_before: bool,
}

impl Token {
    pub fn is(&self, kind: &TokenKind) -> bool {
        &self.kind == kind
    }
}

pub fn tokenize(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    Lexer {
        text,
        pos: 0,
        tokens: Vec::new(),
        diagnostics: Vec::new(),
    }
    .run()
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    tokens: Vec<Token>,
    diagnostics: Vec<Diagnostic>,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl Lexer<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.text[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn push(&mut self, kind: TokenKind, start: usize) {
        let newline_before = self.newline_before(start);
        self.tokens.push(Token {
            kind,
            lexeme: self.text[start..self.pos].to_string(),
            span: Span::new(start, self.pos),
            newline_before,
        });
    }

    fn newline_before(&self, start: usize) -> bool {
        let prev_end = self.tokens.last().map(|t| t.span.end).unwrap_or(0);
        self.text[prev_end..start].contains('\n')
    }

    fn error(&mut self, message: impl Into<String>, span: Span) {
        self.diagnostics
            .push(Diagnostic::error("E001", message).with_span(Some(span)));
    }

    fn run(mut self) -> (Vec<Token>, Vec<Diagnostic>) {
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                c if c.is_whitespace() => {
                    self.bump();
                }
                '/' if self.peek_at(1) == Some('/') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                '/' if self.peek_at(1) == Some('*') => {
                    self.pos += 2;
                    match self.text[self.pos..].find("*/") {
                        Some(i) => self.pos += i + 2,
                        None => {
                            self.pos = self.text.len();
                            self.error("unterminated block comment", Span::new(start, self.pos));
                        }
                    }
                }
                '{' => {
                    self.bump();
                    self.push(TokenKind::LBrace, start);
                }
                '}' => {
                    self.bump();
                    self.push(TokenKind::RBrace, start);
                }
                ',' => {
                    self.bump();
                    self.push(TokenKind::Comma, start);
                }
                '"' => self.string(),
                c if is_word_char(c) => self.word(),
                c => {
                    self.bump();
                    self.error(
                        format!("illegal character `{}`", c.escape_default()),
                        Span::new(start, self.pos),
                    );
                }
            }
        }
        let end = self.text.len();
        let newline_before = self.newline_before(end);
        self.tokens.push(Token {
            kind: TokenKind::Eof,
            lexeme: String::new(),
            span: Span::new(end, end),
            newline_before,
        });
        (self.tokens, self.diagnostics)
    }

    fn word(&mut self) {
        let start = self.pos;
        while self.peek().is_some_and(is_word_char) {
            self.bump();
        }
        // `R$` and `C$` are the only words with a non-word character
        let word = &self.text[start..self.pos];
        if (word == "R" || word == "C") && self.peek() == Some('$') {
            self.bump();
        }
        let word = &self.text[start..self.pos];
        let kind = match Keyword::from_word(word) {
            Some(k) => TokenKind::Keyword(k),
            None => TokenKind::Ident,
        };
        self.push(kind, start);
    }

    fn string(&mut self) {
        let start = self.pos;
        self.bump();
        let mut value = String::new();
        loop {
            match self.bump() {
                None => {
                    self.error("unterminated string", Span::new(start, self.pos));
                    break;
                }
                Some('"') => break,
                Some('\\') => {
                    let esc_start = self.pos - 1;
                    match self.bump() {
                        Some('"') => value.push('"'),
                        Some('\\') => value.push('\\'),
                        Some('n') => value.push('\n'),
                        Some(other) => {
                            self.error(
                                format!("unknown escape `\\{}`", other.escape_default()),
                                Span::new(esc_start, self.pos),
                            );
                            value.push(other);
                        }
                        None => {
                            self.error("unterminated string", Span::new(start, self.pos));
                            break;
                        }
                    }
                }
                Some(c) => value.push(c),
            }
        }
        self.push(TokenKind::Str(value), start);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).0.into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            kinds(r#"enterprise "X" {}"#),
            vec![
                TokenKind::Keyword(Keyword::Enterprise),
                TokenKind::Str("X".into()),
                TokenKind::LBrace,
                TokenKind::RBrace,
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn unterminated_string_span() {
        let (tokens, diags) = tokenize(r#"  "abc"#);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].span, Some(Span::new(2, 6)));
        assert_eq!(tokens[0].kind, TokenKind::Str("abc".into()));
    }

    #[test]
    fn comments_are_trivia() {
        let (tokens, diags) = tokenize("/* a */ key_resource F // tail");
        assert!(diags.is_empty());
        assert_eq!(tokens.len(), 3);
        assert_eq!(tokens[0].kind, TokenKind::Keyword(Keyword::Kind(ElementKind::KeyResource)));
        assert_eq!(tokens[1].kind, TokenKind::Ident);
        assert_eq!(tokens[1].lexeme, "F");
    }

    #[test]
    fn dollar_abbreviations() {
        assert_eq!(
            kinds("R$ C$ R"),
            vec![
                TokenKind::Keyword(Keyword::Kind(ElementKind::RevenueStream)),
                TokenKind::Keyword(Keyword::Kind(ElementKind::CostStructure)),
                TokenKind::Ident,
                TokenKind::Eof
            ]
        );
        let (_, d) = tokenize("X$");
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn escapes() {
        assert_eq!(
            kinds(r#""a\"b\\c\nd""#)[0],
            TokenKind::Str("a\"b\\c\nd".into())
        );
        let (_, d) = tokenize(r#""\t""#);
        assert_eq!(d[0].code, "E001");
    }

    #[test]
    fn verbs() {
        assert_eq!(
            kinds("is_determined_by")[0],
            TokenKind::Keyword(Keyword::Verb(Verb {
                kind: RelationshipKind::Determines,
                passive: true
            }))
        );
    }
}
