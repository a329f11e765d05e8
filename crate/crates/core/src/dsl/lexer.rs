use std::fmt;
use std::iter::Peekable;
use std::str::CharIndices;

use super::{Diagnostic, Span};

macro_rules! keywords {
    ($($variant:ident => $text:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum Keyword { $($variant),* }

        impl Keyword {
            pub const ALL: &'static [Keyword] = &[$(Keyword::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(Keyword::$variant => $text),* }
            }

            pub fn lookup(word: &str) -> Option<Keyword> {
                match word { $($text => Some(Keyword::$variant),)* _ => None }
            }
        }
    };
}

keywords! {
    Project => "project",
    Requirement => "requirement",
    Mnfr => "mnfr",
    Snfr => "snfr",
    Linguistic => "linguistic",
    Over => "over",
    Domain => "domain",
    Term => "term",
    Triangle => "triangle",
    Trapezoid => "trapezoid",
    Interval => "interval",
    Scale => "scale",
    Points => "points",
    Option_ => "option",
    Template => "template",
    Sub => "sub",
    Weight => "weight",
    Range => "range",
    Level => "level",
    Status => "status",
    Softgoal => "softgoal",
    Threshold => "threshold",
    Subgoal => "subgoal",
    Leaf => "leaf",
    Link => "link",
    Sign => "sign",
    Statement => "statement",
    VerifiedBy => "verified_by",
    Metric => "metric",
    Aggregator => "aggregator",
    Survey => "survey",
    Band => "band",
    Variable => "variable",
    Input => "input",
    Target => "target",
    Not => "not",
    Very => "very",
    Somewhat => "somewhat",
    Slightly => "slightly",
}

impl Keyword {
    /// Keywords that only ever start a top-level declaration.
    pub fn starts_declaration(self) -> bool {
        matches!(
            self,
            Keyword::Requirement
                | Keyword::Mnfr
                | Keyword::Snfr
                | Keyword::Linguistic
                | Keyword::Softgoal
                | Keyword::Link
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Punct {
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Arrow,
}

impl Punct {
    pub fn as_str(self) -> &'static str {
        match self {
            Punct::LBrace => "{",
            Punct::RBrace => "}",
            Punct::LParen => "(",
            Punct::RParen => ")",
            Punct::Colon => ":",
            Punct::Semi => ";",
            Punct::Comma => ",",
            Punct::Arrow => "->",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Number(f64),
    Str(String),
    Keyword(Keyword),
    Punct(Punct),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Number(n) => write!(f, "number `{n}`"),
            TokenKind::Str(s) => write!(f, "string \"{s}\""),
            TokenKind::Keyword(k) => write!(f, "keyword `{}`", k.as_str()),
            TokenKind::Punct(p) => write!(f, "`{}`", p.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// True when `s` can be written as a bare identifier.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ident_start)
        && chars.all(is_ident_continue)
        && Keyword::lookup(s).is_none()
        && s != "inf"
}

struct Lexer<'a> {
    src: &'a str,
    chars: Peekable<CharIndices<'a>>,
    line: u32,
    column: u32,
    tokens: Vec<Token>,
    errors: Vec<Diagnostic>,
}

impl<'a> Lexer<'a> {
    fn bump(&mut self) -> Option<(usize, char)> {
        let next = self.chars.next();
        if let Some((_, c)) = next {
            if c == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
        next
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek_second(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |&(i, _)| i)
    }

    fn push(&mut self, kind: TokenKind, start: usize, span: Span) {
        let end = self.offset();
        self.tokens.push(Token {
            kind,
            lexeme: self.src[start..end].to_string(),
            span,
        });
    }

    fn run(mut self) -> (Vec<Token>, Vec<Diagnostic>) {
        while let Some(c) = self.peek() {
            let span = Span::new(self.line, self.column);
            let start = self.offset();
            match c {
                c if c.is_whitespace() => {
                    self.bump();
                }
                '#' => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                '"' => self.string(start, span),
                c if c.is_ascii_digit() => {
                    self.number_body();
                    self.finish_number(start, span);
                }
                '-' => {
                    self.bump();
                    match self.peek() {
                        Some('>') => {
                            self.bump();
                            self.push(TokenKind::Punct(Punct::Arrow), start, span);
                        }
                        Some(d) if d.is_ascii_digit() => {
                            self.number_body();
                            self.finish_number(start, span);
                        }
                        Some('i') if self.src[self.offset()..].starts_with("inf") => {
                            let after = self.src[self.offset() + 3..].chars().next();
                            if after.is_some_and(is_ident_continue) {
                                self.errors.push(Diagnostic::error(span, "illegal character `-`"));
                            } else {
                                for _ in 0..3 {
                                    self.bump();
                                }
                                self.push(TokenKind::Number(f64::NEG_INFINITY), start, span);
                            }
                        }
                        _ => self.errors.push(Diagnostic::error(span, "illegal character `-`")),
                    }
                }
                c if is_ident_start(c) => {
                    while self.peek().is_some_and(is_ident_continue) {
                        self.bump();
                    }
                    let word = &self.src[start..self.offset()];
                    let kind = if word == "inf" {
                        TokenKind::Number(f64::INFINITY)
                    } else if let Some(k) = Keyword::lookup(word) {
                        TokenKind::Keyword(k)
                    } else {
                        TokenKind::Ident(word.to_string())
                    };
                    self.push(kind, start, span);
                }
                _ => {
                    self.bump();
                    let punct = match c {
                        '{' => Some(Punct::LBrace),
                        '}' => Some(Punct::RBrace),
                        '(' => Some(Punct::LParen),
                        ')' => Some(Punct::RParen),
                        ':' => Some(Punct::Colon),
                        ';' => Some(Punct::Semi),
                        ',' => Some(Punct::Comma),
                        _ => None,
                    };
                    match punct {
                        Some(p) => self.push(TokenKind::Punct(p), start, span),
                        None => self.errors.push(Diagnostic::error(
                            span,
                            format!("illegal character `{}`", c.escape_default()),
                        )),
                    }
                }
            }
        }
        (self.tokens, self.errors)
    }

    fn digits(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
    }

    fn number_body(&mut self) {
        self.digits();
        if self.peek() == Some('.') && self.peek_second().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            self.digits();
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let second = self.peek_second();
            let third = {
                let mut it = self.chars.clone();
                it.next();
                it.next();
                it.next().map(|(_, c)| c)
            };
            let exp = match second {
                Some(d) if d.is_ascii_digit() => true,
                Some('+' | '-') => third.is_some_and(|c| c.is_ascii_digit()),
                _ => false,
            };
            if exp {
                self.bump();
                if matches!(self.peek(), Some('+' | '-')) {
                    self.bump();
                }
                self.digits();
            }
        }
    }

    fn finish_number(&mut self, start: usize, span: Span) {
        let text = &self.src[start..self.offset()];
        match text.parse::<f64>() {
            Ok(v) => self.push(TokenKind::Number(v), start, span),
            Err(_) => self
                .errors
                .push(Diagnostic::error(span, format!("malformed number `{text}`"))),
        }
    }

    fn string(&mut self, start: usize, span: Span) {
        self.bump();
        let mut value = String::new();
        loop {
            match self.peek() {
                None | Some('\n') => {
                    self.errors.push(Diagnostic::error(span, "unterminated string"));
                    return;
                }
                Some('"') => {
                    self.bump();
                    self.push(TokenKind::Str(value), start, span);
                    return;
                }
                Some('\\') => {
                    let esc_span = Span::new(self.line, self.column);
                    self.bump();
                    match self.peek() {
                        Some(c @ ('"' | '\\')) => {
                            self.bump();
                            value.push(c);
                        }
                        Some('n') => {
                            self.bump();
                            value.push('\n');
                        }
                        Some('t') => {
                            self.bump();
                            value.push('\t');
                        }
                        Some('r') => {
                            self.bump();
                            value.push('\r');
                        }
                        Some(c) if c != '\n' => {
                            self.bump();
                            self.errors.push(Diagnostic::error(
                                esc_span,
                                format!("unknown escape `\\{}`", c.escape_default()),
                            ));
                        }
                        _ => {}
                    }
                }
                Some(c) => {
                    self.bump();
                    value.push(c);
                }
            }
        }
    }
}

/// Lexes everything it can, collecting an error for each illegal character.
pub(crate) fn lex(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    Lexer {
        src: text,
        chars: text.char_indices().peekable(),
        line: 1,
        column: 1,
        tokens: Vec::new(),
        errors: Vec::new(),
    }
    .run()
}

/// Splits `text` into tokens. Comments and whitespace are dropped.
pub fn tokenize(text: &str) -> Result<Vec<Token>, Vec<Diagnostic>> {
    let (tokens, errors) = lex(text);
    if errors.is_empty() {
        Ok(tokens)
    } else {
        Err(errors)
    }
}
