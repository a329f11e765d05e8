use std::fmt;

use serde::Serialize;

/// Start position of a token or declaration, 1-based, columns in chars.
///
/// Positions never take part in equality: two specs that differ only in
/// layout compare equal.
#[derive(Debug, Clone, Copy, Default, Eq, Serialize)]
pub struct Span {
    pub line: u32,
    pub column: u32,
}

impl Span {
    pub fn new(line: u32, column: u32) -> Self {
        Self { line, column }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: u32,
    pub column: u32,
    pub message: String,
    /// The offending source line, when the text is known.
    pub snippet: String,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, span, message)
    }

    pub fn warning(span: Span, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, span, message)
    }

    fn new(severity: Severity, span: Span, message: impl Into<String>) -> Self {
        Self {
            severity,
            line: span.line,
            column: span.column,
            message: message.into(),
            snippet: String::new(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Fills in the snippet from the source text.
    pub fn attach_source(&mut self, source: &str) {
        if self.line > 0 {
            if let Some(text) = source.lines().nth(self.line as usize - 1) {
                self.snippet = text.to_string();
            }
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{kind}: {}:{}: {}", self.line, self.column, self.message)?;
        if !self.snippet.is_empty() {
            let caret = " ".repeat(self.column.saturating_sub(1) as usize);
            write!(f, "\n  | {}\n  | {caret}^", self.snippet)?;
        }
        Ok(())
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
