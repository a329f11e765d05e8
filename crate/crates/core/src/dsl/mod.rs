//! The `.nfr` requirements language: lexer, parser, validator and
//! canonical serializer.

mod ast;
mod compile;
mod diagnostic;
mod lexer;
mod parser;
mod resolve;
mod serialize;

pub use ast::*;
pub use compile::{compile, validate, CompiledSpec};
pub use diagnostic::{has_errors, Diagnostic, Severity, Span};
pub use lexer::{is_identifier, tokenize, Keyword, Punct, Token, TokenKind};
pub use parser::{parse, parse_threshold};
pub use serialize::{format_number, quote, serialize};

/// Parses, then validates. Errors from either stage come back together;
/// on success the warnings are returned with the compiled spec.
pub fn check(text: &str) -> Result<(RequirementSpec, CompiledSpec, Vec<Diagnostic>), Vec<Diagnostic>> {
    let spec = parse(text)?;
    match compile(&spec) {
        Ok((compiled, mut warnings)) => {
            for w in &mut warnings {
                w.attach_source(text);
            }
            Ok((spec, compiled, warnings))
        }
        Err(mut diags) => {
            for d in &mut diags {
                d.attach_source(text);
            }
            Err(diags)
        }
    }
}
