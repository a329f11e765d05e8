//! Recursive-descent parser for `.nfr` files.
//!
//! Errors are collected rather than returned early. After an error the
//! parser skips to the end of the current item (`;` or a closing `}`) or
//! declaration and carries on, so one run reports every problem.

use std::collections::HashMap;

use super::ast::*;
use super::lexer::{lex, Keyword, Punct, Token, TokenKind};
use super::{resolve, Diagnostic, Span};
use crate::fuzzy::Hedge;
use crate::ingest::Aggregator;

type PResult<T> = Result<T, ()>;

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    depth: i32,
    end: Span,
    diags: Vec<Diagnostic>,
}

fn end_span(text: &str) -> Span {
    let line = text.matches('\n').count() as u32 + 1;
    let last = text.rsplit('\n').next().unwrap_or("");
    Span::new(line, last.chars().count() as u32 + 1)
}

/// Parses and resolves a `.nfr` document. On failure every diagnostic
/// found is returned, with source snippets attached.
pub fn parse(text: &str) -> Result<RequirementSpec, Vec<Diagnostic>> {
    let (tokens, mut diags) = lex(text);
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        depth: 0,
        end: end_span(text),
        diags: Vec::new(),
    };
    let spec = parser.spec();
    diags.append(&mut parser.diags);
    if diags.is_empty() {
        if let Some(spec) = &spec {
            diags = resolve::resolve(spec);
        }
    }
    diags.sort_by_key(|d| (d.line, d.column));
    match spec {
        Some(spec) if diags.is_empty() => Ok(spec),
        _ => {
            for d in &mut diags {
                d.attach_source(text);
            }
            Err(diags)
        }
    }
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn span(&self) -> Span {
        self.tokens.get(self.pos).map_or(self.end, |t| t.span)
    }

    fn at_punct(&self, p: Punct) -> bool {
        self.peek() == Some(&TokenKind::Punct(p))
    }

    fn at_kw(&self, k: Keyword) -> bool {
        self.peek() == Some(&TokenKind::Keyword(k))
    }

    fn at_decl_start(&self) -> bool {
        matches!(self.peek(), Some(TokenKind::Keyword(k)) if k.starts_declaration())
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let tok = self.tokens.get(self.pos)?;
        self.pos += 1;
        match tok.kind {
            TokenKind::Punct(Punct::LBrace) => self.depth += 1,
            TokenKind::Punct(Punct::RBrace) => self.depth -= 1,
            _ => {}
        }
        Some(tok)
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(kind) => kind.to_string(),
            None => "end of input".to_string(),
        }
    }

    fn error_at(&mut self, span: Span, message: impl Into<String>) {
        self.diags.push(Diagnostic::error(span, message));
    }

    fn expected<T>(&mut self, what: &str) -> PResult<T> {
        let message = format!("expected {what}, found {}", self.found());
        self.error_at(self.span(), message);
        Err(())
    }

    fn expect_punct(&mut self, p: Punct) -> PResult<Span> {
        if self.at_punct(p) {
            let span = self.span();
            self.bump();
            Ok(span)
        } else {
            self.expected(&format!("`{}`", p.as_str()))
        }
    }

    fn expect_kw(&mut self, k: Keyword) -> PResult<Span> {
        if self.at_kw(k) {
            let span = self.span();
            self.bump();
            Ok(span)
        } else {
            self.expected(&format!("`{}`", k.as_str()))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let span = self.span();
                self.bump();
                Ok((name.clone(), span))
            }
            _ => self.expected(&format!("{what} (an identifier)")),
        }
    }

    fn expect_string(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek() {
            Some(TokenKind::Str(s)) => {
                let span = self.span();
                self.bump();
                Ok((s.clone(), span))
            }
            _ => self.expected(&format!("{what} (a quoted string)")),
        }
    }

    fn expect_id_string(&mut self, what: &str) -> PResult<(String, Span)> {
        let (id, span) = self.expect_string(what)?;
        if id.is_empty() {
            self.error_at(span, format!("{what} must not be empty"));
            return Err(());
        }
        Ok((id, span))
    }

    fn expect_number(&mut self, what: &str) -> PResult<f64> {
        match self.peek() {
            Some(TokenKind::Number(n)) => {
                self.bump();
                Ok(*n)
            }
            _ => self.expected(&format!("{what} (a number)")),
        }
    }

    fn expect_integer(&mut self, what: &str) -> PResult<i64> {
        let span = self.span();
        let n = self.expect_number(what)?;
        if n.fract() != 0.0 || !n.is_finite() || n.abs() > 1e15 {
            self.error_at(span, format!("{what} must be an integer, found {n}"));
            return Err(());
        }
        Ok(n as i64)
    }

    /// Skips to the end of the current block item: past a `;` or a
    /// balanced `{ ... }`, stopping before the enclosing `}`.
    fn skip_item(&mut self) {
        let mut nesting = 0;
        loop {
            match self.peek() {
                None => return,
                Some(TokenKind::Punct(Punct::RBrace)) if nesting == 0 => return,
                Some(TokenKind::Keyword(k)) if k.starts_declaration() => return,
                _ => {}
            }
            match self.bump().map(|t| &t.kind) {
                Some(TokenKind::Punct(Punct::LBrace)) => nesting += 1,
                Some(TokenKind::Punct(Punct::RBrace)) => {
                    nesting -= 1;
                    if nesting == 0 {
                        return;
                    }
                }
                Some(TokenKind::Punct(Punct::Semi)) if nesting == 0 => return,
                _ => {}
            }
        }
    }

    /// Skips to the end of the current top-level declaration.
    fn skip_decl(&mut self, base: i32) {
        loop {
            match self.peek() {
                None => return,
                Some(TokenKind::Keyword(k))
                    if k.starts_declaration()
                        || (self.depth == base && matches!(k, Keyword::Scale | Keyword::Template)) =>
                {
                    self.depth = base;
                    return;
                }
                Some(TokenKind::Punct(Punct::RBrace)) if self.depth == base => return,
                _ => {}
            }
            let tok = self.bump().map(|t| &t.kind);
            if self.depth == base && matches!(tok, Some(TokenKind::Punct(Punct::RBrace | Punct::Semi))) {
                return;
            }
        }
    }

    /// Runs `item` until the closing `}` of a block, recovering per item.
    fn block_items(&mut self, mut item: impl FnMut(&mut Self) -> PResult<()>) -> PResult<()> {
        self.expect_punct(Punct::LBrace)?;
        while self.peek().is_some() && !self.at_punct(Punct::RBrace) && !self.at_decl_start() {
            let before = self.pos;
            if item(self).is_err() {
                self.skip_item();
                if self.pos == before && !self.at_punct(Punct::RBrace) && !self.at_decl_start() {
                    self.bump();
                }
            }
        }
        self.expect_punct(Punct::RBrace)?;
        Ok(())
    }

    fn spec(&mut self) -> Option<RequirementSpec> {
        let span = self.span();
        self.expect_kw(Keyword::Project).ok()?;
        let (project, _) = self.expect_string("project name").ok()?;
        self.expect_punct(Punct::LBrace).ok()?;
        let base = self.depth;
        let mut spec = RequirementSpec {
            project,
            span,
            ..RequirementSpec::default()
        };
        loop {
            let result = match self.peek() {
                None => {
                    self.error_at(self.end, "expected `}` to close the project, found end of input");
                    break;
                }
                Some(TokenKind::Punct(Punct::RBrace)) => {
                    self.bump();
                    break;
                }
                Some(TokenKind::Keyword(k)) => match k {
                    Keyword::Requirement | Keyword::Mnfr | Keyword::Snfr => {
                        self.requirement(*k).map(|r| spec.requirements.push(r))
                    }
                    Keyword::Linguistic => self.linguistic().map(|v| spec.variables.push(v)),
                    Keyword::Scale => self.scale().map(|s| spec.scales.push(s)),
                    Keyword::Template => self.template().map(|t| spec.templates.push(t)),
                    Keyword::Softgoal => self.softgoal().map(|g| spec.softgoals.push(g)),
                    Keyword::Link => self.link().map(|l| spec.links.push(l)),
                    _ => self.expected("a declaration"),
                },
                Some(_) => self.expected("a declaration"),
            };
            if result.is_err() {
                self.skip_decl(base);
            }
        }
        if self.peek().is_some() {
            let message = format!("unexpected {} after the end of the project", self.found());
            self.error_at(self.span(), message);
        }
        Some(spec)
    }

    fn shape(&mut self) -> PResult<Shape> {
        let span = self.span();
        let kind = match self.peek() {
            Some(TokenKind::Keyword(k @ (Keyword::Triangle | Keyword::Trapezoid | Keyword::Interval))) => *k,
            _ => return self.expected("`triangle`, `trapezoid` or `interval`"),
        };
        self.bump();
        self.expect_punct(Punct::LParen)?;
        let mut args = vec![self.expect_number("shape parameter")?];
        while self.at_punct(Punct::Comma) {
            self.bump();
            args.push(self.expect_number("shape parameter")?);
        }
        self.expect_punct(Punct::RParen)?;
        let flag = |v: f64| {
            if v == 1.0 {
                Some(true)
            } else if v == 0.0 {
                Some(false)
            } else {
                None
            }
        };
        match (kind, args.as_slice()) {
            (Keyword::Triangle, &[a, b, c]) => Ok(Shape::Triangle { a, b, c }),
            (Keyword::Trapezoid, &[a, b, c, d]) => Ok(Shape::Trapezoid { a, b, c, d }),
            (Keyword::Interval, &[lo, hi]) => Ok(Shape::Interval {
                lo,
                hi,
                lo_inclusive: true,
                hi_inclusive: true,
            }),
            (Keyword::Interval, &[lo, hi, l, h]) => match (flag(l), flag(h)) {
                (Some(lo_inclusive), Some(hi_inclusive)) => Ok(Shape::Interval {
                    lo,
                    hi,
                    lo_inclusive,
                    hi_inclusive,
                }),
                _ => {
                    self.error_at(span, "interval inclusivity flags must be 0 or 1");
                    Err(())
                }
            },
            (k, _) => {
                let expected = match k {
                    Keyword::Triangle => "3 parameters",
                    Keyword::Trapezoid => "4 parameters",
                    _ => "2 or 4 parameters",
                };
                self.error_at(span, format!("`{}` takes {expected}, found {}", k.as_str(), args.len()));
                Err(())
            }
        }
    }

    fn pair(&mut self, what: &str) -> PResult<(f64, f64)> {
        self.expect_punct(Punct::LParen)?;
        let lo = self.expect_number(what)?;
        self.expect_punct(Punct::Comma)?;
        let hi = self.expect_number(what)?;
        self.expect_punct(Punct::RParen)?;
        Ok((lo, hi))
    }

    fn linguistic(&mut self) -> PResult<VariableDecl> {
        let span = self.span();
        self.bump();
        let (name, _) = self.expect_ident("variable name")?;
        self.expect_kw(Keyword::Over)?;
        let (unit, _) = self.expect_ident("unit")?;
        let domain = if self.at_kw(Keyword::Domain) {
            self.bump();
            Some(self.pair("domain bound")?)
        } else {
            None
        };
        let mut terms = Vec::new();
        self.block_items(|p| {
            let span = p.span();
            p.expect_kw(Keyword::Term)?;
            let (name, _) = p.expect_ident("term name")?;
            p.expect_punct(Punct::Colon)?;
            let shape = p.shape()?;
            p.expect_punct(Punct::Semi)?;
            terms.push(TermDecl { name, shape, span });
            Ok(())
        })?;
        Ok(VariableDecl {
            name,
            unit,
            domain,
            terms,
            span,
        })
    }

    fn scale(&mut self) -> PResult<ScaleDecl> {
        let span = self.span();
        self.bump();
        let (name, _) = self.expect_ident("scale name")?;
        if self.at_kw(Keyword::Points) {
            self.bump();
            let points = self.expect_integer("point count")?;
            self.expect_punct(Punct::Semi)?;
            return Ok(ScaleDecl {
                name,
                def: ScaleDef::Standard(points),
                span,
            });
        }
        if !self.at_punct(Punct::LBrace) {
            return self.expected("`points` or `{`");
        }
        let mut options = Vec::new();
        self.block_items(|p| {
            p.expect_kw(Keyword::Option_)?;
            let (label, _) = p.expect_string("option label")?;
            p.expect_punct(Punct::Colon)?;
            let value = p.expect_integer("option value")?;
            p.expect_punct(Punct::Semi)?;
            options.push((label, value));
            Ok(())
        })?;
        Ok(ScaleDecl {
            name,
            def: ScaleDef::Custom(options),
            span,
        })
    }

    fn template(&mut self) -> PResult<TemplateDecl> {
        let span = self.span();
        self.bump();
        let (name, _) = self.expect_ident("template name")?;
        let mut subs = Vec::new();
        let mut rows = Vec::new();
        self.block_items(|p| {
            if p.at_kw(Keyword::Sub) {
                subs.push(p.sub_nfr()?);
            } else if p.at_kw(Keyword::Status) {
                let span = p.span();
                p.bump();
                let (status, _) = match p.peek() {
                    Some(TokenKind::Str(_)) => p.expect_id_string("status name")?,
                    _ => p.expect_ident("status name")?,
                };
                p.expect_punct(Punct::Colon)?;
                let mut levels = vec![p.expect_ident("level name")?.0];
                while p.at_punct(Punct::Comma) {
                    p.bump();
                    levels.push(p.expect_ident("level name")?.0);
                }
                p.expect_punct(Punct::Semi)?;
                rows.push(RowDecl { status, levels, span });
            } else {
                return p.expected("`sub` or `status`");
            }
            Ok(())
        })?;
        Ok(TemplateDecl { name, subs, rows, span })
    }

    fn sub_nfr(&mut self) -> PResult<SubDecl> {
        let span = self.span();
        self.bump();
        let (name, _) = self.expect_ident("sub-NFR name")?;
        self.expect_kw(Keyword::Weight)?;
        let weight = self.expect_number("weight")?;
        let range = if self.at_kw(Keyword::Range) {
            self.bump();
            Some(self.pair("range bound")?)
        } else {
            None
        };
        let mut levels = Vec::new();
        self.block_items(|p| {
            let span = p.span();
            p.expect_kw(Keyword::Level)?;
            let (name, _) = p.expect_ident("level name")?;
            p.expect_punct(Punct::Colon)?;
            let shape = p.shape()?;
            p.expect_punct(Punct::Semi)?;
            levels.push(LevelDecl { name, shape, span });
            Ok(())
        })?;
        Ok(SubDecl {
            name,
            weight,
            range,
            levels,
            span,
        })
    }

    fn softgoal(&mut self) -> PResult<SoftGoalDecl> {
        let span = self.span();
        self.bump();
        let (id, _) = self.expect_ident("soft goal name")?;
        let threshold = if self.at_kw(Keyword::Threshold) {
            self.bump();
            Some(self.expect_number("threshold")?)
        } else {
            None
        };
        let mut children = Vec::new();
        self.block_items(|p| {
            let span = p.span();
            p.expect_kw(Keyword::Weight)?;
            let weight = p.expect_number("weight")?;
            let target = if p.at_kw(Keyword::Subgoal) {
                p.bump();
                ChildTarget::Subgoal(p.expect_ident("soft goal name")?.0)
            } else if p.at_kw(Keyword::Leaf) {
                p.bump();
                ChildTarget::Leaf(p.expect_id_string("requirement id")?.0)
            } else {
                return p.expected("`subgoal` or `leaf`");
            };
            p.expect_punct(Punct::Semi)?;
            children.push(ChildDecl { weight, target, span });
            Ok(())
        })?;
        Ok(SoftGoalDecl {
            id,
            threshold,
            children,
            span,
        })
    }

    fn link(&mut self) -> PResult<LinkDecl> {
        let span = self.span();
        self.bump();
        let source = match self.peek() {
            Some(TokenKind::Str(_)) => self.expect_id_string("link source")?.0,
            _ => self.expect_ident("link source")?.0,
        };
        self.expect_punct(Punct::Arrow)?;
        let (target, _) = self.expect_ident("link target")?;
        self.expect_kw(Keyword::Sign)?;
        let sign = self.expect_number("sign")?;
        self.expect_punct(Punct::Semi)?;
        Ok(LinkDecl {
            source,
            target,
            sign,
            span,
        })
    }

    fn requirement(&mut self, keyword: Keyword) -> PResult<Requirement> {
        let span = self.span();
        self.bump();
        let (id, _) = self.expect_id_string("requirement id")?;
        let (decl, allowed): (DeclKeyword, &[Keyword]) = match keyword {
            Keyword::Requirement => (DeclKeyword::Requirement, &[Keyword::Statement, Keyword::VerifiedBy]),
            Keyword::Mnfr => (
                DeclKeyword::Mnfr,
                &[
                    Keyword::Statement,
                    Keyword::Metric,
                    Keyword::Threshold,
                    Keyword::Aggregator,
                ],
            ),
            _ => (
                DeclKeyword::Snfr,
                &[
                    Keyword::Statement,
                    Keyword::Scale,
                    Keyword::Survey,
                    Keyword::Band,
                    Keyword::Variable,
                    Keyword::Input,
                    Keyword::Target,
                    Keyword::Template,
                    Keyword::Aggregator,
                ],
            ),
        };
        let mut fields: HashMap<Keyword, (FieldValue, Span)> = HashMap::new();
        let errors_before = self.diags.len();
        self.block_items(|p| {
            let span = p.span();
            let key = match p.peek() {
                Some(TokenKind::Keyword(k)) if allowed.contains(k) => *k,
                _ => {
                    let names: Vec<_> = allowed.iter().map(|k| format!("`{}`", k.as_str())).collect();
                    return p.expected(&format!("one of {}", names.join(", ")));
                }
            };
            p.bump();
            p.expect_punct(Punct::Colon)?;
            let value = p.field_value(key)?;
            p.expect_punct(Punct::Semi)?;
            if fields.insert(key, (value, span)).is_some() {
                p.error_at(span, format!("field `{}` given twice", key.as_str()));
            }
            Ok(())
        })?;
        let statement = fields.remove(&Keyword::Statement).map(|(v, _)| v.text());
        // A broken field already has its diagnostic; checking for missing
        // fields would only repeat it.
        let verification = if self.diags.len() == errors_before {
            self.verification(decl, &id, span, fields)
        } else {
            Verification::None
        };
        Ok(Requirement {
            id,
            keyword: decl,
            statement,
            verification,
            span,
        })
    }

    fn field_value(&mut self, key: Keyword) -> PResult<FieldValue> {
        Ok(match key {
            Keyword::Statement | Keyword::VerifiedBy | Keyword::Survey => {
                FieldValue::Text(self.expect_string(key.as_str())?.0)
            }
            Keyword::Threshold => {
                let (text, span) = self.expect_string("threshold")?;
                match parse_threshold(&text) {
                    Ok(t) => FieldValue::Threshold(t),
                    Err(message) => {
                        self.error_at(span, message);
                        return Err(());
                    }
                }
            }
            Keyword::Aggregator => {
                let (name, span) = self.expect_ident("aggregator")?;
                match name.parse::<Aggregator>() {
                    Ok(a) => FieldValue::Aggregator(a),
                    Err(message) => {
                        self.error_at(span, message);
                        return Err(());
                    }
                }
            }
            Keyword::Band => FieldValue::Number(self.expect_number("band")?),
            Keyword::Target => {
                let (term, _) = self.expect_ident("target term")?;
                let hedge = if self.at_punct(Punct::Colon) {
                    self.bump();
                    match self.peek() {
                        Some(TokenKind::Keyword(k)) => match k.as_str().parse::<Hedge>() {
                            Ok(h) => {
                                self.bump();
                                Some(h)
                            }
                            Err(_) => return self.expected("a hedge (`not`, `very`, `somewhat`, `slightly`)"),
                        },
                        _ => return self.expected("a hedge (`not`, `very`, `somewhat`, `slightly`)"),
                    }
                } else {
                    None
                };
                FieldValue::Target(term, hedge)
            }
            _ => FieldValue::Text(self.expect_ident(key.as_str())?.0),
        })
    }

    fn verification(
        &mut self,
        decl: DeclKeyword,
        id: &str,
        span: Span,
        mut fields: HashMap<Keyword, (FieldValue, Span)>,
    ) -> Verification {
        let mut take = |k: Keyword| fields.remove(&k).map(|(v, _)| v);
        let verification = match decl {
            DeclKeyword::Requirement => match take(Keyword::VerifiedBy) {
                Some(v) => Verification::BooleanCheck { test: v.text() },
                None => Verification::None,
            },
            DeclKeyword::Mnfr => {
                let metric = take(Keyword::Metric);
                let threshold = take(Keyword::Threshold);
                let aggregator = take(Keyword::Aggregator).map(FieldValue::aggregator);
                match (metric, threshold) {
                    (Some(metric), Some(FieldValue::Threshold((comparator, bound, unit)))) => {
                        Verification::MetricThreshold(MetricThreshold {
                            metric: metric.text(),
                            comparator,
                            bound,
                            unit,
                            aggregator,
                        })
                    }
                    (None, _) => {
                        self.error_at(span, format!("mnfr \"{id}\" needs a `metric` field"));
                        return Verification::None;
                    }
                    _ => {
                        self.error_at(span, format!("mnfr \"{id}\" needs a `threshold` field"));
                        return Verification::None;
                    }
                }
            }
            DeclKeyword::Snfr => {
                let scale = take(Keyword::Scale);
                let variable = take(Keyword::Variable);
                let template = take(Keyword::Template);
                let kinds = [scale.is_some(), variable.is_some(), template.is_some()];
                if kinds.iter().filter(|k| **k).count() > 1 {
                    self.error_at(
                        span,
                        format!("snfr \"{id}\" mixes `scale`, `variable` and `template` bindings; pick one"),
                    );
                    return Verification::None;
                }
                let survey = take(Keyword::Survey).map(FieldValue::text);
                let band = take(Keyword::Band).map(FieldValue::number);
                let input = take(Keyword::Input).map(FieldValue::text);
                let target = take(Keyword::Target);
                let aggregator = take(Keyword::Aggregator).map(FieldValue::aggregator);
                let stray = |present: bool, field: &str, kind: &str| {
                    present.then(|| format!("snfr \"{id}\": `{field}` only applies to {kind} bindings"))
                };
                let mut problems = Vec::new();
                let result = if let Some(scale) = scale {
                    problems.extend(stray(input.is_some(), "input", "`variable`"));
                    problems.extend(stray(target.is_some(), "target", "`variable`"));
                    problems.extend(stray(aggregator.is_some(), "aggregator", "`variable` or `template`"));
                    Verification::LikertSurvey {
                        scale: scale.text(),
                        survey,
                        band,
                    }
                } else if let Some(variable) = variable {
                    problems.extend(stray(survey.is_some(), "survey", "`scale`"));
                    problems.extend(stray(band.is_some(), "band", "`scale`"));
                    match (input, target) {
                        (Some(input), Some(FieldValue::Target(target, hedge))) => Verification::FuzzyAssessment {
                            variable: variable.text(),
                            input,
                            target,
                            hedge,
                            aggregator,
                        },
                        _ => {
                            problems.push(format!("snfr \"{id}\" needs both `input` and `target` for a variable"));
                            Verification::None
                        }
                    }
                } else if let Some(template) = template {
                    problems.extend(stray(survey.is_some(), "survey", "`scale`"));
                    problems.extend(stray(band.is_some(), "band", "`scale`"));
                    problems.extend(stray(input.is_some(), "input", "`variable`"));
                    problems.extend(stray(target.is_some(), "target", "`variable`"));
                    Verification::TemplateAssessment {
                        template: template.text(),
                        aggregator,
                    }
                } else {
                    problems.extend(stray(survey.is_some(), "survey", "`scale`"));
                    problems.extend(stray(band.is_some(), "band", "`scale`"));
                    problems.extend(stray(input.is_some(), "input", "`variable`"));
                    problems.extend(stray(target.is_some(), "target", "`variable`"));
                    problems.extend(stray(aggregator.is_some(), "aggregator", "`variable` or `template`"));
                    Verification::None
                };
                if !problems.is_empty() {
                    for message in problems {
                        self.error_at(span, message);
                    }
                    return Verification::None;
                }
                result
            }
        };
        verification
    }
}

enum FieldValue {
    Text(String),
    Number(f64),
    Threshold((Comparator, f64, Option<String>)),
    Aggregator(Aggregator),
    Target(String, Option<Hedge>),
}

impl FieldValue {
    fn text(self) -> String {
        match self {
            FieldValue::Text(s) => s,
            FieldValue::Target(s, _) => s,
            _ => String::new(),
        }
    }

    fn number(self) -> f64 {
        match self {
            FieldValue::Number(n) => n,
            _ => f64::NAN,
        }
    }

    fn aggregator(self) -> Aggregator {
        match self {
            FieldValue::Aggregator(a) => a,
            _ => Aggregator::Max,
        }
    }
}

/// Parses a threshold such as `"< 1.0"`, `">= 0.8"` or `"<= 250 ms"`.
/// `≤` and `≥` are accepted as spellings of `<=` and `>=`.
pub fn parse_threshold(text: &str) -> Result<(Comparator, f64, Option<String>), String> {
    let s = text.trim();
    let (comparator, rest) = [
        ("<=", Comparator::Le),
        ("≤", Comparator::Le),
        (">=", Comparator::Ge),
        ("≥", Comparator::Ge),
        ("<", Comparator::Lt),
        (">", Comparator::Gt),
    ]
    .iter()
    .find_map(|(prefix, c)| s.strip_prefix(prefix).map(|rest| (*c, rest.trim_start())))
    .ok_or_else(|| format!("threshold \"{text}\" must start with <, <=, > or >="))?;

    let bytes = rest.as_bytes();
    let mut end = 0;
    if matches!(bytes.first(), Some(b'+' | b'-')) {
        end += 1;
    }
    let digits = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let int_end = digits(end);
    end = int_end;
    if end < bytes.len() && bytes[end] == b'.' {
        end = digits(end + 1);
    }
    if (end > int_end || int_end > 0) && end < bytes.len() && matches!(bytes[end], b'e' | b'E') {
        let mut j = end + 1;
        if j < bytes.len() && matches!(bytes[j], b'+' | b'-') {
            j += 1;
        }
        let k = digits(j);
        if k > j {
            end = k;
        }
    }
    let bound: f64 = rest[..end]
        .parse()
        .map_err(|_| format!("threshold \"{text}\" has no numeric bound"))?;
    if !bound.is_finite() {
        return Err(format!("threshold \"{text}\" must have a finite bound"));
    }
    let unit = rest[end..].trim();
    Ok((comparator, bound, (!unit.is_empty()).then(|| unit.to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(parse_threshold("< 1.0").unwrap(), (Comparator::Lt, 1.0, None));
        assert_eq!(parse_threshold(">= 0.8").unwrap(), (Comparator::Ge, 0.8, None));
        assert_eq!(
            parse_threshold("<= 250 ms").unwrap(),
            (Comparator::Le, 250.0, Some("ms".into()))
        );
        assert_eq!(parse_threshold("≤1s").unwrap(), (Comparator::Le, 1.0, Some("s".into())));
        assert_eq!(parse_threshold("> -2.5e1").unwrap(), (Comparator::Gt, -25.0, None));
        assert!(parse_threshold("fast").is_err());
        assert!(parse_threshold("<").is_err());
        assert!(parse_threshold("< inf").is_err());
    }

    #[test]
    fn end_of_input_position() {
        assert_eq!(end_span(""), Span::new(1, 1));
        let s = end_span("ab\ncd");
        assert_eq!((s.line, s.column), (2, 3));
    }
}
