//! Name resolution over a syntactically valid spec.

use std::collections::HashMap;

use super::ast::*;
use super::{Diagnostic, Span};

fn index<'a, T>(
    items: &'a [T],
    key: impl Fn(&T) -> (&str, Span),
    what: &str,
    diags: &mut Vec<Diagnostic>,
) -> HashMap<&'a str, &'a T> {
    let mut map = HashMap::new();
    for item in items {
        let (name, span) = key(item);
        if map.insert(name, item).is_some() {
            diags.push(Diagnostic::error(span, format!("duplicate {what} `{name}`")));
        }
    }
    map
}

/// Checks id uniqueness per namespace and that every reference resolves.
pub(crate) fn resolve(spec: &RequirementSpec) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let scales = index(&spec.scales, |s| (&s.name, s.span), "scale", &mut diags);
    let variables = index(
        &spec.variables,
        |v| (&v.name, v.span),
        "linguistic variable",
        &mut diags,
    );
    let templates = index(&spec.templates, |t| (&t.name, t.span), "template", &mut diags);
    let requirements = index(&spec.requirements, |r| (&r.id, r.span), "requirement", &mut diags);
    let goals = index(&spec.softgoals, |g| (&g.id, g.span), "soft goal", &mut diags);

    for req in &spec.requirements {
        let mut missing = |kind: &str, name: &str| {
            diags.push(Diagnostic::error(
                req.span,
                format!("requirement \"{}\" refers to unknown {kind} `{name}`", req.id),
            ));
        };
        match &req.verification {
            Verification::LikertSurvey { scale, .. } if !scales.contains_key(scale.as_str()) => missing("scale", scale),
            Verification::FuzzyAssessment { variable, target, .. } => match variables.get(variable.as_str()) {
                None => missing("linguistic variable", variable),
                Some(var) if !var.terms.iter().any(|t| &t.name == target) => {
                    missing(&format!("term of `{variable}`"), target)
                }
                Some(_) => {}
            },
            Verification::TemplateAssessment { template, .. } if !templates.contains_key(template.as_str()) => {
                missing("template", template)
            }
            _ => {}
        }
    }

    for template in &spec.templates {
        for row in &template.rows {
            if row.levels.len() != template.subs.len() {
                diags.push(Diagnostic::error(
                    row.span,
                    format!(
                        "status `{}` lists {} levels but template `{}` has {} sub-NFRs",
                        row.status,
                        row.levels.len(),
                        template.name,
                        template.subs.len()
                    ),
                ));
                continue;
            }
            for (level, sub) in row.levels.iter().zip(&template.subs) {
                if !sub.levels.iter().any(|l| &l.name == level) {
                    diags.push(Diagnostic::error(
                        row.span,
                        format!(
                            "status `{}` refers to unknown level `{level}` of `{}`",
                            row.status, sub.name
                        ),
                    ));
                }
            }
        }
    }

    for goal in &spec.softgoals {
        for child in &goal.children {
            match &child.target {
                ChildTarget::Subgoal(id) if !goals.contains_key(id.as_str()) => diags.push(Diagnostic::error(
                    child.span,
                    format!("soft goal `{}` refers to unknown soft goal `{id}`", goal.id),
                )),
                ChildTarget::Leaf(id) if !requirements.contains_key(id.as_str()) => diags.push(Diagnostic::error(
                    child.span,
                    format!("soft goal `{}` refers to unknown requirement \"{id}\"", goal.id),
                )),
                _ => {}
            }
        }
    }

    for link in &spec.links {
        let source = link.source.as_str();
        if !goals.contains_key(source) && !requirements.contains_key(source) {
            diags.push(Diagnostic::error(
                link.span,
                format!("link source `{source}` is neither a soft goal nor a requirement"),
            ));
        }
        if !goals.contains_key(link.target.as_str()) {
            diags.push(Diagnostic::error(
                link.span,
                format!("link target `{}` is not a soft goal", link.target),
            ));
        }
    }
    diags
}
