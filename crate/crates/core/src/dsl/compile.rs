//! Semantic checks and lowering of a parsed spec into engine objects.

use std::collections::HashSet;

use indexmap::IndexMap;

use super::ast::*;
use super::{has_errors, resolve, Diagnostic, Span};
use crate::fuzzy::{Grading, LinguisticVariable, StatusRow, SubNfr, WeightedTemplate};
use crate::goal::{validate_forest, ContributionLink, Forest, GoalError, SoftGoalNode};
use crate::likert::{Category, LikertScale};

/// A spec with every declaration turned into a checked engine object.
#[derive(Debug, Clone)]
pub struct CompiledSpec {
    pub project: String,
    pub requirements: Vec<Requirement>,
    pub scales: IndexMap<String, LikertScale>,
    pub variables: IndexMap<String, LinguisticVariable>,
    pub templates: IndexMap<String, WeightedTemplate>,
    pub forest: Forest,
    pub links: Vec<ContributionLink>,
}

/// Every diagnostic for `spec`: unresolved names, broken invariants and
/// warnings for unused declarations.
pub fn validate(spec: &RequirementSpec) -> Vec<Diagnostic> {
    match compile(spec) {
        Ok((_, warnings)) => warnings,
        Err(diags) => diags,
    }
}

/// Builds the engine objects. On success the warnings are returned
/// alongside; on failure all diagnostics, warnings included.
pub fn compile(spec: &RequirementSpec) -> Result<(CompiledSpec, Vec<Diagnostic>), Vec<Diagnostic>> {
    let mut diags = resolve::resolve(spec);
    if has_errors(&diags) {
        return Err(diags);
    }

    let mut scales = IndexMap::new();
    for decl in &spec.scales {
        match build_scale(decl) {
            Ok(scale) => {
                scales.insert(decl.name.clone(), scale);
            }
            Err(message) => diags.push(Diagnostic::error(decl.span, message)),
        }
    }

    let mut variables = IndexMap::new();
    for decl in &spec.variables {
        let mut terms = Vec::new();
        for term in &decl.terms {
            match term.shape.to_membership() {
                Ok(mf) => terms.push((term.name.clone(), mf)),
                Err(e) => diags.push(Diagnostic::error(term.span, format!("term `{}`: {e}", term.name))),
            }
        }
        if terms.len() != decl.terms.len() {
            continue;
        }
        match LinguisticVariable::new(&decl.name, &decl.unit, decl.domain, terms) {
            Ok(var) => {
                variables.insert(decl.name.clone(), var);
            }
            Err(e) => diags.push(Diagnostic::error(decl.span, e.to_string())),
        }
    }

    let mut templates = IndexMap::new();
    for decl in &spec.templates {
        if let Some(template) = build_template(decl, &mut diags) {
            templates.insert(decl.name.clone(), template);
        }
    }

    for req in &spec.requirements {
        if let Verification::LikertSurvey { band: Some(band), .. } = req.verification {
            if !(0.0..=0.5).contains(&band) {
                diags.push(Diagnostic::error(
                    req.span,
                    format!("requirement \"{}\": band {band} is outside [0, 0.5]", req.id),
                ));
            }
        }
    }

    let forest = build_forest(spec, &mut diags);

    let mut links = Vec::new();
    for decl in &spec.links {
        match ContributionLink::new(&decl.source, &decl.target, decl.sign) {
            Ok(link) => links.push(link),
            Err(e) => diags.push(Diagnostic::error(decl.span, e.to_string())),
        }
    }

    warn_unused(spec, &mut diags);
    if let Some(forest) = &forest {
        for goal in &spec.softgoals {
            if goal.threshold.is_some() && !forest.is_root(&goal.id) {
                diags.push(Diagnostic::warning(
                    goal.span,
                    format!("threshold on `{}` has no effect: only roots are checked", goal.id),
                ));
            }
        }
    }
    for goal in &spec.softgoals {
        for child in &goal.children {
            if let ChildTarget::Leaf(id) = &child.target {
                if spec
                    .requirement(id)
                    .is_some_and(|r| r.verification == Verification::None)
                {
                    diags.push(Diagnostic::warning(
                        child.span,
                        format!("leaf \"{id}\" is vague and contributes nothing to `{}`", goal.id),
                    ));
                }
            }
        }
    }

    diags.sort_by_key(|d| (d.line, d.column));
    match forest {
        Some(forest) if !has_errors(&diags) => Ok((
            CompiledSpec {
                project: spec.project.clone(),
                requirements: spec.requirements.clone(),
                scales,
                variables,
                templates,
                forest,
                links,
            },
            diags,
        )),
        _ => Err(diags),
    }
}

fn build_scale(decl: &ScaleDecl) -> Result<LikertScale, String> {
    let categories = match &decl.def {
        ScaleDef::Standard(points) => LikertScale::standard(*points)
            .map_err(|e| format!("scale `{}`: {e}", decl.name))?
            .categories()
            .to_vec(),
        ScaleDef::Custom(options) => options
            .iter()
            .map(|(label, value)| Category {
                label: label.clone(),
                value: *value,
            })
            .collect(),
    };
    LikertScale::new(&decl.name, categories).map_err(|e| e.to_string())
}

fn build_template(decl: &TemplateDecl, diags: &mut Vec<Diagnostic>) -> Option<WeightedTemplate> {
    let mut ok = true;
    let mut subs = Vec::new();
    for sub in &decl.subs {
        let mut gradings = Vec::new();
        for level in &sub.levels {
            match level.shape.to_membership() {
                Ok(function) => gradings.push(Grading {
                    level: level.name.clone(),
                    function,
                }),
                Err(e) => {
                    ok = false;
                    diags.push(Diagnostic::error(level.span, format!("level `{}`: {e}", level.name)));
                }
            }
        }
        if sub.levels.is_empty() {
            ok = false;
            diags.push(Diagnostic::error(
                sub.span,
                format!("sub-NFR `{}` has no levels", sub.name),
            ));
        }
        subs.push(SubNfr {
            name: sub.name.clone(),
            weight: sub.weight,
            range: sub.range,
            gradings,
        });
    }
    if !ok {
        return None;
    }
    let rows = decl
        .rows
        .iter()
        .map(|r| StatusRow {
            status: r.status.clone(),
            levels: r.levels.clone(),
        })
        .collect();
    match WeightedTemplate::new(&decl.name, subs, rows) {
        Ok(t) => Some(t),
        Err(e) => {
            diags.push(Diagnostic::error(decl.span, e.to_string()));
            None
        }
    }
}

fn build_forest(spec: &RequirementSpec, diags: &mut Vec<Diagnostic>) -> Option<Forest> {
    let mut weights: IndexMap<&str, f64> = IndexMap::new();
    for goal in &spec.softgoals {
        for child in &goal.children {
            if let ChildTarget::Subgoal(id) = &child.target {
                weights.entry(id.as_str()).or_insert(child.weight);
            }
        }
    }
    let mut nodes = Vec::new();
    for goal in &spec.softgoals {
        let mut children = Vec::new();
        for child in &goal.children {
            match &child.target {
                ChildTarget::Subgoal(id) => children.push(id.clone()),
                ChildTarget::Leaf(req) => {
                    let id = format!("{}/{req}", goal.id);
                    children.push(id.clone());
                    let mut leaf = SoftGoalNode::leaf(id, child.weight, req.clone());
                    leaf.label = req.clone();
                    nodes.push(leaf);
                }
            }
        }
        let weight = weights.get(goal.id.as_str()).copied().unwrap_or(1.0);
        let mut node = SoftGoalNode::internal(&goal.id, weight, children);
        node.threshold = goal.threshold;
        nodes.push(node);
    }
    match validate_forest(nodes) {
        Ok(forest) => Some(forest),
        Err(e) => {
            let span = goal_error_span(spec, &e);
            diags.push(Diagnostic::error(span, e.to_string()));
            None
        }
    }
}

/// Position of the soft goal an error is about.
fn goal_error_span(spec: &RequirementSpec, error: &GoalError) -> Span {
    let id = match error {
        GoalError::DuplicateId(id) => id.as_str(),
        GoalError::DanglingChild { parent, .. } | GoalError::DuplicateChild { parent, .. } => parent,
        GoalError::MultipleParents { node, .. }
        | GoalError::Childless { node }
        | GoalError::InvalidWeight { node, .. }
        | GoalError::InvalidThreshold { node, .. } => node,
        GoalError::Cycle(path) => path.first().map_or("", String::as_str),
        _ => "",
    };
    let owner = id.split('/').next().unwrap_or(id);
    spec.softgoals
        .iter()
        .find(|g| g.id == owner)
        .or(spec.softgoals.first())
        .map_or(spec.span, |g| g.span)
}

fn warn_unused(spec: &RequirementSpec, diags: &mut Vec<Diagnostic>) {
    let mut used = HashSet::new();
    for req in &spec.requirements {
        match &req.verification {
            Verification::LikertSurvey { scale, .. } => used.insert(("scale", scale.as_str())),
            Verification::FuzzyAssessment { variable, .. } => used.insert(("variable", variable.as_str())),
            Verification::TemplateAssessment { template, .. } => used.insert(("template", template.as_str())),
            _ => false,
        };
    }
    let unused = |kind: &'static str, name: &str, span: Span, what: &str| {
        (!used.contains(&(kind, name)))
            .then(|| Diagnostic::warning(span, format!("{what} `{name}` is never referenced")))
    };
    let mut found: Vec<_> = spec
        .scales
        .iter()
        .filter_map(|s| unused("scale", &s.name, s.span, "scale"))
        .collect();
    found.extend(
        spec.variables
            .iter()
            .filter_map(|v| unused("variable", &v.name, v.span, "linguistic variable")),
    );
    found.extend(
        spec.templates
            .iter()
            .filter_map(|t| unused("template", &t.name, t.span, "template")),
    );
    diags.extend(found);
}
