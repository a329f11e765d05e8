//! Canonical text form of a spec.

use std::fmt::Write;

use super::ast::*;
use super::lexer::is_identifier;

/// Renders a number the way the lexer reads it back: shortest exact
/// decimal, with `inf` and `-inf` for the infinities.
pub fn format_number(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn shape(s: &Shape) -> String {
    let n = format_number;
    match *s {
        Shape::Triangle { a, b, c } => format!("triangle({}, {}, {})", n(a), n(b), n(c)),
        Shape::Trapezoid { a, b, c, d } => format!("trapezoid({}, {}, {}, {})", n(a), n(b), n(c), n(d)),
        Shape::Interval {
            lo,
            hi,
            lo_inclusive: true,
            hi_inclusive: true,
        } => format!("interval({}, {})", n(lo), n(hi)),
        Shape::Interval {
            lo,
            hi,
            lo_inclusive,
            hi_inclusive,
        } => format!(
            "interval({}, {}, {}, {})",
            n(lo),
            n(hi),
            u8::from(lo_inclusive),
            u8::from(hi_inclusive)
        ),
    }
}

fn pair(keyword: &str, (lo, hi): (f64, f64)) -> String {
    format!(" {keyword}({}, {})", format_number(lo), format_number(hi))
}

/// Deterministic text for `spec`: declarations grouped by kind in a fixed
/// order, declaration order within each kind, two-space indentation.
pub fn serialize(spec: &RequirementSpec) -> String {
    let mut body = String::new();
    let out = &mut body;

    for scale in &spec.scales {
        match &scale.def {
            ScaleDef::Standard(points) => {
                let _ = writeln!(out, "  scale {} points {points};", scale.name);
            }
            ScaleDef::Custom(options) => {
                let _ = writeln!(out, "  scale {} {{", scale.name);
                for (label, value) in options {
                    let _ = writeln!(out, "    option {}: {value};", quote(label));
                }
                out.push_str("  }\n");
            }
        }
    }

    for var in &spec.variables {
        let domain = var.domain.map(|d| pair("domain", d)).unwrap_or_default();
        let _ = writeln!(out, "  linguistic {} over {}{domain} {{", var.name, var.unit);
        for term in &var.terms {
            let _ = writeln!(out, "    term {}: {};", term.name, shape(&term.shape));
        }
        out.push_str("  }\n");
    }

    for template in &spec.templates {
        let _ = writeln!(out, "  template {} {{", template.name);
        for sub in &template.subs {
            let range = sub.range.map(|r| pair("range", r)).unwrap_or_default();
            let _ = writeln!(
                out,
                "    sub {} weight {}{range} {{",
                sub.name,
                format_number(sub.weight)
            );
            for level in &sub.levels {
                let _ = writeln!(out, "      level {}: {};", level.name, shape(&level.shape));
            }
            out.push_str("    }\n");
        }
        for row in &template.rows {
            let status = if is_identifier(&row.status) {
                row.status.clone()
            } else {
                quote(&row.status)
            };
            let _ = writeln!(out, "    status {status}: {};", row.levels.join(", "));
        }
        out.push_str("  }\n");
    }

    for req in &spec.requirements {
        let keyword = match req.keyword {
            DeclKeyword::Requirement => "requirement",
            DeclKeyword::Mnfr => "mnfr",
            DeclKeyword::Snfr => "snfr",
        };
        let _ = writeln!(out, "  {keyword} {} {{", quote(&req.id));
        let mut field = |name: &str, value: String| {
            let _ = writeln!(out, "    {name}: {value};");
        };
        if let Some(statement) = &req.statement {
            field("statement", quote(statement));
        }
        match &req.verification {
            Verification::BooleanCheck { test } => field("verified_by", quote(test)),
            Verification::MetricThreshold(m) => {
                field("metric", m.metric.clone());
                let unit = m.unit.as_ref().map(|u| format!(" {u}")).unwrap_or_default();
                field(
                    "threshold",
                    quote(&format!("{} {}{unit}", m.comparator, format_number(m.bound))),
                );
                if let Some(a) = m.aggregator {
                    field("aggregator", a.to_string());
                }
            }
            Verification::LikertSurvey { scale, survey, band } => {
                field("scale", scale.clone());
                if let Some(survey) = survey {
                    field("survey", quote(survey));
                }
                if let Some(band) = band {
                    field("band", format_number(*band));
                }
            }
            Verification::FuzzyAssessment {
                variable,
                input,
                target,
                hedge,
                aggregator,
            } => {
                field("variable", variable.clone());
                field("input", input.clone());
                match hedge {
                    Some(h) => field("target", format!("{target}: {h}")),
                    None => field("target", target.clone()),
                }
                if let Some(a) = aggregator {
                    field("aggregator", a.to_string());
                }
            }
            Verification::TemplateAssessment { template, aggregator } => {
                field("template", template.clone());
                if let Some(a) = aggregator {
                    field("aggregator", a.to_string());
                }
            }
            Verification::None => {}
        }
        out.push_str("  }\n");
    }

    for goal in &spec.softgoals {
        let threshold = goal
            .threshold
            .map(|t| format!(" threshold {}", format_number(t)))
            .unwrap_or_default();
        let _ = writeln!(out, "  softgoal {}{threshold} {{", goal.id);
        for child in &goal.children {
            let target = match &child.target {
                ChildTarget::Subgoal(id) => format!("subgoal {id}"),
                ChildTarget::Leaf(id) => format!("leaf {}", quote(id)),
            };
            let _ = writeln!(out, "    weight {} {target};", format_number(child.weight));
        }
        out.push_str("  }\n");
    }

    for link in &spec.links {
        let source = if is_identifier(&link.source) {
            link.source.clone()
        } else {
            quote(&link.source)
        };
        let _ = writeln!(
            out,
            "  link {source} -> {} sign {};",
            link.target,
            format_number(link.sign)
        );
    }

    if body.is_empty() {
        format!("project {} {{}}\n", quote(&spec.project))
    } else {
        format!("project {} {{\n{body}}}\n", quote(&spec.project))
    }
}
