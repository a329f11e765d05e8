//! Structural model of a `.nfr` file.

use std::fmt;

use serde::Serialize;

use super::Span;
use crate::fuzzy::{FuzzyError, Hedge, MembershipFunction};
use crate::ingest::Aggregator;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RequirementSpec {
    pub project: String,
    pub scales: Vec<ScaleDecl>,
    pub variables: Vec<VariableDecl>,
    pub templates: Vec<TemplateDecl>,
    pub requirements: Vec<Requirement>,
    pub softgoals: Vec<SoftGoalDecl>,
    pub links: Vec<LinkDecl>,
    #[serde(skip)]
    pub span: Span,
}

impl RequirementSpec {
    pub fn new(project: impl Into<String>) -> Self {
        Self {
            project: project.into(),
            ..Self::default()
        }
    }

    pub fn requirement(&self, id: &str) -> Option<&Requirement> {
        self.requirements.iter().find(|r| r.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleDef {
    /// One of the built-in 5, 6 or 7 point agreement scales.
    Standard(i64),
    Custom(Vec<(String, i64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleDecl {
    pub name: String,
    pub def: ScaleDef,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Triangle {
        a: f64,
        b: f64,
        c: f64,
    },
    Trapezoid {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    Interval {
        lo: f64,
        hi: f64,
        lo_inclusive: bool,
        hi_inclusive: bool,
    },
}

impl Shape {
    pub fn to_membership(self) -> Result<MembershipFunction, FuzzyError> {
        match self {
            Shape::Triangle { a, b, c } => MembershipFunction::triangular(a, b, c),
            Shape::Trapezoid { a, b, c, d } => MembershipFunction::trapezoidal(a, b, c, d),
            Shape::Interval {
                lo,
                hi,
                lo_inclusive,
                hi_inclusive,
            } => MembershipFunction::crisp(lo, hi, lo_inclusive, hi_inclusive),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermDecl {
    pub name: String,
    pub shape: Shape,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableDecl {
    pub name: String,
    pub unit: String,
    pub domain: Option<(f64, f64)>,
    pub terms: Vec<TermDecl>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelDecl {
    pub name: String,
    pub shape: Shape,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubDecl {
    pub name: String,
    pub weight: f64,
    pub range: Option<(f64, f64)>,
    /// Best level first.
    pub levels: Vec<LevelDecl>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowDecl {
    pub status: String,
    pub levels: Vec<String>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemplateDecl {
    pub name: String,
    pub subs: Vec<SubDecl>,
    /// Best status first.
    pub rows: Vec<RowDecl>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Comparator {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Comparator {
    pub const ALL: [Comparator; 4] = [Comparator::Lt, Comparator::Le, Comparator::Gt, Comparator::Ge];

    pub fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Comparator::Lt => value < bound,
            Comparator::Le => value <= bound,
            Comparator::Gt => value > bound,
            Comparator::Ge => value >= bound,
        }
    }

    /// Headroom, positive when the comparison passes with room to spare.
    pub fn margin(self, value: f64, bound: f64) -> f64 {
        match self {
            Comparator::Lt | Comparator::Le => bound - value,
            Comparator::Gt | Comparator::Ge => value - bound,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricThreshold {
    pub metric: String,
    pub comparator: Comparator,
    pub bound: f64,
    pub unit: Option<String>,
    /// `None` means the default, `max`.
    pub aggregator: Option<Aggregator>,
}

/// How a requirement is checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verification {
    BooleanCheck {
        test: String,
    },
    MetricThreshold(MetricThreshold),
    LikertSurvey {
        scale: String,
        survey: Option<String>,
        band: Option<f64>,
    },
    FuzzyAssessment {
        variable: String,
        input: String,
        target: String,
        hedge: Option<Hedge>,
        aggregator: Option<Aggregator>,
    },
    TemplateAssessment {
        template: String,
        aggregator: Option<Aggregator>,
    },
    None,
}

/// Keyword a requirement was declared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeclKeyword {
    Requirement,
    Mnfr,
    Snfr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Requirement {
    pub id: String,
    pub keyword: DeclKeyword,
    pub statement: Option<String>,
    pub verification: Verification,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChildTarget {
    Subgoal(String),
    /// Requirement id.
    Leaf(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChildDecl {
    pub weight: f64,
    pub target: ChildTarget,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoftGoalDecl {
    pub id: String,
    pub threshold: Option<f64>,
    pub children: Vec<ChildDecl>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkDecl {
    /// A soft goal or a requirement id.
    pub source: String,
    pub target: String,
    pub sign: f64,
    #[serde(skip)]
    pub span: Span,
}
