//! Evaluation engine for functional and non-functional requirements:
//! fuzzy grading, Likert surveys, soft-goal propagation and the `.nfr`
//! requirements language.

pub mod dsl;
pub mod evaluator;
pub mod fuzzy;
pub mod goal;
pub mod ingest;
pub mod likert;

pub use dsl::{parse, serialize, validate, CompiledSpec, Diagnostic, RequirementSpec, Severity};
pub use evaluator::{classify, evaluate_project, EvaluationReport, Kind};
pub use fuzzy::{Hedge, LinguisticVariable, MembershipFunction, WeightedTemplate};
pub use goal::{Forest, SoftGoalNode};
pub use ingest::{Aggregator, MeasurementSeries, SeriesSummary};
pub use likert::{LikertScale, ResponseSet, SurveyKey};
