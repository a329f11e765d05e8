//! Fuzzy sets, linguistic variables, hedges and weighted grading templates.
//!
//! Everything here is a pure function over immutable values.

mod aggregate;
mod hedge;
mod membership;
mod template;
mod variable;

use thiserror::Error;

pub use aggregate::weighted_score;
pub use hedge::{apply_hedge, Hedge};
pub use membership::MembershipFunction;
pub use template::{level_value, Grading, StatusRow, SubGrade, SubNfr, TemplateOutcome, WeightedTemplate};
pub use variable::{best_label, LinguisticVariable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("invalid parameter `{param}`: {reason}")]
    InvalidParameter { param: &'static str, reason: String },
    #[error("invalid linguistic variable `{name}`: {reason}")]
    InvalidVariable { name: String, reason: String },
    #[error("invalid template `{template}`: {reason}")]
    InvalidTemplate { template: String, reason: String },
    #[error("value {x} of `{variable}` is outside [{lo}, {hi}]")]
    OutOfDomain { variable: String, x: f64, lo: f64, hi: f64 },
    #[error("degree {0} is outside [0, 1]")]
    DegreeOutOfRange(f64),
    #[error("empty {0}")]
    EmptyArgument(&'static str),
    #[error("weight #{index} must be positive and finite, got {weight}")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("unknown sub-NFR `{0}`")]
    UnknownSubNfr(String),
    #[error("no value supplied for sub-NFR `{0}`")]
    MissingValue(String),
    #[error("value {value} of sub-NFR `{sub}` falls in no grading level")]
    Coverage { sub: String, value: f64 },
}
