//! Classification and evaluation of requirements against project data.
//!
//! A data directory holds `measurements.csv` (metric series, also used for
//! test results as 0/1 samples) and, per survey, `<survey>.key.csv` and
//! `<survey>.responses.csv`.

mod report;

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::dsl::{Comparator, CompiledSpec, MetricThreshold, Requirement, Verification};
use crate::fuzzy::{apply_hedge, best_label, Hedge, LinguisticVariable, TemplateOutcome, WeightedTemplate};
use crate::goal::detect_conflicts;
use crate::ingest::{self, Aggregator, IngestError, MeasurementSeries, SeriesSummary};
use crate::likert::{
    aggregate_scores, attitude_decision, score_responses, AttitudeDecision, LikertScale, ResponseSet, SurveyKey,
    SurveyStats, DEFAULT_BAND,
};

pub use report::{
    table, EvaluationReport, GoalValue, RequirementResult, Summary, SurveyReport, TemplateReport, Verdict,
};

pub const MEASUREMENTS_FILE: &str = "measurements.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    #[serde(rename = "FR")]
    Fr,
    #[serde(rename = "M-NFR")]
    MNfr,
    #[serde(rename = "S-NFR")]
    SNfr,
    Vague,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Fr => "FR",
            Kind::MNfr => "M-NFR",
            Kind::SNfr => "S-NFR",
            Kind::Vague => "Vague",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub kind: Kind,
    pub rationale: String,
}

pub fn classify(req: &Requirement) -> Classification {
    let (kind, rationale) = match &req.verification {
        Verification::BooleanCheck { test } => (Kind::Fr, format!("verified by test \"{test}\"")),
        Verification::MetricThreshold(m) => {
            let unit = m.unit.as_ref().map(|u| format!(" {u}")).unwrap_or_default();
            (
                Kind::MNfr,
                format!(
                    "{} of `{}` {} {}{unit}",
                    m.aggregator.unwrap_or(Aggregator::Max),
                    m.metric,
                    m.comparator,
                    m.bound
                ),
            )
        }
        Verification::LikertSurvey { scale, .. } => (Kind::SNfr, format!("Likert survey on scale `{scale}`")),
        Verification::FuzzyAssessment {
            variable,
            target,
            hedge,
            ..
        } => {
            let hedge = hedge.map(|h| format!("{h} ")).unwrap_or_default();
            (
                Kind::SNfr,
                format!("fuzzy variable `{variable}`, target {hedge}{target}"),
            )
        }
        Verification::TemplateAssessment { template, .. } => (Kind::SNfr, format!("weighted template `{template}`")),
        Verification::None => {
            let text = req.statement.as_deref().unwrap_or(&req.id).trim_end_matches('.');
            (
                Kind::Vague,
                format!("{text}; is a vague NFR: it has no verified_by, metric, scale, variable or template clause"),
            )
        }
    };
    Classification { kind, rationale }
}

/// Why a requirement could not be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    /// No verification clause.
    Vague,
    /// The bound data source does not exist.
    MissingData,
    /// The data exists but cannot be used.
    InvalidData,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Unevaluated {
    pub problem: Problem,
    pub reason: String,
}

impl Unevaluated {
    fn missing(reason: impl Into<String>) -> Self {
        Self {
            problem: Problem::MissingData,
            reason: reason.into(),
        }
    }

    fn invalid(reason: impl Into<String>) -> Self {
        Self {
            problem: Problem::InvalidData,
            reason: reason.into(),
        }
    }
}

/// Pass/fail result of an FR or M-NFR.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub passed: bool,
    /// Aggregated metric value, or for tests the fraction of passing runs.
    pub observed: f64,
    /// Headroom to the bound; positive means passing with room to spare.
    /// Tests have no margin.
    pub margin: Option<f64>,
    pub evidence: CheckEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum CheckEvidence {
    Test {
        test: String,
        runs: usize,
        passed_runs: usize,
    },
    Metric {
        metric: String,
        unit: String,
        comparator: Comparator,
        bound: f64,
        aggregator: Aggregator,
        summary: SeriesSummary,
    },
}

/// Satisfaction degree of an S-NFR.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Degree {
    pub degree: f64,
    pub label: String,
    pub evidence: DegreeEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DegreeEvidence {
    Survey {
        survey: String,
        scale: String,
        items: usize,
        respondents: usize,
    },
    Fuzzy {
        variable: String,
        input: String,
        aggregator: Aggregator,
        value: f64,
        target: String,
        hedge: Option<Hedge>,
        membership: f64,
        degrees: IndexMap<String, f64>,
    },
    Template {
        template: String,
        aggregator: Aggregator,
        status: String,
        score: f64,
        raw_score: f64,
        max_raw_score: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Check(Check),
    Degree(Degree),
    Unevaluated(Unevaluated),
}

impl Outcome {
    /// Contribution to a soft-goal leaf: 1 or 0 for checks, the degree for
    /// scalable requirements, nothing otherwise.
    pub fn satisfaction(&self) -> Option<f64> {
        match self {
            Outcome::Check(c) => Some(if c.passed { 1.0 } else { 0.0 }),
            Outcome::Degree(d) => Some(d.degree),
            Outcome::Unevaluated(_) => None,
        }
    }
}

/// Pass when every run of the test recorded 1.
pub fn evaluate_fr(test: &str, series: &MeasurementSeries) -> Result<Check, Unevaluated> {
    if series.metric != test {
        return Err(Unevaluated::invalid(format!(
            "series `{}` does not record test \"{test}\"",
            series.metric
        )));
    }
    if let Some(bad) = series.samples.iter().find(|v| **v != 0.0 && **v != 1.0) {
        return Err(Unevaluated::invalid(format!(
            "test \"{test}\" has result {bad}; results must be 0 or 1"
        )));
    }
    if series.samples.is_empty() {
        return Err(Unevaluated::missing(format!("test \"{test}\" has no runs")));
    }
    let passed_runs = series.samples.iter().filter(|v| **v == 1.0).count();
    let runs = series.samples.len();
    Ok(Check {
        passed: passed_runs == runs,
        observed: passed_runs as f64 / runs as f64,
        margin: None,
        evidence: CheckEvidence::Test {
            test: test.to_string(),
            runs,
            passed_runs,
        },
    })
}

/// Applies the comparator to the aggregated series. `aggregator` overrides
/// the one declared on the threshold, which in turn defaults to `max`.
pub fn evaluate_mnfr(
    threshold: &MetricThreshold,
    series: &MeasurementSeries,
    aggregator: Option<Aggregator>,
) -> Result<Check, Unevaluated> {
    if series.metric != threshold.metric {
        return Err(Unevaluated::invalid(format!(
            "series `{}` does not match metric `{}`",
            series.metric, threshold.metric
        )));
    }
    if series.samples.is_empty() {
        return Err(Unevaluated::missing(format!(
            "metric `{}` has no samples",
            series.metric
        )));
    }
    if let Some(unit) = &threshold.unit {
        if *unit != series.unit {
            return Err(Unevaluated::invalid(format!(
                "metric `{}` is recorded in `{}` but the threshold is in `{unit}`",
                series.metric, series.unit
            )));
        }
    }
    let aggregator = aggregator.or(threshold.aggregator).unwrap_or(Aggregator::Max);
    let summary = ingest::summarize(series);
    let observed = aggregator.apply(&summary);
    Ok(Check {
        passed: threshold.comparator.holds(observed, threshold.bound),
        observed,
        margin: Some(threshold.comparator.margin(observed, threshold.bound)),
        evidence: CheckEvidence::Metric {
            metric: threshold.metric.clone(),
            unit: series.unit.clone(),
            comparator: threshold.comparator,
            bound: threshold.bound,
            aggregator,
            summary,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyResult {
    pub degree: f64,
    pub stats: SurveyStats,
    pub decision: AttitudeDecision,
}

/// Scores a survey. The degree is the mean score's position between the
/// lowest and highest possible totals.
pub fn evaluate_survey(
    scale: &LikertScale,
    key: &SurveyKey,
    responses: &ResponseSet,
    band: f64,
) -> Result<SurveyResult, Unevaluated> {
    let invalid = |e: crate::likert::LikertError| Unevaluated::invalid(e.to_string());
    if responses.scale != scale.name() {
        return Err(Unevaluated::invalid(format!(
            "responses use scale `{}`, expected `{}`",
            responses.scale,
            scale.name()
        )));
    }
    let scores = score_responses(scale, key, responses).map_err(invalid)?;
    if scores.is_empty() {
        return Err(Unevaluated::missing("the survey has no respondents"));
    }
    let stats = aggregate_scores(&scores).map_err(invalid)?;
    let decision = attitude_decision(&stats, key.len(), scale, band).map_err(invalid)?;
    let range = (stats.max_possible - stats.min_possible) as f64;
    let degree = ((stats.mean - stats.min_possible as f64) / range).clamp(0.0, 1.0);
    Ok(SurveyResult {
        degree,
        stats,
        decision,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzyResult {
    /// Hedged membership of the target term.
    pub degree: f64,
    pub membership: f64,
    /// Best-fitting term at the input value.
    pub label: String,
    pub degrees: IndexMap<String, f64>,
}

pub fn evaluate_fuzzy(
    variable: &LinguisticVariable,
    target: &str,
    hedge: Option<Hedge>,
    value: f64,
) -> Result<FuzzyResult, Unevaluated> {
    let degrees = variable
        .fuzzify(value)
        .map_err(|e| Unevaluated::invalid(e.to_string()))?;
    let membership = degrees
        .iter()
        .find(|(t, _)| t == target)
        .map(|(_, d)| *d)
        .ok_or_else(|| Unevaluated::invalid(format!("`{}` has no term `{target}`", variable.name())))?;
    let degree = apply_hedge(hedge, membership).map_err(|e| Unevaluated::invalid(e.to_string()))?;
    let (label, _) = best_label(&degrees).map_err(|e| Unevaluated::invalid(e.to_string()))?;
    Ok(FuzzyResult {
        degree,
        membership,
        label: label.to_string(),
        degrees: degrees.iter().cloned().collect(),
    })
}

pub fn evaluate_template(
    template: &WeightedTemplate,
    values: &[(String, f64)],
) -> Result<TemplateOutcome, Unevaluated> {
    template
        .evaluate(values)
        .map_err(|e| Unevaluated::invalid(e.to_string()))
}

/// Run-wide overrides.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvalOptions {
    /// Decision band for every survey, as a fraction of the score range.
    pub band: Option<f64>,
    /// Aggregator for every M-NFR.
    pub aggregator: Option<Aggregator>,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("data directory {}: {source}", path.display())]
    DataDir {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("data directory {} is not a directory", .0.display())]
    NotADirectory(PathBuf),
    #[error("decision band {0} is outside [0, 0.5]")]
    InvalidBand(f64),
}

/// Lazily loaded contents of a data directory.
pub struct DataSource {
    root: PathBuf,
    measurements: Result<IndexMap<String, MeasurementSeries>, Unevaluated>,
}

impl DataSource {
    pub fn open(root: &Path) -> Result<Self, EvalError> {
        let meta = std::fs::metadata(root).map_err(|source| EvalError::DataDir {
            path: root.to_path_buf(),
            source,
        })?;
        if !meta.is_dir() {
            return Err(EvalError::NotADirectory(root.to_path_buf()));
        }
        let path = root.join(MEASUREMENTS_FILE);
        let measurements = match ingest::load_measurements(&path) {
            Ok(series) => Ok(series.into_iter().map(|s| (s.metric.clone(), s)).collect()),
            Err(e) if e.is_not_found() => Err(Unevaluated::missing(format!("{} not found", path.display()))),
            Err(e) => Err(Unevaluated::invalid(format!("{}: {e}", path.display()))),
        };
        Ok(Self {
            root: root.to_path_buf(),
            measurements,
        })
    }

    pub fn series(&self, metric: &str) -> Result<&MeasurementSeries, Unevaluated> {
        let all = self.measurements.as_ref().map_err(Clone::clone)?;
        all.get(metric)
            .ok_or_else(|| Unevaluated::missing(format!("no samples for `{metric}` in {MEASUREMENTS_FILE}")))
    }

    fn aggregate(&self, metric: &str, aggregator: Aggregator) -> Result<f64, Unevaluated> {
        let series = self.series(metric)?;
        Ok(aggregator.apply(&ingest::summarize(series)))
    }

    pub fn survey(&self, name: &str, scale: &LikertScale) -> Result<(SurveyKey, ResponseSet), Unevaluated> {
        let load = |e: IngestError, path: &Path| {
            if e.is_not_found() {
                Unevaluated::missing(format!("{} not found", path.display()))
            } else {
                Unevaluated::invalid(format!("{}: {e}", path.display()))
            }
        };
        let key_path = self.root.join(format!("{name}.key.csv"));
        let key = ingest::load_key(&key_path).map_err(|e| load(e, &key_path))?;
        let responses_path = self.root.join(format!("{name}.responses.csv"));
        let responses = ingest::load_responses(&responses_path, scale).map_err(|e| load(e, &responses_path))?;
        Ok((key, responses))
    }
}

/// Extra report sections produced while evaluating one requirement.
#[derive(Default)]
struct Sections {
    surveys: Vec<SurveyReport>,
    templates: Vec<TemplateReport>,
}

fn evaluate_requirement(
    spec: &CompiledSpec,
    req: &Requirement,
    data: &DataSource,
    options: &EvalOptions,
    sections: &mut Sections,
) -> Outcome {
    let result = match &req.verification {
        Verification::None => Err(Unevaluated {
            problem: Problem::Vague,
            reason: "no verification clause".into(),
        }),
        Verification::BooleanCheck { test } => data
            .series(test)
            .and_then(|series| evaluate_fr(test, series))
            .map(Outcome::Check),
        Verification::MetricThreshold(m) => data
            .series(&m.metric)
            .and_then(|series| evaluate_mnfr(m, series, options.aggregator))
            .map(Outcome::Check),
        Verification::LikertSurvey { scale, survey, band } => {
            let name = survey.as_deref().unwrap_or(&req.id);
            let scale = &spec.scales[scale.as_str()];
            let band = options.band.or(*band).unwrap_or(DEFAULT_BAND);
            data.survey(name, scale).and_then(|(key, responses)| {
                let result = evaluate_survey(scale, &key, &responses, band)?;
                sections.surveys.push(SurveyReport {
                    requirement: req.id.clone(),
                    survey: name.to_string(),
                    stats: result.stats.clone(),
                    decision: result.decision.clone(),
                });
                Ok(Outcome::Degree(Degree {
                    degree: result.degree,
                    label: result.decision.attitude.to_string(),
                    evidence: DegreeEvidence::Survey {
                        survey: name.to_string(),
                        scale: scale.name().to_string(),
                        items: key.len(),
                        respondents: result.stats.count,
                    },
                }))
            })
        }
        Verification::FuzzyAssessment {
            variable,
            input,
            target,
            hedge,
            aggregator,
        } => {
            let aggregator = aggregator.unwrap_or(Aggregator::Mean);
            let var = &spec.variables[variable.as_str()];
            data.aggregate(input, aggregator).and_then(|value| {
                let result = evaluate_fuzzy(var, target, *hedge, value)?;
                Ok(Outcome::Degree(Degree {
                    degree: result.degree,
                    label: result.label,
                    evidence: DegreeEvidence::Fuzzy {
                        variable: variable.clone(),
                        input: input.clone(),
                        aggregator,
                        value,
                        target: target.clone(),
                        hedge: *hedge,
                        membership: result.membership,
                        degrees: result.degrees,
                    },
                }))
            })
        }
        Verification::TemplateAssessment { template, aggregator } => {
            let aggregator = aggregator.unwrap_or(Aggregator::Mean);
            let tmpl = &spec.templates[template.as_str()];
            tmpl.subs()
                .iter()
                .map(|sub| data.aggregate(&sub.name, aggregator).map(|v| (sub.name.clone(), v)))
                .collect::<Result<Vec<_>, _>>()
                .and_then(|values| {
                    let outcome = evaluate_template(tmpl, &values)?;
                    sections.templates.push(TemplateReport {
                        requirement: req.id.clone(),
                        template: template.clone(),
                        status: outcome.status.clone(),
                        score: outcome.score,
                        raw_score: outcome.raw_score,
                        max_raw_score: outcome.max_raw_score,
                        grades: outcome.grades.clone(),
                    });
                    Ok(Outcome::Degree(Degree {
                        degree: outcome.score,
                        label: outcome.status.clone(),
                        evidence: DegreeEvidence::Template {
                            template: template.clone(),
                            aggregator,
                            status: outcome.status,
                            score: outcome.score,
                            raw_score: outcome.raw_score,
                            max_raw_score: outcome.max_raw_score,
                        },
                    }))
                })
        }
    };
    result.unwrap_or_else(Outcome::Unevaluated)
}

/// Evaluates every requirement, propagates satisfactions through the goal
/// forest and collects conflicts. Missing or unusable data marks the
/// affected requirements unevaluated; only an unreadable data directory
/// aborts the run.
pub fn evaluate_project(
    spec: &CompiledSpec,
    data_dir: &Path,
    options: &EvalOptions,
) -> Result<EvaluationReport, EvalError> {
    if let Some(band) = options.band {
        if !(0.0..=0.5).contains(&band) {
            return Err(EvalError::InvalidBand(band));
        }
    }
    let data = DataSource::open(data_dir)?;
    Ok(evaluate_with(spec, &data, options))
}

/// Like [`evaluate_project`] over an already opened data source.
pub fn evaluate_with(spec: &CompiledSpec, data: &DataSource, options: &EvalOptions) -> EvaluationReport {
    let mut sections = Sections::default();
    let mut results = Vec::with_capacity(spec.requirements.len());
    let mut leaves = HashMap::new();
    for req in &spec.requirements {
        let outcome = evaluate_requirement(spec, req, data, options, &mut sections);
        if let Some(s) = outcome.satisfaction() {
            leaves.insert(req.id.clone(), s);
        }
        results.push(RequirementResult {
            id: req.id.clone(),
            classification: classify(req),
            statement: req.statement.clone(),
            outcome,
        });
    }

    let values = spec
        .forest
        .propagate_available(&leaves)
        .expect("leaf satisfactions lie in [0, 1]");
    let known: IndexMap<String, f64> = values.iter().filter_map(|(k, v)| v.map(|v| (k.clone(), v))).collect();
    let roots = spec.forest.roots_satisfied(&known);
    let goals = spec
        .forest
        .nodes()
        .iter()
        .map(|node| GoalValue {
            id: node.id.clone(),
            label: node.label.clone(),
            weight: node.weight,
            requirement: match &node.kind {
                crate::goal::GoalKind::Leaf(r) => Some(r.clone()),
                crate::goal::GoalKind::Children(_) => None,
            },
            value: values[node.id.as_str()],
        })
        .collect();
    let conflicts = detect_conflicts(&spec.links);
    EvaluationReport::new(
        spec.project.clone(),
        results,
        goals,
        roots,
        conflicts,
        sections.surveys,
        sections.templates,
    )
}
