use std::fmt::Write;

use serde::Serialize;

use super::{CheckEvidence, Classification, Kind, Outcome, Problem};
use crate::fuzzy::SubGrade;
use crate::goal::{Conflict, RootVerdict};
use crate::likert::{AttitudeDecision, SurveyStats};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RequirementResult {
    pub id: String,
    pub classification: Classification,
    pub statement: Option<String>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoalValue {
    pub id: String,
    pub label: String,
    pub weight: f64,
    /// Set on leaves.
    pub requirement: Option<String>,
    /// `None` when no child below has been evaluated.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyReport {
    pub requirement: String,
    pub survey: String,
    pub stats: SurveyStats,
    pub decision: AttitudeDecision,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemplateReport {
    pub requirement: String,
    pub template: String,
    pub status: String,
    /// Normalized to `[0, 1]`.
    pub score: f64,
    /// In `[0, max_raw_score]`, the sum of the sub-NFR weights.
    pub raw_score: f64,
    pub max_raw_score: f64,
    pub grades: Vec<SubGrade>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub requirements: usize,
    pub fr: usize,
    pub m_nfr: usize,
    pub s_nfr: usize,
    pub vague: usize,
    pub passed: usize,
    pub failed: usize,
    pub scored: usize,
    pub missing_data: usize,
    pub invalid_data: usize,
    pub roots: usize,
    pub roots_satisfied: usize,
    pub conflicts: usize,
}

/// Overall result of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    /// A check failed, a root is below its threshold or data is missing.
    Unsatisfied,
    /// Some data could not be used.
    DataError,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub project: String,
    pub verdict: Verdict,
    pub summary: Summary,
    pub requirements: Vec<RequirementResult>,
    pub goals: Vec<GoalValue>,
    pub roots: Vec<RootVerdict>,
    pub conflicts: Vec<Conflict>,
    pub surveys: Vec<SurveyReport>,
    pub templates: Vec<TemplateReport>,
}

impl EvaluationReport {
    pub fn new(
        project: String,
        requirements: Vec<RequirementResult>,
        goals: Vec<GoalValue>,
        roots: Vec<RootVerdict>,
        conflicts: Vec<Conflict>,
        surveys: Vec<SurveyReport>,
        templates: Vec<TemplateReport>,
    ) -> Self {
        let mut summary = Summary {
            requirements: requirements.len(),
            roots: roots.len(),
            roots_satisfied: roots.iter().filter(|r| r.satisfied).count(),
            conflicts: conflicts.len(),
            ..Summary::default()
        };
        for r in &requirements {
            match r.classification.kind {
                Kind::Fr => summary.fr += 1,
                Kind::MNfr => summary.m_nfr += 1,
                Kind::SNfr => summary.s_nfr += 1,
                Kind::Vague => summary.vague += 1,
            }
            match &r.outcome {
                Outcome::Check(c) if c.passed => summary.passed += 1,
                Outcome::Check(_) => summary.failed += 1,
                Outcome::Degree(_) => summary.scored += 1,
                Outcome::Unevaluated(u) => match u.problem {
                    Problem::Vague => {}
                    Problem::MissingData => summary.missing_data += 1,
                    Problem::InvalidData => summary.invalid_data += 1,
                },
            }
        }
        let verdict = if summary.invalid_data > 0 {
            Verdict::DataError
        } else if summary.failed > 0 || summary.missing_data > 0 || summary.roots_satisfied < summary.roots {
            Verdict::Unsatisfied
        } else {
            Verdict::Satisfied
        };
        Self {
            project,
            verdict,
            summary,
            requirements,
            goals,
            roots,
            conflicts,
            surveys,
            templates,
        }
    }

    pub fn result(&self, id: &str) -> Option<&RequirementResult> {
        self.requirements.iter().find(|r| r.id == id)
    }

    pub fn goal(&self, id: &str) -> Option<&GoalValue> {
        self.goals.iter().find(|g| g.id == id)
    }

    /// Pretty-printed JSON. Fields keep declaration order and floats are
    /// written at full precision, so equal reports give equal bytes.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// Aligned plain-text tables.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "project: {}", self.project);
        let _ = writeln!(out);

        let mut rows = vec![row(["requirement", "kind", "result", "value", "detail"])];
        for r in &self.requirements {
            let (result, value, detail) = match &r.outcome {
                Outcome::Check(c) => {
                    let detail = match &c.evidence {
                        CheckEvidence::Test {
                            test,
                            runs,
                            passed_runs,
                        } => {
                            format!("test \"{test}\": {passed_runs}/{runs} runs passed")
                        }
                        CheckEvidence::Metric {
                            metric,
                            unit,
                            comparator,
                            bound,
                            aggregator,
                            ..
                        } => format!(
                            "{aggregator} of {metric} {comparator} {bound} {unit}, margin {}",
                            c.margin.map_or("-".into(), fixed)
                        ),
                    };
                    (
                        if c.passed { "pass" } else { "FAIL" }.to_string(),
                        fixed(c.observed),
                        detail,
                    )
                }
                Outcome::Degree(d) => (d.label.clone(), fixed(d.degree), r.classification.rationale.clone()),
                Outcome::Unevaluated(u) => {
                    let result = match u.problem {
                        Problem::Vague => "VAGUE",
                        Problem::MissingData => "NO DATA",
                        Problem::InvalidData => "BAD DATA",
                    };
                    let detail = if u.problem == Problem::Vague {
                        r.classification.rationale.clone()
                    } else {
                        u.reason.clone()
                    };
                    (result.to_string(), "-".to_string(), detail)
                }
            };
            rows.push(vec![
                r.id.clone(),
                r.classification.kind.to_string(),
                result,
                value,
                detail,
            ]);
        }
        table(&mut out, &rows);

        if !self.goals.is_empty() {
            let _ = writeln!(out);
            let mut rows = vec![row(["goal", "weight", "value", "threshold", "status"])];
            for g in &self.goals {
                let root = self.roots.iter().find(|r| r.id == g.id);
                rows.push(vec![
                    g.id.clone(),
                    trim_number(g.weight),
                    g.value.map_or("-".into(), fixed),
                    root.map_or(String::new(), |r| fixed(r.threshold)),
                    root.map_or(String::new(), |r| {
                        if r.satisfied { "satisfied" } else { "UNSATISFIED" }.to_string()
                    }),
                ]);
            }
            table(&mut out, &rows);
        }

        if !self.templates.is_empty() {
            let _ = writeln!(out);
            let mut rows = vec![row(["template", "requirement", "status", "score", "raw"])];
            for t in &self.templates {
                rows.push(vec![
                    t.template.clone(),
                    t.requirement.clone(),
                    t.status.clone(),
                    fixed(t.score),
                    format!("{} / {}", fixed(t.raw_score), trim_number(t.max_raw_score)),
                ]);
            }
            table(&mut out, &rows);
        }

        if !self.surveys.is_empty() {
            let _ = writeln!(out);
            let mut rows = vec![row(["survey", "respondents", "mean", "median", "range", "decision"])];
            for s in &self.surveys {
                rows.push(vec![
                    s.survey.clone(),
                    s.stats.count.to_string(),
                    fixed(s.stats.mean),
                    s.stats.median.to_string(),
                    format!("{}..{}", s.stats.min_possible, s.stats.max_possible),
                    s.decision.attitude.to_string(),
                ]);
            }
            table(&mut out, &rows);
        }

        if !self.conflicts.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "conflicts:");
            for c in &self.conflicts {
                let _ = writeln!(
                    out,
                    "  {} helps {} ({:+}) but hurts {} ({:+})",
                    c.source, c.helps, c.help_sign, c.hurts, c.hurt_sign
                );
            }
        }

        let s = &self.summary;
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{} requirements: {} FR, {} M-NFR, {} S-NFR, {} vague",
            s.requirements, s.fr, s.m_nfr, s.s_nfr, s.vague
        );
        let _ = writeln!(
            out,
            "{} passed, {} failed, {} scored, {} missing data, {} invalid data",
            s.passed, s.failed, s.scored, s.missing_data, s.invalid_data
        );
        let _ = writeln!(
            out,
            "{}/{} root goals satisfied, {} conflicts",
            s.roots_satisfied, s.roots, s.conflicts
        );
        out
    }
}

fn row<const N: usize>(cells: [&str; N]) -> Vec<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

pub(crate) fn fixed(x: f64) -> String {
    format!("{x:.4}")
}

fn trim_number(x: f64) -> String {
    format!("{x}")
}

/// Writes left-aligned columns separated by two spaces; the last column is not
/// padded.
pub fn table(out: &mut String, rows: &[Vec<String>]) {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|i| {
            rows.iter()
                .filter_map(|r| r.get(i))
                .map(|c| c.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for r in rows {
        let mut line = String::new();
        for (i, cell) in r.iter().enumerate() {
            if i + 1 == r.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[i]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
}
