use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{weighted_score, FuzzyError, MembershipFunction};

/// One grading band of a sub-NFR, e.g. `Low = [0, 0.1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grading {
    pub level: String,
    pub function: MembershipFunction,
}

/// A weighted component of a quality attribute. Gradings are listed best
/// first; the first grading maps to 1.0 and the last to 0.0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubNfr {
    pub name: String,
    pub weight: f64,
    /// Declared value range. When absent the hull of the gradings is used.
    pub range: Option<(f64, f64)>,
    pub gradings: Vec<Grading>,
}

/// A status row: the level each sub-NFR must reach, in sub-NFR order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatusRow {
    pub status: String,
    pub levels: Vec<String>,
}

/// Grading grid that combines weighted sub-NFRs into an overall status,
/// such as reliability from frequency of failure and recoverability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedTemplate {
    name: String,
    subs: Vec<SubNfr>,
    rows: Vec<StatusRow>,
    #[serde(skip)]
    row_ranks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubGrade {
    pub sub: String,
    pub value: f64,
    pub level: String,
    pub degree: f64,
    /// Position of the level in best-first order.
    pub rank: usize,
    pub level_value: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemplateOutcome {
    pub status: String,
    /// Weighted level value, normalized to `[0, 1]`.
    pub score: f64,
    /// Weighted level value before normalization, in `[0, sum of weights]`.
    pub raw_score: f64,
    pub max_raw_score: f64,
    pub grades: Vec<SubGrade>,
}

/// Evenly spaced level values from best (1.0) to worst (0.0).
pub fn level_value(rank: usize, levels: usize) -> f64 {
    if levels <= 1 {
        1.0
    } else {
        1.0 - rank as f64 / (levels - 1) as f64
    }
}

impl SubNfr {
    fn level_rank(&self, level: &str) -> Option<usize> {
        self.gradings.iter().position(|g| g.level == level)
    }

    pub fn value_range(&self) -> (f64, f64) {
        self.range.unwrap_or_else(|| {
            self.gradings
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), g| {
                    let (s_lo, _, s_hi, _) = g.function.support();
                    (lo.min(s_lo), hi.max(s_hi))
                })
        })
    }

    fn check_coverage(&self) -> Result<(), String> {
        let crisp = self.gradings.iter().filter(|g| g.function.is_crisp()).count();
        if crisp != 0 && crisp != self.gradings.len() {
            return Err("mixes crisp intervals with fuzzy gradings".into());
        }
        let disjoint = crisp != 0;
        let mut supports: Vec<_> = self
            .gradings
            .iter()
            .map(|g| {
                let (lo, lo_incl, hi, hi_incl) = g.function.support();
                if lo > hi || (lo == hi && !(lo_incl && hi_incl)) {
                    return Err(format!("level `{}` is empty", g.level));
                }
                Ok((lo, lo_incl, hi, hi_incl, g.level.as_str()))
            })
            .collect::<Result<_, _>>()?;
        supports.sort_by(|x, y| x.0.total_cmp(&y.0).then(y.1.cmp(&x.1)));

        let (range_lo, range_hi) = self.value_range();
        let first = supports[0];
        if first.0 > range_lo || (first.0 == range_lo && !first.1 && range_lo.is_finite()) {
            return Err(format!("gap between {} and {}", range_lo, first.0));
        }
        let (mut hi, mut hi_incl, mut hi_level) = (first.2, first.3, first.4);
        for &(lo, lo_incl, s_hi, s_hi_incl, level) in &supports[1..] {
            if lo > hi || (lo == hi && !lo_incl && !hi_incl) {
                return Err(format!("gap between {hi} and {lo}"));
            }
            if disjoint && (lo < hi || (lo == hi && lo_incl && hi_incl)) {
                return Err(format!("levels `{hi_level}` and `{level}` overlap"));
            }
            if s_hi > hi || (s_hi == hi && s_hi_incl && !hi_incl) {
                hi = s_hi;
                hi_incl = s_hi_incl;
                hi_level = level;
            }
        }
        if hi < range_hi || (hi == range_hi && !hi_incl && range_hi.is_finite()) {
            return Err(format!("gap between {} and {}", hi, range_hi));
        }
        Ok(())
    }
}

impl WeightedTemplate {
    pub fn new(name: impl Into<String>, subs: Vec<SubNfr>, rows: Vec<StatusRow>) -> Result<Self, FuzzyError> {
        let name = name.into();
        let invalid = |reason: String| FuzzyError::InvalidTemplate {
            template: name.clone(),
            reason,
        };
        if subs.is_empty() {
            return Err(invalid("needs at least one sub-NFR".into()));
        }
        if rows.is_empty() {
            return Err(invalid("needs at least one status row".into()));
        }
        let mut names = HashSet::new();
        for sub in &subs {
            if !names.insert(sub.name.as_str()) {
                return Err(invalid(format!("duplicate sub-NFR `{}`", sub.name)));
            }
            if !(sub.weight > 0.0 && sub.weight.is_finite()) {
                return Err(invalid(format!(
                    "sub-NFR `{}` has non-positive weight {}",
                    sub.name, sub.weight
                )));
            }
            if sub.gradings.is_empty() {
                return Err(invalid(format!("sub-NFR `{}` has no levels", sub.name)));
            }
            if let Some((lo, hi)) = sub.range {
                if lo.is_nan() || hi.is_nan() || lo > hi {
                    return Err(invalid(format!("sub-NFR `{}` has an empty range", sub.name)));
                }
            }
            let mut levels = HashSet::new();
            for g in &sub.gradings {
                if !levels.insert(g.level.as_str()) {
                    return Err(invalid(format!("sub-NFR `{}` repeats level `{}`", sub.name, g.level)));
                }
                g.function
                    .validate()
                    .map_err(|e| invalid(format!("sub-NFR `{}` level `{}`: {e}", sub.name, g.level)))?;
            }
            sub.check_coverage()
                .map_err(|reason| invalid(format!("sub-NFR `{}`: {reason}", sub.name)))?;
        }
        let mut statuses = HashSet::new();
        let mut row_ranks = Vec::with_capacity(rows.len());
        for row in &rows {
            if !statuses.insert(row.status.as_str()) {
                return Err(invalid(format!("duplicate status `{}`", row.status)));
            }
            if row.levels.len() != subs.len() {
                return Err(invalid(format!(
                    "status `{}` lists {} levels for {} sub-NFRs",
                    row.status,
                    row.levels.len(),
                    subs.len()
                )));
            }
            let ranks = subs
                .iter()
                .zip(&row.levels)
                .map(|(sub, level)| {
                    sub.level_rank(level).ok_or_else(|| {
                        invalid(format!(
                            "status `{}` references unknown level `{level}` of `{}`",
                            row.status, sub.name
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            row_ranks.push(ranks);
        }
        Ok(Self {
            name,
            subs,
            rows,
            row_ranks,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn subs(&self) -> &[SubNfr] {
        &self.subs
    }

    pub fn rows(&self) -> &[StatusRow] {
        &self.rows
    }

    pub fn total_weight(&self) -> f64 {
        self.subs.iter().map(|s| s.weight).sum()
    }

    fn sub(&self, name: &str) -> Result<&SubNfr, FuzzyError> {
        self.subs
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| FuzzyError::UnknownSubNfr(name.to_string()))
    }

    /// Level of `value` for one sub-NFR. Returns `(level, degree)`.
    pub fn grade_sub_nfr(&self, sub_name: &str, value: f64) -> Result<(&str, f64), FuzzyError> {
        let sub = self.sub(sub_name)?;
        self.grade(sub, value)
            .map(|(rank, degree)| (sub.gradings[rank].level.as_str(), degree))
    }

    fn grade(&self, sub: &SubNfr, value: f64) -> Result<(usize, f64), FuzzyError> {
        if let Some((lo, hi)) = sub.range {
            if !(value >= lo && value <= hi) {
                return Err(FuzzyError::OutOfDomain {
                    variable: sub.name.clone(),
                    x: value,
                    lo,
                    hi,
                });
            }
        }
        let mut best: Option<(usize, f64)> = None;
        for (rank, g) in sub.gradings.iter().enumerate() {
            let d = g.function.degree(value);
            if d > best.map_or(0.0, |b| b.1) {
                best = Some((rank, d));
            }
        }
        best.ok_or_else(|| FuzzyError::Coverage {
            sub: sub.name.clone(),
            value,
        })
    }

    /// Grades every sub-NFR and picks the overall status.
    ///
    /// The first row whose levels all match wins. Otherwise the status comes
    /// from the worst graded sub-NFR: the first row whose requirement for that
    /// sub-NFR is no better than what was observed, or the last row.
    pub fn evaluate(&self, values: &[(String, f64)]) -> Result<TemplateOutcome, FuzzyError> {
        let mut by_name: HashMap<&str, f64> = HashMap::new();
        for (name, value) in values {
            self.sub(name)?;
            by_name.insert(name.as_str(), *value);
        }
        let mut grades = Vec::with_capacity(self.subs.len());
        for sub in &self.subs {
            let value = *by_name
                .get(sub.name.as_str())
                .ok_or_else(|| FuzzyError::MissingValue(sub.name.clone()))?;
            let (rank, degree) = self.grade(sub, value)?;
            grades.push(SubGrade {
                sub: sub.name.clone(),
                value,
                level: sub.gradings[rank].level.clone(),
                degree,
                rank,
                level_value: level_value(rank, sub.gradings.len()),
                weight: sub.weight,
            });
        }

        let observed: Vec<usize> = grades.iter().map(|g| g.rank).collect();
        let row = match self.row_ranks.iter().position(|r| *r == observed) {
            Some(i) => i,
            None => {
                let mut worst = 0;
                for (i, g) in grades.iter().enumerate() {
                    if g.level_value < grades[worst].level_value {
                        worst = i;
                    }
                }
                self.row_ranks
                    .iter()
                    .position(|r| r[worst] >= observed[worst])
                    .unwrap_or(self.rows.len() - 1)
            }
        };

        let parts: Vec<(f64, f64)> = grades.iter().map(|g| (g.level_value, g.weight)).collect();
        let score = weighted_score(&parts)?;
        let raw_score = parts.iter().map(|(v, w)| v * w).sum();
        Ok(TemplateOutcome {
            status: self.rows[row].status.clone(),
            score,
            raw_score,
            max_raw_score: self.total_weight(),
            grades,
        })
    }
}
