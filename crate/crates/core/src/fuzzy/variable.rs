use std::collections::HashSet;

use serde::Serialize;

use super::{FuzzyError, MembershipFunction};

/// A named numeric quantity described by fuzzy terms, e.g. transaction
/// throughput as `slow`, `average` and `fast`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinguisticVariable {
    name: String,
    unit: String,
    domain: Option<(f64, f64)>,
    terms: Vec<(String, MembershipFunction)>,
}

impl LinguisticVariable {
    pub fn new(
        name: impl Into<String>,
        unit: impl Into<String>,
        domain: Option<(f64, f64)>,
        terms: Vec<(String, MembershipFunction)>,
    ) -> Result<Self, FuzzyError> {
        let name = name.into();
        let invalid = |reason: String| FuzzyError::InvalidVariable {
            name: name.clone(),
            reason,
        };
        if terms.len() < 2 {
            return Err(invalid(format!("needs at least 2 terms, found {}", terms.len())));
        }
        let mut seen = HashSet::new();
        for (term, mf) in &terms {
            if !seen.insert(term.as_str()) {
                return Err(invalid(format!("duplicate term `{term}`")));
            }
            mf.validate().map_err(|e| invalid(format!("term `{term}`: {e}")))?;
        }
        if let Some((lo, hi)) = domain {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(invalid(format!("domain [{lo}, {hi}] is empty")));
            }
            for (term, mf) in &terms {
                if !mf.support_intersects(lo, hi) {
                    return Err(invalid(format!(
                        "term `{term}` has no support inside the domain [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(Self {
            name,
            unit: unit.into(),
            domain,
            terms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn domain(&self) -> Option<(f64, f64)> {
        self.domain
    }

    pub fn terms(&self) -> &[(String, MembershipFunction)] {
        &self.terms
    }

    pub fn term(&self, name: &str) -> Option<&MembershipFunction> {
        self.terms.iter().find(|(t, _)| t == name).map(|(_, mf)| mf)
    }

    /// Degree of every term at `x`, in declaration order.
    pub fn fuzzify(&self, x: f64) -> Result<Vec<(String, f64)>, FuzzyError> {
        if let Some((lo, hi)) = self.domain {
            if !(x >= lo && x <= hi) {
                return Err(FuzzyError::OutOfDomain {
                    variable: self.name.clone(),
                    x,
                    lo,
                    hi,
                });
            }
        }
        Ok(self
            .terms
            .iter()
            .map(|(term, mf)| (term.clone(), mf.degree(x)))
            .collect())
    }
}

/// Term with the highest degree. Ties go to the term listed first, so pass
/// degrees in declaration order.
pub fn best_label(degrees: &[(String, f64)]) -> Result<(&str, f64), FuzzyError> {
    let mut best: Option<(&str, f64)> = None;
    for (term, degree) in degrees {
        match best {
            Some((_, d)) if *degree <= d => {}
            _ => best = Some((term.as_str(), *degree)),
        }
    }
    best.ok_or(FuzzyError::EmptyArgument("degree mapping"))
}
