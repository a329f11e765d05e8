use serde::Serialize;

use super::FuzzyError;

/// A fuzzy set over a real-valued domain.
///
/// Shoulders may be unbounded: `trapezoid(40, 60, inf, inf)` is 1 for every
/// `x >= 60`. An edge whose outer end is infinite is evaluated as its limit,
/// which is a flat plateau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum MembershipFunction {
    Triangular {
        a: f64,
        b: f64,
        c: f64,
    },
    Trapezoidal {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    CrispInterval {
        lo: f64,
        hi: f64,
        lo_inclusive: bool,
        hi_inclusive: bool,
    },
}

fn check_param(name: &'static str, value: f64) -> Result<(), FuzzyError> {
    if value.is_nan() {
        return Err(FuzzyError::InvalidParameter {
            param: name,
            reason: "parameter is NaN".into(),
        });
    }
    Ok(())
}

fn check_order(names: &[&'static str], values: &[f64]) -> Result<(), FuzzyError> {
    for (name, &value) in names.iter().zip(values) {
        check_param(name, value)?;
    }
    for i in 1..values.len() {
        if values[i] < values[i - 1] {
            return Err(FuzzyError::InvalidParameter {
                param: names[i],
                reason: format!(
                    "{} = {} is below {} = {}",
                    names[i],
                    values[i],
                    names[i - 1],
                    values[i - 1]
                ),
            });
        }
    }
    Ok(())
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, FuzzyError> {
        check_order(&["a", "b", "c"], &[a, b, c])?;
        Ok(Self::Triangular { a, b, c })
    }

    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        check_order(&["a", "b", "c", "d"], &[a, b, c, d])?;
        Ok(Self::Trapezoidal { a, b, c, d })
    }

    pub fn crisp(lo: f64, hi: f64, lo_inclusive: bool, hi_inclusive: bool) -> Result<Self, FuzzyError> {
        check_order(&["lo", "hi"], &[lo, hi])?;
        Ok(Self::CrispInterval {
            lo,
            hi,
            lo_inclusive,
            hi_inclusive,
        })
    }

    /// Closed interval `[lo, hi]`.
    pub fn closed(lo: f64, hi: f64) -> Result<Self, FuzzyError> {
        Self::crisp(lo, hi, true, true)
    }

    /// Re-checks the ordering invariants. Values built through the public
    /// constructors always pass; values built from the enum literal may not.
    pub fn validate(&self) -> Result<(), FuzzyError> {
        match *self {
            Self::Triangular { a, b, c } => check_order(&["a", "b", "c"], &[a, b, c]),
            Self::Trapezoidal { a, b, c, d } => check_order(&["a", "b", "c", "d"], &[a, b, c, d]),
            Self::CrispInterval { lo, hi, .. } => check_order(&["lo", "hi"], &[lo, hi]),
        }
    }

    pub fn is_crisp(&self) -> bool {
        matches!(self, Self::CrispInterval { .. })
    }

    /// Degree of membership of `x`, always within `[0, 1]`.
    pub fn degree(&self, x: f64) -> f64 {
        match *self {
            Self::Triangular { a, b, c } => trapezoid(a, b, b, c, x),
            Self::Trapezoidal { a, b, c, d } => trapezoid(a, b, c, d, x),
            Self::CrispInterval {
                lo,
                hi,
                lo_inclusive,
                hi_inclusive,
            } => {
                let above = if lo_inclusive { x >= lo } else { x > lo };
                let below = if hi_inclusive { x <= hi } else { x < hi };
                if above && below {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Bounds of the region where the degree is nonzero, with inclusivity
    /// flags `(lo, lo_inclusive, hi, hi_inclusive)`.
    pub fn support(&self) -> (f64, bool, f64, bool) {
        match *self {
            Self::Triangular { a, b, c } => (a, a == b, c, b == c),
            Self::Trapezoidal { a, b, c, d } => (a, a == b, d, c == d),
            Self::CrispInterval {
                lo,
                hi,
                lo_inclusive,
                hi_inclusive,
            } => (lo, lo_inclusive, hi, hi_inclusive),
        }
    }

    /// Whether the nonzero support meets the closed interval `[lo, hi]`.
    pub fn support_intersects(&self, lo: f64, hi: f64) -> bool {
        let (s_lo, s_lo_incl, s_hi, s_hi_incl) = self.support();
        let starts_before_end = if s_lo_incl { s_lo <= hi } else { s_lo < hi };
        let ends_after_start = if s_hi_incl { s_hi >= lo } else { s_hi > lo };
        starts_before_end && ends_after_start && self.has_nonempty_support()
    }

    fn has_nonempty_support(&self) -> bool {
        let (lo, lo_incl, hi, hi_incl) = self.support();
        lo < hi || (lo == hi && lo_incl && hi_incl)
    }
}

fn trapezoid(a: f64, b: f64, c: f64, d: f64, x: f64) -> f64 {
    let mu = if x >= b && x <= c {
        1.0
    } else if x > a && x < b {
        if a == f64::NEG_INFINITY {
            1.0
        } else {
            (x - a) / (b - a)
        }
    } else if x > c && x < d {
        if d == f64::INFINITY {
            1.0
        } else {
            (d - x) / (d - c)
        }
    } else {
        0.0
    };
    mu.clamp(0.0, 1.0)
}
