use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::FuzzyError;

/// Linguistic modifier applied to a membership degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hedge {
    /// `1 - mu`
    Not,
    /// `mu^2`
    Very,
    /// `mu^(1/2)`
    Somewhat,
    /// `mu^(1/3)`, a weaker dilation than `somewhat`.
    Slightly,
}

impl Hedge {
    pub const ALL: [Hedge; 4] = [Hedge::Not, Hedge::Very, Hedge::Somewhat, Hedge::Slightly];

    pub fn apply(self, mu: f64) -> Result<f64, FuzzyError> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(FuzzyError::DegreeOutOfRange(mu));
        }
        let out = match self {
            Hedge::Not => 1.0 - mu,
            Hedge::Very => mu * mu,
            Hedge::Somewhat => mu.sqrt(),
            Hedge::Slightly => mu.cbrt(),
        };
        Ok(out.clamp(0.0, 1.0))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Hedge::Not => "not",
            Hedge::Very => "very",
            Hedge::Somewhat => "somewhat",
            Hedge::Slightly => "slightly",
        }
    }
}

impl fmt::Display for Hedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Hedge {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Hedge::ALL
            .into_iter()
            .find(|h| h.as_str() == s)
            .ok_or_else(|| format!("unknown hedge `{s}`"))
    }
}

/// Applies the hedge, with `None` meaning the bare term.
pub fn apply_hedge(hedge: Option<Hedge>, mu: f64) -> Result<f64, FuzzyError> {
    match hedge {
        Some(h) => h.apply(mu),
        None if (0.0..=1.0).contains(&mu) => Ok(mu),
        None => Err(FuzzyError::DegreeOutOfRange(mu)),
    }
}
