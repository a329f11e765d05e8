//! Likert scales, reverse-coded attitude scoring and survey decisions.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

/// Default half-width of the undecided band, as a fraction of the full
/// score range.
pub const DEFAULT_BAND: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LikertError {
    #[error("a standard scale has 5, 6 or 7 points, not {0}")]
    UnsupportedPoints(i64),
    #[error("invalid scale `{name}`: {reason}")]
    InvalidScale { name: String, reason: String },
    #[error("unknown label \"{label}\" in scale `{scale}`")]
    UnknownLabel { label: String, scale: String },
    #[error("respondent `{respondent}`: missing items [{}], extra items [{}]", missing.join(", "), extra.join(", "))]
    Incomplete {
        respondent: String,
        missing: Vec<String>,
        extra: Vec<String>,
    },
    #[error("invalid survey key: {0}")]
    InvalidKey(String),
    #[error("no scores to aggregate")]
    Empty,
    #[error("scores come from different surveys: {0}")]
    Inconsistent(String),
    #[error("decision band {0} is outside [0, 0.5]")]
    InvalidBand(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Category {
    pub label: String,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LikertScale {
    name: String,
    categories: Vec<Category>,
}

const SEVEN_POINT: [&str; 7] = [
    "Strongly Agree",
    "Agree",
    "Agree Somewhat",
    "Undecided",
    "Disagree Somewhat",
    "Disagree",
    "Strongly Disagree",
];

impl LikertScale {
    /// Builds a scale from ordered categories. Values must be consecutive
    /// integers running strictly up or strictly down the list.
    pub fn new(name: impl Into<String>, categories: Vec<Category>) -> Result<Self, LikertError> {
        let name = name.into();
        let invalid = |reason: String| LikertError::InvalidScale {
            name: name.clone(),
            reason,
        };
        if !(5..=7).contains(&categories.len()) {
            return Err(invalid(format!("needs 5 to 7 categories, found {}", categories.len())));
        }
        let mut labels = HashSet::new();
        for c in &categories {
            if !labels.insert(c.label.as_str()) {
                return Err(invalid(format!("duplicate label \"{}\"", c.label)));
            }
        }
        let step = categories[1].value - categories[0].value;
        if step.abs() != 1 {
            return Err(invalid("values must be consecutive integers".into()));
        }
        for pair in categories.windows(2) {
            if pair[1].value - pair[0].value != step {
                return Err(invalid(format!(
                    "value of \"{}\" breaks the consecutive ordering",
                    pair[1].label
                )));
            }
        }
        Ok(Self { name, categories })
    }

    /// The agree-first standard scale. Seven points gives the classic
    /// Strongly Agree = 7 .. Strongly Disagree = 1 table; six points drops
    /// Undecided and five points drops the two Somewhat rows.
    pub fn standard(points: i64) -> Result<Self, LikertError> {
        let labels: Vec<&str> = match points {
            7 => SEVEN_POINT.to_vec(),
            6 => SEVEN_POINT.iter().copied().filter(|l| *l != "Undecided").collect(),
            5 => SEVEN_POINT
                .iter()
                .copied()
                .filter(|l| !l.contains("Somewhat"))
                .collect(),
            other => return Err(LikertError::UnsupportedPoints(other)),
        };
        let categories = labels
            .iter()
            .zip((1..=points).rev())
            .map(|(label, value)| Category {
                label: label.to_string(),
                value,
            })
            .collect();
        Self::new(format!("likert{points}"), categories)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn points(&self) -> usize {
        self.categories.len()
    }

    pub fn min_value(&self) -> i64 {
        self.categories.iter().map(|c| c.value).min().unwrap_or(0)
    }

    pub fn max_value(&self) -> i64 {
        self.categories.iter().map(|c| c.value).max().unwrap_or(0)
    }

    pub fn value_of(&self, label: &str) -> Result<i64, LikertError> {
        self.categories
            .iter()
            .find(|c| c.label == label)
            .map(|c| c.value)
            .ok_or_else(|| LikertError::UnknownLabel {
                label: label.to_string(),
                scale: self.name.clone(),
            })
    }

    pub fn label_of(&self, value: i64) -> Option<&str> {
        self.categories
            .iter()
            .find(|c| c.value == value)
            .map(|c| c.label.as_str())
    }

    /// Label on the opposite side of the scale (`v -> min + max - v`).
    pub fn mirror(&self, label: &str) -> Result<&str, LikertError> {
        let v = self.value_of(label)?;
        Ok(self
            .label_of(self.min_value() + self.max_value() - v)
            .expect("consecutive values are symmetric"))
    }

    /// Value a choice contributes to the attitude score. Unfavorable items
    /// are reverse-coded so a high score always means a favorable attitude.
    pub fn item_value(&self, label: &str, polarity: Polarity) -> Result<i64, LikertError> {
        let v = self.value_of(label)?;
        Ok(match polarity {
            Polarity::Favorable => v,
            Polarity::Unfavorable => self.min_value() + self.max_value() - v,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Favorable,
    Unfavorable,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Favorable => "favorable",
            Polarity::Unfavorable => "unfavorable",
        }
    }
}

impl std::str::FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "favorable" | "+" => Ok(Polarity::Favorable),
            "unfavorable" | "-" => Ok(Polarity::Unfavorable),
            other => Err(format!("polarity must be `favorable` or `unfavorable`, got `{other}`")),
        }
    }
}

/// Which statements are phrased in favor of the proposition and which
/// against it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyKey {
    items: IndexMap<String, Polarity>,
}

impl SurveyKey {
    pub fn new(items: impl IntoIterator<Item = (String, Polarity)>) -> Result<Self, LikertError> {
        let mut map = IndexMap::new();
        for (id, polarity) in items {
            if map.insert(id.clone(), polarity).is_some() {
                return Err(LikertError::InvalidKey(format!("duplicate item `{id}`")));
            }
        }
        if map.is_empty() {
            return Err(LikertError::InvalidKey("no items".into()));
        }
        Ok(Self { items: map })
    }

    pub fn items(&self) -> &IndexMap<String, Polarity> {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Raw survey answers: respondent -> item -> chosen label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ResponseSet {
    pub scale: String,
    pub rows: IndexMap<String, IndexMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttitudeScore {
    pub respondent: String,
    pub score: i64,
    pub min_possible: i64,
    pub max_possible: i64,
}

/// Summed attitude score of one respondent.
pub fn score_respondent(
    scale: &LikertScale,
    key: &SurveyKey,
    respondent: &str,
    answers: &IndexMap<String, String>,
) -> Result<AttitudeScore, LikertError> {
    let missing: Vec<String> = key
        .items
        .keys()
        .filter(|i| !answers.contains_key(*i))
        .cloned()
        .collect();
    let extra: Vec<String> = answers
        .keys()
        .filter(|i| !key.items.contains_key(*i))
        .cloned()
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(LikertError::Incomplete {
            respondent: respondent.to_string(),
            missing,
            extra,
        });
    }
    let mut score = 0;
    for (item, polarity) in &key.items {
        score += scale.item_value(&answers[item], *polarity)?;
    }
    let n = key.len() as i64;
    Ok(AttitudeScore {
        respondent: respondent.to_string(),
        score,
        min_possible: n * scale.min_value(),
        max_possible: n * scale.max_value(),
    })
}

/// Scores every respondent in file order.
pub fn score_responses(
    scale: &LikertScale,
    key: &SurveyKey,
    responses: &ResponseSet,
) -> Result<Vec<AttitudeScore>, LikertError> {
    responses
        .rows
        .iter()
        .map(|(respondent, answers)| score_respondent(scale, key, respondent, answers))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyStats {
    pub count: usize,
    pub mean: f64,
    /// Lower middle value for even counts.
    pub median: i64,
    pub min: i64,
    pub max: i64,
    pub min_possible: i64,
    pub max_possible: i64,
    pub histogram: BTreeMap<i64, usize>,
}

pub fn aggregate_scores(scores: &[AttitudeScore]) -> Result<SurveyStats, LikertError> {
    let first = scores.first().ok_or(LikertError::Empty)?;
    if let Some(odd) = scores
        .iter()
        .find(|s| s.min_possible != first.min_possible || s.max_possible != first.max_possible)
    {
        return Err(LikertError::Inconsistent(format!(
            "`{}` spans [{}, {}] but `{}` spans [{}, {}]",
            first.respondent,
            first.min_possible,
            first.max_possible,
            odd.respondent,
            odd.min_possible,
            odd.max_possible
        )));
    }
    let mut values: Vec<i64> = scores.iter().map(|s| s.score).collect();
    values.sort_unstable();
    let mut histogram = BTreeMap::new();
    for v in &values {
        *histogram.entry(*v).or_insert(0) += 1;
    }
    let sum: i64 = values.iter().sum();
    Ok(SurveyStats {
        count: values.len(),
        mean: sum as f64 / values.len() as f64,
        median: values[(values.len() - 1) / 2],
        min: values[0],
        max: values[values.len() - 1],
        min_possible: first.min_possible,
        max_possible: first.max_possible,
        histogram,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Attitude {
    Unfavorable,
    Undecided,
    Favorable,
}

impl fmt::Display for Attitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attitude::Favorable => "Favorable",
            Attitude::Unfavorable => "Unfavorable",
            Attitude::Undecided => "Undecided",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttitudeDecision {
    pub attitude: Attitude,
    pub mean: f64,
    pub neutral: f64,
    pub band: f64,
    /// `mean - neutral`
    pub margin: f64,
}

/// Compares the mean attitude score against the scale's neutral point with
/// a symmetric dead band of `band_fraction` of the full score range.
pub fn attitude_decision(
    stats: &SurveyStats,
    n_items: usize,
    scale: &LikertScale,
    band_fraction: f64,
) -> Result<AttitudeDecision, LikertError> {
    if !(0.0..=0.5).contains(&band_fraction) {
        return Err(LikertError::InvalidBand(band_fraction));
    }
    let n = n_items as i64;
    let (lo, hi) = (n * scale.min_value(), n * scale.max_value());
    if stats.min_possible != lo || stats.max_possible != hi {
        return Err(LikertError::Inconsistent(format!(
            "statistics span [{}, {}] but {n_items} items on `{}` span [{lo}, {hi}]",
            stats.min_possible,
            stats.max_possible,
            scale.name()
        )));
    }
    let neutral = n_items as f64 * (scale.min_value() + scale.max_value()) as f64 / 2.0;
    let band = band_fraction * (hi - lo) as f64;
    let attitude = if stats.mean > neutral + band {
        Attitude::Favorable
    } else if stats.mean < neutral - band {
        Attitude::Unfavorable
    } else {
        Attitude::Undecided
    };
    Ok(AttitudeDecision {
        attitude,
        mean: stats.mean,
        neutral,
        band,
        margin: stats.mean - neutral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(n: usize, polarity: Polarity) -> SurveyKey {
        SurveyKey::new((1..=n).map(|i| (format!("q{i}"), polarity))).unwrap()
    }

    fn uniform(n: usize, label: &str) -> IndexMap<String, String> {
        (1..=n).map(|i| (format!("q{i}"), label.to_string())).collect()
    }

    #[test]
    fn seven_point_table() {
        let s = LikertScale::standard(7).unwrap();
        let pairs: Vec<_> = s.categories().iter().map(|c| (c.label.as_str(), c.value)).collect();
        assert_eq!(
            pairs,
            vec![
                ("Strongly Agree", 7),
                ("Agree", 6),
                ("Agree Somewhat", 5),
                ("Undecided", 4),
                ("Disagree Somewhat", 3),
                ("Disagree", 2),
                ("Strongly Disagree", 1),
            ]
        );
    }

    #[test]
    fn five_and_six_point_renumbering() {
        let five = LikertScale::standard(5).unwrap();
        let pairs: Vec<_> = five.categories().iter().map(|c| (c.label.as_str(), c.value)).collect();
        assert_eq!(
            pairs,
            vec![
                ("Strongly Agree", 5),
                ("Agree", 4),
                ("Undecided", 3),
                ("Disagree", 2),
                ("Strongly Disagree", 1)
            ]
        );
        let six = LikertScale::standard(6).unwrap();
        assert_eq!(six.value_of("Strongly Agree").unwrap(), 6);
        assert_eq!(six.value_of("Disagree Somewhat").unwrap(), 3);
        assert!(six.value_of("Undecided").is_err());
        assert_eq!(LikertScale::standard(4).unwrap_err(), LikertError::UnsupportedPoints(4));
        assert!(LikertScale::standard(8).is_err());
    }

    #[test]
    fn custom_scale_invariants() {
        let cat = |label: &str, value| Category {
            label: label.into(),
            value,
        };
        let ascending: Vec<_> = (1..=5).map(|v| cat(&format!("c{v}"), v)).collect();
        assert!(LikertScale::new("up", ascending).is_ok());
        let gap = vec![cat("a", 1), cat("b", 2), cat("c", 4), cat("d", 5), cat("e", 6)];
        assert!(LikertScale::new("gap", gap).is_err());
        let dup = vec![cat("a", 1), cat("a", 2), cat("c", 3), cat("d", 4), cat("e", 5)];
        assert!(LikertScale::new("dup", dup).is_err());
        let short: Vec<_> = (1..=4).map(|v| cat(&format!("c{v}"), v)).collect();
        assert!(LikertScale::new("short", short).is_err());
    }

    #[test]
    fn reverse_coding() {
        let s = LikertScale::standard(7).unwrap();
        assert_eq!(s.item_value("Strongly Agree", Polarity::Favorable).unwrap(), 7);
        assert_eq!(s.item_value("Strongly Agree", Polarity::Unfavorable).unwrap(), 1);
        assert_eq!(s.item_value("Undecided", Polarity::Unfavorable).unwrap(), 4);
        let err = s.item_value("Stronly Agree", Polarity::Favorable).unwrap_err();
        assert!(err.to_string().contains("Stronly Agree") && err.to_string().contains("likert7"));
    }

    #[test]
    fn thirty_item_survey_bounds() {
        let s = LikertScale::standard(7).unwrap();
        let k = key(30, Polarity::Favorable);
        let top = score_respondent(&s, &k, "r1", &uniform(30, "Strongly Agree")).unwrap();
        assert_eq!((top.score, top.min_possible, top.max_possible), (210, 30, 210));
        let mid = score_respondent(&s, &k, "r2", &uniform(30, "Undecided")).unwrap();
        assert_eq!(mid.score, 120);
        let one = score_respondent(&s, &key(1, Polarity::Favorable), "r3", &uniform(1, "Disagree")).unwrap();
        assert_eq!(one.score, 2);
    }

    #[test]
    fn incomplete_answers_list_items() {
        let s = LikertScale::standard(7).unwrap();
        let k = key(3, Polarity::Favorable);
        let mut answers = uniform(2, "Agree");
        answers.insert("q9".into(), "Agree".into());
        match score_respondent(&s, &k, "r1", &answers).unwrap_err() {
            LikertError::Incomplete { missing, extra, .. } => {
                assert_eq!(missing, vec!["q3"]);
                assert_eq!(extra, vec!["q9"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn score(v: i64) -> AttitudeScore {
        AttitudeScore {
            respondent: format!("r{v}"),
            score: v,
            min_possible: 30,
            max_possible: 210,
        }
    }

    #[test]
    fn aggregate_statistics() {
        let stats = aggregate_scores(&[score(210), score(30)]).unwrap();
        assert_eq!(stats.mean, 120.0);
        assert_eq!(stats.median, 30);
        assert_eq!((stats.min, stats.max, stats.count), (30, 210, 2));
        assert_eq!(stats.histogram.len(), 2);
        let single = aggregate_scores(&[score(120)]).unwrap();
        assert_eq!((single.mean, single.median), (120.0, 120));
        assert_eq!(aggregate_scores(&[]).unwrap_err(), LikertError::Empty);
        let mut other = score(5);
        other.max_possible = 35;
        assert!(matches!(
            aggregate_scores(&[score(40), other]),
            Err(LikertError::Inconsistent(_))
        ));
    }

    #[test]
    fn decisions_around_neutral() {
        let s = LikertScale::standard(7).unwrap();
        let with_mean = |mean: f64| SurveyStats {
            count: 1,
            mean,
            median: mean as i64,
            min: mean as i64,
            max: mean as i64,
            min_possible: 30,
            max_possible: 210,
            histogram: BTreeMap::new(),
        };
        let fav = attitude_decision(&with_mean(180.0), 30, &s, DEFAULT_BAND).unwrap();
        assert_eq!(fav.attitude, Attitude::Favorable);
        assert_eq!((fav.neutral, fav.band, fav.margin), (120.0, 9.0, 60.0));
        assert_eq!(
            attitude_decision(&with_mean(120.0), 30, &s, DEFAULT_BAND)
                .unwrap()
                .attitude,
            Attitude::Undecided
        );
        assert_eq!(
            attitude_decision(&with_mean(60.0), 30, &s, DEFAULT_BAND)
                .unwrap()
                .attitude,
            Attitude::Unfavorable
        );
        // Band edges are undecided.
        assert_eq!(
            attitude_decision(&with_mean(129.0), 30, &s, DEFAULT_BAND)
                .unwrap()
                .attitude,
            Attitude::Undecided
        );
        assert!(attitude_decision(&with_mean(120.0), 29, &s, DEFAULT_BAND).is_err());
        assert!(attitude_decision(&with_mean(120.0), 30, &s, 0.6).is_err());
    }
}
