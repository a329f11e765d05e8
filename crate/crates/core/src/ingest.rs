//! CSV loading for survey responses, survey keys and measurement series.
//!
//! Files are comma separated, UTF-8, double-quote quoted, with a mandatory
//! header row:
//!
//! | file          | header                       |
//! |---------------|------------------------------|
//! | responses     | `respondent_id,item_id,choice` |
//! | survey key    | `item_id,polarity`           |
//! | measurements  | `metric,unit,value`          |

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::likert::{LikertScale, Polarity, ResponseSet, SurveyKey};

pub const RESPONSES_HEADER: [&str; 3] = ["respondent_id", "item_id", "choice"];
pub const KEY_HEADER: [&str; 2] = ["item_id", "polarity"];
pub const MEASUREMENTS_HEADER: [&str; 3] = ["metric", "unit", "value"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("empty input: no header or no data rows")]
    Empty,
    #[error("expected header `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: unknown choice \"{label}\" (did you mean \"{suggestion}\"?)")]
    UnknownLabel {
        line: u64,
        label: String,
        suggestion: String,
    },
    #[error("line {line}: duplicate answer for respondent `{respondent}` item `{item}`")]
    Duplicate {
        line: u64,
        respondent: String,
        item: String,
    },
    #[error("line {line}: `{value}` is not a finite number")]
    NonNumeric { line: u64, value: String },
}

impl IngestError {
    /// True when the file could not be opened because it does not exist.
    pub fn is_not_found(&self) -> bool {
        matches!(self, IngestError::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound)
    }
}

fn open(path: &Path) -> Result<File, IngestError> {
    File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_error(err: csv::Error) -> IngestError {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    IngestError::Malformed {
        line,
        message: match err.kind() {
            csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                format!("expected {expected_len} fields, found {len}")
            }
            csv::ErrorKind::Utf8 { .. } => "invalid UTF-8".to_string(),
            _ => err.to_string(),
        },
    }
}

/// Reads records after checking the header matches `expected` exactly.
fn records<R: Read>(reader: R, expected: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.is_empty() {
        return Err(IngestError::Empty);
    }
    if header.iter().ne(expected.iter().copied()) {
        return Err(IngestError::Header {
            expected: expected.join(","),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        out.push((line, record));
    }
    Ok(out)
}

fn nearest<'a>(label: &str, candidates: impl Iterator<Item = &'a str>) -> String {
    candidates
        .min_by_key(|c| strsim::levenshtein(&label.to_lowercase(), &c.to_lowercase()))
        .unwrap_or_default()
        .to_string()
}

pub fn read_responses<R: Read>(reader: R, scale: &LikertScale) -> Result<ResponseSet, IngestError> {
    let mut rows: IndexMap<String, IndexMap<String, String>> = IndexMap::new();
    for (line, record) in records(reader, &RESPONSES_HEADER)? {
        let (respondent, item, choice) = (&record[0], &record[1], &record[2]);
        if respondent.is_empty() || item.is_empty() {
            return Err(IngestError::Malformed {
                line,
                message: "respondent_id and item_id must not be empty".into(),
            });
        }
        if scale.value_of(choice).is_err() {
            return Err(IngestError::UnknownLabel {
                line,
                label: choice.to_string(),
                suggestion: nearest(choice, scale.categories().iter().map(|c| c.label.as_str())),
            });
        }
        let answers = rows.entry(respondent.to_string()).or_default();
        if answers.insert(item.to_string(), choice.to_string()).is_some() {
            return Err(IngestError::Duplicate {
                line,
                respondent: respondent.to_string(),
                item: item.to_string(),
            });
        }
    }
    Ok(ResponseSet {
        scale: scale.name().to_string(),
        rows,
    })
}

/// Loads `respondent_id,item_id,choice` rows, validating every choice
/// against `scale`.
pub fn load_responses(path: &Path, scale: &LikertScale) -> Result<ResponseSet, IngestError> {
    read_responses(open(path)?, scale)
}

pub fn write_responses<W: Write>(responses: &ResponseSet, writer: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(RESPONSES_HEADER)?;
    for (respondent, answers) in &responses.rows {
        for (item, choice) in answers {
            w.write_record([respondent, item, choice])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_key<R: Read>(reader: R) -> Result<SurveyKey, IngestError> {
    let mut items = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line, record) in records(reader, &KEY_HEADER)? {
        let polarity = Polarity::from_str(&record[1]).map_err(|message| IngestError::Malformed { line, message })?;
        if !seen.insert(record[0].to_string()) {
            return Err(IngestError::Malformed {
                line,
                message: format!("duplicate item `{}`", &record[0]),
            });
        }
        items.push((record[0].to_string(), polarity));
    }
    if items.is_empty() {
        return Err(IngestError::Empty);
    }
    SurveyKey::new(items).map_err(|e| IngestError::Malformed {
        line: 0,
        message: e.to_string(),
    })
}

/// Loads an `item_id,polarity` survey key.
pub fn load_key(path: &Path) -> Result<SurveyKey, IngestError> {
    read_key(open(path)?)
}

/// Samples of one metric, in file order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementSeries {
    pub metric: String,
    pub unit: String,
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSummary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Nearest-rank 95th percentile.
    pub p95: f64,
}

pub fn read_measurements<R: Read>(reader: R) -> Result<Vec<MeasurementSeries>, IngestError> {
    let mut series: IndexMap<String, MeasurementSeries> = IndexMap::new();
    for (line, record) in records(reader, &MEASUREMENTS_HEADER)? {
        let (metric, unit, raw) = (&record[0], &record[1], &record[2]);
        if metric.is_empty() {
            return Err(IngestError::Malformed {
                line,
                message: "metric must not be empty".into(),
            });
        }
        let value: f64 =
            raw.trim()
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| IngestError::NonNumeric {
                    line,
                    value: raw.to_string(),
                })?;
        let entry = series.entry(metric.to_string()).or_insert_with(|| MeasurementSeries {
            metric: metric.to_string(),
            unit: unit.to_string(),
            samples: Vec::new(),
        });
        if entry.unit != unit {
            return Err(IngestError::Malformed {
                line,
                message: format!("metric `{metric}` switches unit from `{}` to `{unit}`", entry.unit),
            });
        }
        entry.samples.push(value);
    }
    if series.is_empty() {
        return Err(IngestError::Empty);
    }
    Ok(series.into_values().collect())
}

/// Loads `metric,unit,value` rows grouped by metric in first-seen order.
pub fn load_measurements(path: &Path) -> Result<Vec<MeasurementSeries>, IngestError> {
    read_measurements(open(path)?)
}

/// Index of the nearest-rank 95th percentile in an ascending sort of `n`
/// samples: `ceil(0.95 n) - 1`, computed in integers.
pub fn p95_index(n: usize) -> usize {
    ((95 * n).div_ceil(100)).max(1) - 1
}

/// Summary statistics. Samples are summed in sorted order so the result is
/// independent of sample order.
///
/// # Panics
///
/// Panics on an empty series; loaded series always have a sample.
pub fn summarize(series: &MeasurementSeries) -> SeriesSummary {
    assert!(!series.samples.is_empty(), "series `{}` has no samples", series.metric);
    let mut sorted = series.samples.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let (min, max) = (sorted[0], sorted[n - 1]);
    let mean = (sorted.iter().sum::<f64>() / n as f64).clamp(min, max);
    SeriesSummary {
        count: n,
        min,
        max,
        mean,
        p95: sorted[p95_index(n)],
    }
}

/// Statistic a threshold or fuzzy input is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregator {
    Max,
    Min,
    Mean,
    P95,
}

impl Aggregator {
    pub const ALL: [Aggregator; 4] = [Aggregator::Max, Aggregator::Min, Aggregator::Mean, Aggregator::P95];

    pub fn apply(self, summary: &SeriesSummary) -> f64 {
        match self {
            Aggregator::Max => summary.max,
            Aggregator::Min => summary.min,
            Aggregator::Mean => summary.mean,
            Aggregator::P95 => summary.p95,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Aggregator::Max => "max",
            Aggregator::Min => "min",
            Aggregator::Mean => "mean",
            Aggregator::P95 => "p95",
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Aggregator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Aggregator::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown aggregator `{s}` (expected max, min, mean or p95)"))
    }
}
