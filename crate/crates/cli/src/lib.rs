//! The `nfrgauge` command line.
//!
//! Results go to stdout, diagnostics and usage to stderr. The exit code
//! depends only on the [`Status`] of the run.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nfrgauge_core::dsl::{self, CompiledSpec, Diagnostic};
use nfrgauge_core::evaluator::{self, table, EvalError, EvalOptions, Verdict};
use nfrgauge_core::ingest::{self, Aggregator};
use nfrgauge_core::likert::{self, Attitude, LikertScale, DEFAULT_BAND};

/// Outcome category of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Ran fine, but something failed or is unsatisfied.
    Unsatisfied,
    SpecError,
    DataError,
    Usage,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Unsatisfied => 1,
            Status::SpecError => 2,
            Status::DataError => 3,
            Status::Usage => 64,
        }
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Satisfied => Status::Success,
            Verdict::Unsatisfied => Status::Unsatisfied,
            Verdict::DataError => Status::DataError,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "nfrgauge", version, about = "Check and score non-functional requirements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct FormatArg {
    /// Output format.
    #[arg(long, value_enum, env = "NFRGAUGE_FORMAT", default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a spec; diagnostics go to stderr.
    Validate { spec: PathBuf },
    /// Classify every requirement as FR, M-NFR, S-NFR or Vague.
    Classify {
        spec: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Evaluate a spec against a data directory.
    Evaluate {
        spec: PathBuf,
        /// Directory with measurements.csv and survey files.
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        format: FormatArg,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Survey decision band as a fraction of the score range, in [0, 0.5].
        #[arg(long, value_parser = parse_band)]
        band: Option<f64>,
        /// Statistic applied to every M-NFR's samples.
        #[arg(long, value_parser = parse_aggregator)]
        aggregator: Option<Aggregator>,
    },
    /// Score one survey on a standard scale.
    LikertScore {
        /// Points on the standard scale: 5, 6 or 7.
        #[arg(long, value_parser = clap::value_parser!(i64).range(5..=7))]
        scale: i64,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        responses: PathBuf,
        #[arg(long, value_parser = parse_band, default_value_t = DEFAULT_BAND)]
        band: f64,
        #[command(flatten)]
        format: FormatArg,
    },
}

fn parse_band(s: &str) -> Result<f64, String> {
    let band: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=0.5).contains(&band) {
        Ok(band)
    } else {
        Err(format!("{band} is outside [0, 0.5]"))
    }
}

fn parse_aggregator(s: &str) -> Result<Aggregator, String> {
    s.parse()
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                Status::Usage.code()
            } else {
                // --help and --version.
                let _ = write!(stdout, "{text}");
                Status::Success.code()
            };
        }
    };
    let mut out = Output { stdout, stderr };
    let status = match cli.command {
        Command::Validate { spec } => validate(&spec, &mut out),
        Command::Classify { spec, format } => classify(&spec, format.format, &mut out),
        Command::Evaluate {
            spec,
            data,
            format,
            out: target,
            band,
            aggregator,
        } => evaluate(
            &spec,
            &data,
            format.format,
            target.as_deref(),
            EvalOptions { band, aggregator },
            &mut out,
        ),
        Command::LikertScore {
            scale,
            key,
            responses,
            band,
            format,
        } => likert_score(scale, &key, &responses, band, format.format, &mut out),
    };
    status.code()
}

struct Output<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Output<'_> {
    fn result(&mut self, text: &str) {
        let _ = self.stdout.write_all(text.as_bytes());
    }

    fn error(&mut self, message: impl std::fmt::Display) {
        let _ = writeln!(self.stderr, "{message}");
    }

    fn diagnostics(&mut self, path: &Path, diags: &[Diagnostic]) {
        for d in diags {
            let _ = writeln!(self.stderr, "{}: {d}", path.display());
        }
    }
}

/// Reads and checks a spec, reporting problems to stderr.
fn load(path: &Path, out: &mut Output) -> Result<CompiledSpec, Status> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        out.error(format_args!("error: {}: {e}", path.display()));
        Status::DataError
    })?;
    match dsl::check(&text) {
        Ok((_, compiled, warnings)) => {
            out.diagnostics(path, &warnings);
            Ok(compiled)
        }
        Err(diags) => {
            out.diagnostics(path, &diags);
            Err(Status::SpecError)
        }
    }
}

fn validate(path: &Path, out: &mut Output) -> Status {
    match load(path, out) {
        Ok(spec) => {
            out.result(&format!(
                "{}: ok, {} requirements, {} root goals\n",
                path.display(),
                spec.requirements.len(),
                spec.forest.roots().count()
            ));
            Status::Success
        }
        Err(status) => status,
    }
}

fn classify(path: &Path, format: Format, out: &mut Output) -> Status {
    let spec = match load(path, out) {
        Ok(spec) => spec,
        Err(status) => return status,
    };
    let rows: Vec<(String, evaluator::Classification)> = spec
        .requirements
        .iter()
        .map(|r| (r.id.clone(), evaluator::classify(r)))
        .collect();
    match format {
        Format::Json => {
            let list: Vec<serde_json::Value> = rows
                .iter()
                .map(|(id, c)| serde_json::json!({ "id": id, "kind": c.kind, "rationale": c.rationale }))
                .collect();
            out.result(&json(&serde_json::Value::Array(list)));
        }
        Format::Text => {
            let mut cells = vec![vec!["requirement".to_string(), "kind".into(), "rationale".into()]];
            cells.extend(
                rows.iter()
                    .map(|(id, c)| vec![id.clone(), c.kind.to_string(), c.rationale.clone()]),
            );
            let mut text = String::new();
            table(&mut text, &cells);
            out.result(&text);
        }
    }
    Status::Success
}

fn evaluate(
    path: &Path,
    data: &Path,
    format: Format,
    target: Option<&Path>,
    options: EvalOptions,
    out: &mut Output,
) -> Status {
    let spec = match load(path, out) {
        Ok(spec) => spec,
        Err(status) => return status,
    };
    let report = match evaluator::evaluate_project(&spec, data, &options) {
        Ok(report) => report,
        Err(e @ EvalError::InvalidBand(_)) => {
            out.error(format_args!("error: {e}"));
            return Status::Usage;
        }
        Err(e) => {
            out.error(format_args!("error: {e}"));
            return Status::DataError;
        }
    };
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match target {
        Some(file) => {
            if let Err(e) = std::fs::write(file, &text) {
                out.error(format_args!("error: {}: {e}", file.display()));
                return Status::DataError;
            }
        }
        None => out.result(&text),
    }
    report.verdict.into()
}

fn likert_score(
    points: i64,
    key_path: &Path,
    responses_path: &Path,
    band: f64,
    format: Format,
    out: &mut Output,
) -> Status {
    let scale = LikertScale::standard(points).expect("points are range checked by clap");
    let loaded = ingest::load_key(key_path)
        .map_err(|e| format!("{}: {e}", key_path.display()))
        .and_then(|key| {
            let responses = ingest::load_responses(responses_path, &scale)
                .map_err(|e| format!("{}: {e}", responses_path.display()))?;
            Ok((key, responses))
        });
    let (key, responses) = match loaded {
        Ok(pair) => pair,
        Err(message) => {
            out.error(format_args!("error: {message}"));
            return Status::DataError;
        }
    };
    let scored = likert::score_responses(&scale, &key, &responses).and_then(|scores| {
        let stats = likert::aggregate_scores(&scores)?;
        let decision = likert::attitude_decision(&stats, key.len(), &scale, band)?;
        Ok((scores, stats, decision))
    });
    let (scores, stats, decision) = match scored {
        Ok(result) => result,
        Err(e) => {
            out.error(format_args!("error: {e}"));
            return Status::DataError;
        }
    };
    match format {
        Format::Json => out.result(&json(&serde_json::json!({
            "scale": scale.name(),
            "items": key.len(),
            "scores": scores,
            "stats": stats,
            "decision": decision,
        }))),
        Format::Text => {
            let mut text = String::new();
            let _ = writeln!(text, "scale: {} ({} items)", scale.name(), key.len());
            let _ = writeln!(text, "respondents: {}", stats.count);
            let _ = writeln!(text, "mean: {:.4}", stats.mean);
            let _ = writeln!(text, "median: {}", stats.median);
            let _ = writeln!(text, "observed: {}..{}", stats.min, stats.max);
            let _ = writeln!(text, "possible: {}..{}", stats.min_possible, stats.max_possible);
            let _ = writeln!(
                text,
                "decision: {} (neutral {}, band {:.4}, margin {:+.4})",
                decision.attitude, decision.neutral, decision.band, decision.margin
            );
            out.result(&text);
        }
    }
    if decision.attitude == Attitude::Unfavorable {
        Status::Unsatisfied
    } else {
        Status::Success
    }
}

fn json(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializes");
    text.push('\n');
    text
}
