use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use simulag::{MetricSelection, ReportFormat, TraceFormat};

use crate::error::AppError;

#[derive(Parser)]
#[command(
    name = "simulag",
    version,
    about = "Latency evaluation for simultaneous translation traces (AL, LAAL, AWLD)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Score a trace file and write a corpus report
    Evaluate(EvaluateArgs),
    /// Print the per-token lagging breakdown for one sentence
    Explain(ExplainArgs),
    /// Generate a synthetic wait-k trace corpus
    Generate(GenerateArgs),
    /// Compare the corpus reports of two trace files (deltas are B - A)
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatArg {
    /// Canonical JSONL records
    Canonical,
    /// Instance logs of simultaneous-evaluation toolkits
    Simuleval,
}

impl From<FormatArg> for TraceFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Canonical => TraceFormat::CanonicalJsonl,
            FormatArg::Simuleval => TraceFormat::SimulevalLog,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormatArg {
    Json,
    Csv,
    Table,
}

impl From<OutputFormatArg> for ReportFormat {
    fn from(value: OutputFormatArg) -> Self {
        match value {
            OutputFormatArg::Json => ReportFormat::Json,
            OutputFormatArg::Csv => ReportFormat::Csv,
            OutputFormatArg::Table => ReportFormat::PrettyTable,
        }
    }
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Input trace file ("-" for stdin)
    pub input: Option<PathBuf>,
    /// Input format [default: canonical]
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Comma-separated subset of {al, laal, awld} [default: all]
    #[arg(long)]
    pub metrics: Option<String>,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Report format [default: table]
    #[arg(long, value_enum)]
    pub output_format: Option<OutputFormatArg>,
    /// Include per-sentence rows in the report
    #[arg(long)]
    pub per_sentence: bool,
    /// Comma-separated regime thresholds in ms, strictly increasing
    /// [default: 1000,2000,4000]
    #[arg(long)]
    pub thresholds: Option<String>,
    /// JSON config file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct ExplainArgs {
    /// Input trace file ("-" for stdin)
    pub input: Option<PathBuf>,
    /// 0-based sentence index among the accepted traces
    #[arg(long)]
    pub index: Option<usize>,
    /// Input format [default: canonical]
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// JSON config file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Output JSONL path; metadata is written to <output>.meta.json
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Number of sentences
    #[arg(long)]
    pub num: Option<usize>,
    /// Wait-k lag in source words
    #[arg(long)]
    pub k: Option<usize>,
    /// Source word count: fixed ("8") or inclusive range ("8..16")
    #[arg(long)]
    pub src_words: Option<String>,
    /// Source word duration in ms: fixed ("500") or range ("150..450")
    #[arg(long)]
    pub word_ms: Option<String>,
    /// Hypothesis-minus-source length offset: fixed or range ("-2..3")
    /// [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub target_offset: Option<String>,
    /// Probability of duplicating each token emitted before the source ends
    /// [default: 0]
    #[arg(long)]
    pub overgen_prob: Option<f64>,
    /// RNG seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON config file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct CompareArgs {
    /// Baseline trace file (A)
    pub input_a: Option<PathBuf>,
    /// Contrast trace file (B)
    pub input_b: Option<PathBuf>,
    /// Input format for both files [default: canonical]
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Write the comparison to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Comparison format [default: json]
    #[arg(long, value_enum)]
    pub output_format: Option<OutputFormatArg>,
    /// JSON config file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn parse_metrics(spec: &str) -> Result<MetricSelection, AppError> {
    let mut selection = MetricSelection {
        al: false,
        laal: false,
        awld: false,
    };
    for part in spec.split(',') {
        match part.trim() {
            "al" => selection.al = true,
            "laal" => selection.laal = true,
            "awld" => selection.awld = true,
            other => {
                return Err(AppError::usage(format!(
                    "unknown metric '{other}' (expected al, laal, awld)"
                )))
            }
        }
    }
    if !(selection.al || selection.laal || selection.awld) {
        return Err(AppError::usage("empty metric selection"));
    }
    Ok(selection)
}

pub fn parse_thresholds(spec: &str) -> Result<Vec<f64>, AppError> {
    let thresholds: Vec<f64> = spec
        .split(',')
        .map(|part| {
            let value = part
                .trim()
                .parse::<f64>()
                .map_err(|_| AppError::usage(format!("invalid threshold '{}'", part.trim())))?;
            if !value.is_finite() {
                return Err(AppError::usage(format!("non-finite threshold '{value}'")));
            }
            Ok(value)
        })
        .collect::<Result<_, _>>()?;
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AppError::usage(
            "thresholds must be strictly increasing".to_owned(),
        ));
    }
    Ok(thresholds)
}

fn split_range(spec: &str) -> (String, String) {
    match spec.split_once("..") {
        Some((lo, hi)) => (lo.trim().to_owned(), hi.trim().to_owned()),
        None => (spec.trim().to_owned(), spec.trim().to_owned()),
    }
}

pub fn parse_usize_range(spec: &str) -> Result<(usize, usize), AppError> {
    let (lo, hi) = split_range(spec);
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| AppError::usage(format!("invalid count '{s}' in range '{spec}'")))
    };
    Ok((parse(&lo)?, parse(&hi)?))
}

pub fn parse_i64_range(spec: &str) -> Result<(i64, i64), AppError> {
    let (lo, hi) = split_range(spec);
    let parse = |s: &str| {
        s.parse::<i64>()
            .map_err(|_| AppError::usage(format!("invalid integer '{s}' in range '{spec}'")))
    };
    Ok((parse(&lo)?, parse(&hi)?))
}

pub fn parse_f64_range(spec: &str) -> Result<(f64, f64), AppError> {
    let (lo, hi) = split_range(spec);
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| AppError::usage(format!("invalid number '{s}' in range '{spec}'")))
    };
    Ok((parse(&lo)?, parse(&hi)?))
}
