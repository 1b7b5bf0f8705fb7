//! Corpus aggregation and report serialization.
//!
//! Corpus AL and LAAL are unweighted arithmetic means over the sentences with
//! defined metrics. AWLD (average word length difference) runs over every
//! parsed sentence, skipped or not, since it needs only token counts; its
//! sign encodes the generation tendency (positive means the system emits more
//! tokens than the reference on average).
//!
//! Aggregation is order-independent: sums are taken in a canonical value
//! order, so any permutation of the same sentences yields bit-identical
//! corpus values. Per-sentence rows keep input order.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::metrics::{SentenceLatency, SentenceOutcome};
use crate::trace::UtteranceTrace;

/// Default latency regime thresholds in milliseconds. These are configuration
/// defaults, not published values.
pub const DEFAULT_REGIME_THRESHOLDS_MS: [f64; 3] = [1000.0, 2000.0, 4000.0];

const NAMED_REGIME_LABELS: [&str; 4] = ["low", "medium", "high", "ultra-high"];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("no defined sentence metrics: all {0} sentences skipped")]
    AllUndefined(usize),
    #[error("regime thresholds must be finite and strictly increasing")]
    InvalidThresholds,
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for ReportError {
    fn from(err: csv::Error) -> Self {
        match err.into_kind() {
            csv::ErrorKind::Io(e) => ReportError::Io(e),
            other => ReportError::Io(std::io::Error::other(format!("csv: {other:?}"))),
        }
    }
}

/// A sentence whose metrics were skipped, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedSentence {
    pub index: usize,
    pub reason: String,
}

/// One per-sentence report row, in corpus order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SentenceRow {
    Defined {
        index: usize,
        metrics: SentenceLatency,
    },
    Skipped {
        index: usize,
        hyp_length: usize,
        ref_length: usize,
        reason: String,
    },
}

impl SentenceRow {
    pub fn index(&self) -> usize {
        match self {
            SentenceRow::Defined { index, .. } | SentenceRow::Skipped { index, .. } => *index,
        }
    }

    pub fn metrics(&self) -> Option<&SentenceLatency> {
        match self {
            SentenceRow::Defined { metrics, .. } => Some(metrics),
            SentenceRow::Skipped { .. } => None,
        }
    }
}

/// Aggregated corpus-level results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub corpus_al_ms: f64,
    pub corpus_laal_ms: f64,
    /// Mean hypothesis-minus-reference length over all parsed sentences,
    /// in words.
    pub awld: f64,
    pub sentence_count: usize,
    pub skipped_count: usize,
    pub skipped: Vec<SkippedSentence>,
    pub regime_thresholds_ms: Vec<f64>,
    /// Sentences per latency regime, binned by LAAL.
    pub regime_counts: BTreeMap<String, usize>,
    /// How corpus values were aggregated.
    pub aggregation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_sentence: Option<Vec<SentenceRow>>,
}

/// Sums in a canonical order so aggregation is permutation-invariant.
fn canonical_mean(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().sum::<f64>() / sorted.len() as f64
}

fn regime_labels(thresholds: &[f64]) -> Vec<String> {
    if thresholds.is_empty() {
        return vec!["all".to_owned()];
    }
    if thresholds.len() == 3 {
        return NAMED_REGIME_LABELS.iter().map(|s| s.to_string()).collect();
    }
    let mut labels = Vec::with_capacity(thresholds.len() + 1);
    for i in 0..=thresholds.len() {
        labels.push(if i == 0 {
            format!("<{}", thresholds[0])
        } else if i == thresholds.len() {
            format!(">={}", thresholds[i - 1])
        } else {
            format!("[{},{})", thresholds[i - 1], thresholds[i])
        });
    }
    labels
}

fn regime_index(value_ms: f64, thresholds: &[f64]) -> usize {
    thresholds
        .iter()
        .position(|&t| value_ms < t)
        .unwrap_or(thresholds.len())
}

/// Average word length difference over a parsed corpus.
///
/// Positive values mean over-generation, negative mean under-generation.
pub fn awld(traces: &[UtteranceTrace]) -> Result<f64, ReportError> {
    if traces.is_empty() {
        return Err(ReportError::EmptyCorpus);
    }
    let sum: i64 = traces.iter().map(UtteranceTrace::length_diff).sum();
    Ok(sum as f64 / traces.len() as f64)
}

/// Aggregates per-sentence outcomes into a corpus report.
///
/// Thresholds must be strictly increasing (an empty list puts everything in
/// one regime). At least one sentence must have defined metrics. The report
/// always carries per-sentence rows; drop them with `per_sentence: None` when
/// only the summary is wanted.
pub fn aggregate(
    outcomes: &[SentenceOutcome],
    thresholds: &[f64],
) -> Result<CorpusReport, ReportError> {
    if outcomes.is_empty() {
        return Err(ReportError::EmptyCorpus);
    }
    if thresholds.iter().any(|t| !t.is_finite()) || thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ReportError::InvalidThresholds);
    }

    let labels = regime_labels(thresholds);
    let mut regime_counts: BTreeMap<String, usize> =
        labels.iter().map(|l| (l.clone(), 0)).collect();

    let mut al_values = Vec::new();
    let mut laal_values = Vec::new();
    let mut length_diff_sum: i64 = 0;
    let mut skipped = Vec::new();
    let mut rows = Vec::with_capacity(outcomes.len());

    for (index, outcome) in outcomes.iter().enumerate() {
        length_diff_sum += outcome.length_diff();
        match outcome {
            SentenceOutcome::Defined(metrics) => {
                al_values.push(metrics.al_ms);
                laal_values.push(metrics.laal_ms);
                let bin = regime_index(metrics.laal_ms, thresholds);
                *regime_counts.get_mut(&labels[bin]).expect("label exists") += 1;
                rows.push(SentenceRow::Defined {
                    index,
                    metrics: metrics.clone(),
                });
            }
            SentenceOutcome::Undefined {
                hyp_length,
                ref_length,
                reason,
            } => {
                skipped.push(SkippedSentence {
                    index,
                    reason: reason.clone(),
                });
                rows.push(SentenceRow::Skipped {
                    index,
                    hyp_length: *hyp_length,
                    ref_length: *ref_length,
                    reason: reason.clone(),
                });
            }
        }
    }

    if al_values.is_empty() {
        return Err(ReportError::AllUndefined(outcomes.len()));
    }

    Ok(CorpusReport {
        corpus_al_ms: canonical_mean(&al_values),
        corpus_laal_ms: canonical_mean(&laal_values),
        awld: length_diff_sum as f64 / outcomes.len() as f64,
        sentence_count: outcomes.len(),
        skipped_count: skipped.len(),
        skipped,
        regime_thresholds_ms: thresholds.to_vec(),
        regime_counts,
        aggregation: "unweighted-mean".to_owned(),
        per_sentence: Some(rows),
    })
}

/// Per-metric deltas between two corpus reports, plus the ranking-flip
/// detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    /// `b - a` for each metric.
    pub delta_al_ms: f64,
    pub delta_laal_ms: f64,
    pub delta_awld: f64,
    /// Whether per-sentence rows were present in both reports with matching
    /// counts, enabling the flags below.
    pub per_sentence_compared: bool,
    /// Sentences whose AL ordering and LAAL ordering between the two systems
    /// disagree: evaluating on AL alone would rank the systems differently
    /// than LAAL does on these sentences.
    pub ranking_disagreements: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Compares two corpus reports (deltas are `b - a`).
pub fn compare(a: &CorpusReport, b: &CorpusReport) -> ComparisonRecord {
    let mut record = ComparisonRecord {
        delta_al_ms: b.corpus_al_ms - a.corpus_al_ms,
        delta_laal_ms: b.corpus_laal_ms - a.corpus_laal_ms,
        delta_awld: b.awld - a.awld,
        per_sentence_compared: false,
        ranking_disagreements: Vec::new(),
        warning: None,
    };
    match (&a.per_sentence, &b.per_sentence) {
        (Some(rows_a), Some(rows_b)) if rows_a.len() == rows_b.len() => {
            record.per_sentence_compared = true;
            for (row_a, row_b) in rows_a.iter().zip(rows_b) {
                let (Some(ma), Some(mb)) = (row_a.metrics(), row_b.metrics()) else {
                    continue;
                };
                if sign(mb.al_ms - ma.al_ms) != sign(mb.laal_ms - ma.laal_ms) {
                    record.ranking_disagreements.push(row_a.index());
                }
            }
        }
        (Some(rows_a), Some(rows_b)) => {
            record.warning = Some(format!(
                "per-sentence flags suppressed: sentence counts differ ({} vs {})",
                rows_a.len(),
                rows_b.len()
            ));
        }
        _ => {
            record.warning =
                Some("per-sentence flags suppressed: rows missing in at least one report".into());
        }
    }
    record
}

/// Output format for [`write_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Loss-free JSON (full precision, deterministic key order).
    Json,
    /// One row per sentence plus a summary row.
    Csv,
    /// Human-readable table, rounded to whole milliseconds.
    PrettyTable,
}

/// Which metrics to include in serialized reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricSelection {
    pub al: bool,
    pub laal: bool,
    pub awld: bool,
}

impl MetricSelection {
    pub fn all() -> Self {
        Self {
            al: true,
            laal: true,
            awld: true,
        }
    }

    fn is_all(&self) -> bool {
        self.al && self.laal && self.awld
    }
}

impl Default for MetricSelection {
    fn default() -> Self {
        Self::all()
    }
}

/// Serializes a report.
///
/// JSON keeps full precision and a deterministic (sorted) key order, so
/// parse/re-serialize cycles are byte-identical. CSV writes one row per
/// sentence plus a summary row. The pretty table rounds milliseconds to
/// integers for presentation.
pub fn write_report<W: Write + ?Sized>(
    report: &CorpusReport,
    format: ReportFormat,
    selection: MetricSelection,
    writer: &mut W,
) -> Result<(), ReportError> {
    match format {
        ReportFormat::Json => write_json(report, selection, writer),
        ReportFormat::Csv => write_csv(report, selection, writer),
        ReportFormat::PrettyTable => write_table(report, selection, writer),
    }
}

fn write_json<W: Write + ?Sized>(
    report: &CorpusReport,
    selection: MetricSelection,
    writer: &mut W,
) -> Result<(), ReportError> {
    let mut value = serde_json::to_value(report).expect("report serializes");
    prune_unselected(&mut value, selection);
    serde_json::to_writer_pretty(&mut *writer, &value).map_err(std::io::Error::other)?;
    writer.write_all(b"\n")?;
    Ok(())
}

fn prune_unselected(value: &mut Value, selection: MetricSelection) {
    if selection.is_all() {
        return;
    }
    let Value::Object(map) = value else { return };
    if !selection.al {
        map.remove("corpus_al_ms");
    }
    if !selection.laal {
        map.remove("corpus_laal_ms");
    }
    if !selection.awld {
        map.remove("awld");
    }
    if let Some(Value::Array(rows)) = map.get_mut("per_sentence") {
        for row in rows {
            let Some(Value::Object(metrics)) = row.get_mut("metrics") else {
                continue;
            };
            if !selection.al {
                metrics.remove("al_ms");
                metrics.remove("lagging_series_al_ms");
            }
            if !selection.laal {
                metrics.remove("laal_ms");
                metrics.remove("lagging_series_laal_ms");
            }
        }
    }
}

const CSV_HEADER: [&str; 9] = [
    "index",
    "status",
    "al_ms",
    "laal_ms",
    "cutoff_index",
    "hyp_length",
    "ref_length",
    "length_diff",
    "skip_reason",
];

fn write_csv<W: Write + ?Sized>(
    report: &CorpusReport,
    selection: MetricSelection,
    writer: &mut W,
) -> Result<(), ReportError> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(CSV_HEADER)?;
    let fmt_f64 = |v: f64| v.to_string();
    if let Some(rows) = &report.per_sentence {
        for row in rows {
            match row {
                SentenceRow::Defined { index, metrics } => {
                    csv.write_record([
                        index.to_string(),
                        "defined".to_owned(),
                        if selection.al {
                            fmt_f64(metrics.al_ms)
                        } else {
                            String::new()
                        },
                        if selection.laal {
                            fmt_f64(metrics.laal_ms)
                        } else {
                            String::new()
                        },
                        metrics.cutoff_index.to_string(),
                        metrics.hyp_length.to_string(),
                        metrics.ref_length.to_string(),
                        metrics.length_diff.to_string(),
                        String::new(),
                    ])?;
                }
                SentenceRow::Skipped {
                    index,
                    hyp_length,
                    ref_length,
                    reason,
                } => {
                    csv.write_record([
                        index.to_string(),
                        "skipped".to_owned(),
                        String::new(),
                        String::new(),
                        String::new(),
                        hyp_length.to_string(),
                        ref_length.to_string(),
                        (*hyp_length as i64 - *ref_length as i64).to_string(),
                        reason.clone(),
                    ])?;
                }
            }
        }
    }
    csv.write_record([
        "summary".to_owned(),
        "corpus".to_owned(),
        if selection.al {
            fmt_f64(report.corpus_al_ms)
        } else {
            String::new()
        },
        if selection.laal {
            fmt_f64(report.corpus_laal_ms)
        } else {
            String::new()
        },
        String::new(),
        String::new(),
        String::new(),
        if selection.awld {
            fmt_f64(report.awld)
        } else {
            String::new()
        },
        String::new(),
    ])?;
    csv.flush()?;
    Ok(())
}

fn write_table<W: Write + ?Sized>(
    report: &CorpusReport,
    selection: MetricSelection,
    writer: &mut W,
) -> Result<(), ReportError> {
    writeln!(writer, "corpus latency report")?;
    writeln!(writer, "  sentences    {}", report.sentence_count)?;
    writeln!(writer, "  skipped      {}", report.skipped_count)?;
    if selection.al {
        writeln!(writer, "  AL           {:.0} ms", report.corpus_al_ms)?;
    }
    if selection.laal {
        writeln!(writer, "  LAAL         {:.0} ms", report.corpus_laal_ms)?;
    }
    if selection.awld {
        writeln!(writer, "  AWLD         {:+.2} words", report.awld)?;
    }
    let regimes = report
        .regime_counts
        .iter()
        .map(|(label, count)| format!("{label}={count}"))
        .collect::<Vec<_>>()
        .join(" ");
    writeln!(writer, "  regimes      {regimes}")?;
    if let Some(rows) = &report.per_sentence {
        writeln!(writer)?;
        writeln!(
            writer,
            "{:>6}  {:>8}  {:>8}  {:>6}  {:>5}  {:>5}  {:>5}  reason",
            "index", "AL", "LAAL", "cutoff", "|Y|", "|Y*|", "diff"
        )?;
        for row in rows {
            match row {
                SentenceRow::Defined { index, metrics } => {
                    writeln!(
                        writer,
                        "{index:>6}  {:>8}  {:>8}  {:>6}  {:>5}  {:>5}  {:>5}  ",
                        if selection.al {
                            format!("{:.0}", metrics.al_ms)
                        } else {
                            "-".to_owned()
                        },
                        if selection.laal {
                            format!("{:.0}", metrics.laal_ms)
                        } else {
                            "-".to_owned()
                        },
                        metrics.cutoff_index,
                        metrics.hyp_length,
                        metrics.ref_length,
                        metrics.length_diff,
                    )?;
                }
                SentenceRow::Skipped {
                    index,
                    hyp_length,
                    ref_length,
                    reason,
                } => {
                    writeln!(
                        writer,
                        "{index:>6}  {:>8}  {:>8}  {:>6}  {hyp_length:>5}  {ref_length:>5}  {:>5}  {reason}",
                        "-",
                        "-",
                        "-",
                        *hyp_length as i64 - *ref_length as i64,
                    )?;
                }
            }
        }
    }
    Ok(())
}
