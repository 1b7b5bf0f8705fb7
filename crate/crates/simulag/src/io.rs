//! Trace ingestion and serialization.
//!
//! The canonical trace format is line-delimited JSON, one sentence per line,
//! with the fields of [`RawTraceRecord`]. A best-effort adapter also accepts
//! the instance-log schema used by common simultaneous-evaluation toolkits
//! (`delays`, `prediction`, `reference`, `source_length`, all durations in
//! milliseconds; unknown keys are ignored).
//!
//! Parsing never aborts on a bad record: each line is either accepted
//! (possibly after a small repair), or rejected with a reason in the
//! [`IngestionReport`]. Only an unreadable stream is a fatal error.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trace::UtteranceTrace;

/// Delays may overshoot the ends of `[0, source_duration]` by at most this
/// much (serialization noise) and still be clamped back in; the same bound
/// applies to small monotonicity inversions. Larger violations reject the
/// record.
pub const REPAIR_TOLERANCE_MS: f64 = 0.5;

/// Fatal ingestion failures. Record-level problems are never fatal; they land
/// in the [`IngestionReport`] instead.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("failed to read trace stream: {0}")]
    Io(#[from] io::Error),
}

/// Input schema selector for [`parse_traces`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    /// One [`RawTraceRecord`] JSON object per line.
    CanonicalJsonl,
    /// One toolkit instance-log JSON object per line.
    SimulevalLog,
}

/// One line of the canonical JSONL schema.
///
/// Exactly one of `prediction` / `prediction_tokens` must be present, or both
/// consistently (the whitespace-split prediction must equal the token list).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTraceRecord {
    pub index: u64,
    pub source_duration_ms: f64,
    pub delays_ms: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prediction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prediction_tokens: Option<Vec<String>>,
    pub reference: String,
}

/// Instance-log line of the simultaneous-evaluation toolkits.
#[derive(Debug, Clone, Deserialize)]
struct SimulevalRecord {
    delays: Vec<f64>,
    prediction: String,
    reference: String,
    source_length: f64,
}

/// A record that failed validation, with the 1-based line number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedRecord {
    pub line_number: usize,
    pub reason: String,
}

/// What happened to every record of a parsed stream.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestionReport {
    pub accepted: usize,
    /// Accepted records that needed a within-tolerance repair (end clamping
    /// or flattening of a tiny monotonicity inversion).
    pub repaired: usize,
    pub rejected: Vec<RejectedRecord>,
}

impl IngestionReport {
    pub fn rejected_count(&self) -> usize {
        self.rejected.len()
    }

    /// Total records read; always `accepted + rejected`.
    pub fn total(&self) -> usize {
        self.accepted + self.rejected.len()
    }
}

/// Splits text into tokens on Unicode whitespace runs.
///
/// Punctuation stays attached to its word; empty or all-whitespace text
/// yields no tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_owned).collect()
}

/// Parses a trace stream, validating and normalizing every record.
///
/// Accepted traces come back in input order. Whitespace-only lines are
/// skipped without counting as records.
pub fn parse_traces<R: BufRead>(
    mut reader: R,
    format: TraceFormat,
) -> Result<(Vec<UtteranceTrace>, IngestionReport), IngestError> {
    let mut traces = Vec::new();
    let mut report = IngestionReport::default();
    let mut buf = Vec::new();
    let mut line_number = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_number += 1;
        let mut reject = |reason: String| {
            report.rejected.push(RejectedRecord {
                line_number,
                reason,
            })
        };
        // Lines are rejected individually; only the stream itself can abort.
        let Ok(line) = std::str::from_utf8(&buf) else {
            reject("invalid UTF-8".to_owned());
            continue;
        };
        let line = line.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() {
            continue;
        }
        match validate_line(line, format) {
            Ok((trace, repaired)) => {
                traces.push(trace);
                report.accepted += 1;
                if repaired {
                    report.repaired += 1;
                }
            }
            Err(reason) => reject(reason),
        }
    }
    Ok((traces, report))
}

/// Writes traces in the canonical JSONL schema, one record per line.
///
/// Hypothesis tokens are emitted as `prediction_tokens` so that re-parsing
/// reproduces the exact token sequence; records are indexed by position.
pub fn write_canonical<W: Write>(traces: &[UtteranceTrace], mut writer: W) -> io::Result<()> {
    for (index, trace) in traces.iter().enumerate() {
        let record = RawTraceRecord {
            index: index as u64,
            source_duration_ms: trace.source_duration_ms(),
            delays_ms: trace.delays_ms().to_vec(),
            prediction: None,
            prediction_tokens: Some(trace.hypothesis_tokens().to_vec()),
            reference: trace.reference_tokens().join(" "),
        };
        let json = serde_json::to_string(&record).map_err(io::Error::other)?;
        writer.write_all(json.as_bytes())?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

fn validate_line(line: &str, format: TraceFormat) -> Result<(UtteranceTrace, bool), String> {
    let record = match format {
        TraceFormat::CanonicalJsonl => serde_json::from_str::<RawTraceRecord>(line)
            .map_err(|e| format!("malformed record: {e}"))?,
        TraceFormat::SimulevalLog => {
            let log = serde_json::from_str::<SimulevalRecord>(line)
                .map_err(|e| format!("malformed record: {e}"))?;
            RawTraceRecord {
                index: 0,
                source_duration_ms: log.source_length,
                delays_ms: log.delays,
                prediction: Some(log.prediction),
                prediction_tokens: None,
                reference: log.reference,
            }
        }
    };
    validate_record(record)
}

/// Validates one raw record into a trace; the flag reports whether a
/// within-tolerance repair was applied.
pub fn validate_record(record: RawTraceRecord) -> Result<(UtteranceTrace, bool), String> {
    let source_duration = record.source_duration_ms;
    if !source_duration.is_finite() || source_duration <= 0.0 {
        return Err(format!(
            "non-positive source duration ({source_duration} ms)"
        ));
    }

    let hypothesis = match (record.prediction, record.prediction_tokens) {
        (None, None) => {
            return Err("neither prediction nor prediction_tokens present".to_owned());
        }
        (Some(text), None) => tokenize(&text),
        (None, Some(tokens)) => tokens,
        (Some(text), Some(tokens)) => {
            if tokenize(&text) != tokens {
                return Err("prediction and prediction_tokens disagree".to_owned());
            }
            tokens
        }
    };

    if record.delays_ms.len() != hypothesis.len() {
        return Err(format!(
            "token/delay count mismatch: {} delays for {} tokens",
            record.delays_ms.len(),
            hypothesis.len()
        ));
    }

    let mut delays = record.delays_ms;
    let mut repaired = false;
    for (index, delay) in delays.iter_mut().enumerate() {
        if !delay.is_finite() {
            return Err(format!("delay at position {index} is not finite"));
        }
        if *delay < 0.0 {
            if *delay >= -REPAIR_TOLERANCE_MS {
                *delay = 0.0;
                repaired = true;
            } else {
                return Err(format!(
                    "delay at position {index} ({delay} ms) below 0 beyond tolerance"
                ));
            }
        } else if *delay > source_duration {
            if *delay <= source_duration + REPAIR_TOLERANCE_MS {
                *delay = source_duration;
                repaired = true;
            } else {
                return Err(format!(
                    "delay at position {index} ({delay} ms) exceeds source duration \
                     ({source_duration} ms) beyond tolerance"
                ));
            }
        }
    }
    for index in 1..delays.len() {
        if delays[index] < delays[index - 1] {
            if delays[index - 1] - delays[index] <= REPAIR_TOLERANCE_MS {
                delays[index] = delays[index - 1];
                repaired = true;
            } else {
                return Err(format!(
                    "non-monotone delays: position {index} ({} ms) precedes {} ms",
                    delays[index],
                    delays[index - 1]
                ));
            }
        }
    }

    let reference = tokenize(&record.reference);
    if reference.is_empty() {
        return Err("empty reference".to_owned());
    }

    UtteranceTrace::new(source_duration, delays, hypothesis, reference)
        .map(|trace| (trace, repaired))
        .map_err(|e| e.to_string())
}
