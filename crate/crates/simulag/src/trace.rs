//! Validated decoding traces.
//!
//! An [`UtteranceTrace`] is one sentence's decoding record: how much source
//! audio had been consumed when each hypothesis token was emitted, plus the
//! hypothesis and reference token streams. All metric computation starts from
//! a validated trace, so the constructor enforces the invariants once and the
//! metric code never has to re-check them.

use thiserror::Error;

/// Validation failures raised when admitting a trace.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("source duration must be positive (got {0} ms)")]
    NonPositiveDuration(f64),
    #[error("delay at position {index} is not finite")]
    NonFiniteDelay { index: usize },
    #[error("non-monotone delays: delay[{index}] = {delay} ms precedes {previous} ms")]
    NonMonotoneDelays {
        index: usize,
        delay: f64,
        previous: f64,
    },
    #[error("delay[{index}] = {delay} ms outside [0, {source_duration} ms]")]
    DelayOutOfRange {
        index: usize,
        delay: f64,
        source_duration: f64,
    },
    #[error("{delays} delays for {tokens} hypothesis tokens")]
    LengthMismatch { delays: usize, tokens: usize },
    #[error("reference is empty")]
    EmptyReference,
}

/// One sentence's decoding record.
///
/// `delays_ms[i]` is the amount of source audio (in milliseconds) that had
/// been consumed when hypothesis token `i` was emitted. Delays are
/// non-decreasing and bounded by the total source duration. An empty
/// hypothesis (no tokens, no delays) is a valid trace; sentence metrics on it
/// are reported as undefined rather than invented.
#[derive(Debug, Clone, PartialEq)]
pub struct UtteranceTrace {
    source_duration_ms: f64,
    delays_ms: Vec<f64>,
    hypothesis_tokens: Vec<String>,
    reference_tokens: Vec<String>,
}

impl UtteranceTrace {
    /// Validates and admits a trace.
    pub fn new(
        source_duration_ms: f64,
        delays_ms: Vec<f64>,
        hypothesis_tokens: Vec<String>,
        reference_tokens: Vec<String>,
    ) -> Result<Self, TraceError> {
        if !source_duration_ms.is_finite() || source_duration_ms <= 0.0 {
            return Err(TraceError::NonPositiveDuration(source_duration_ms));
        }
        if delays_ms.len() != hypothesis_tokens.len() {
            return Err(TraceError::LengthMismatch {
                delays: delays_ms.len(),
                tokens: hypothesis_tokens.len(),
            });
        }
        if reference_tokens.is_empty() {
            return Err(TraceError::EmptyReference);
        }
        let mut previous = 0.0_f64;
        for (index, &delay) in delays_ms.iter().enumerate() {
            if !delay.is_finite() {
                return Err(TraceError::NonFiniteDelay { index });
            }
            if delay < 0.0 || delay > source_duration_ms {
                return Err(TraceError::DelayOutOfRange {
                    index,
                    delay,
                    source_duration: source_duration_ms,
                });
            }
            if index > 0 && delay < previous {
                return Err(TraceError::NonMonotoneDelays {
                    index,
                    delay,
                    previous,
                });
            }
            previous = delay;
        }
        Ok(Self {
            source_duration_ms,
            delays_ms,
            hypothesis_tokens,
            reference_tokens,
        })
    }

    /// Total utterance length in milliseconds.
    pub fn source_duration_ms(&self) -> f64 {
        self.source_duration_ms
    }

    /// Per-token emission delays, one per hypothesis token.
    pub fn delays_ms(&self) -> &[f64] {
        &self.delays_ms
    }

    pub fn hypothesis_tokens(&self) -> &[String] {
        &self.hypothesis_tokens
    }

    pub fn reference_tokens(&self) -> &[String] {
        &self.reference_tokens
    }

    /// Hypothesis length in tokens.
    pub fn hyp_len(&self) -> usize {
        self.hypothesis_tokens.len()
    }

    /// Reference length in tokens (always at least 1).
    pub fn ref_len(&self) -> usize {
        self.reference_tokens.len()
    }

    /// Hypothesis minus reference length, the per-sentence AWLD contribution.
    pub fn length_diff(&self) -> i64 {
        self.hyp_len() as i64 - self.ref_len() as i64
    }
}
