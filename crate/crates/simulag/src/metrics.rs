//! Sentence-level latency metrics.
//!
//! The lagging metrics compare a system's emission delays against an oracle
//! translator that is perfectly in sync with the speaker: it emits its first
//! word at time zero and one further word every `source_duration / L`
//! milliseconds. AL sets `L` to the reference length; LAAL sets it to the
//! maximum of hypothesis and reference lengths, which removes the discount
//! AL grants to systems that emit more tokens than the reference before the
//! utterance ends. Both average the per-token lagging `d_i - d*_i` over the
//! tokens emitted up to and including the first one that consumed the whole
//! source (the cutoff index).
//!
//! All functions are pure and deterministic; everything is computed in `f64`
//! milliseconds with no intermediate rounding. Rounding to whole milliseconds
//! is a presentation concern and lives in the report writers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trace::{TraceError, UtteranceTrace};

/// Tolerance for the "consumed the whole source" test.
///
/// Real logs carry delays through serialization round-trips, so a delay may
/// land a hair below the source duration; anything within this epsilon counts
/// as having reached the end of the source.
pub const CUTOFF_EPSILON_MS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    /// Distinguished undefined-metric signal: the lagging mean does not exist
    /// for an empty hypothesis. Corpus aggregation skips such sentences and
    /// reports their count instead of substituting an invented value.
    #[error("metric undefined: empty hypothesis")]
    EmptyHypothesis,
    #[error("empty delay sequence")]
    EmptyDelays,
    #[error("oracle denominator length must be at least 1")]
    ZeroDenominator,
    #[error("oracle schedule length must be at least 1")]
    ZeroCount,
    #[error("source duration must be positive (got {0} ms)")]
    NonPositiveDuration(f64),
    #[error("empty alignment")]
    EmptyAlignment,
    #[error("alignment index {index} out of range for reference length {ref_len}")]
    AlignmentIndexOutOfRange { index: usize, ref_len: usize },
    #[error("invalid trace: {0}")]
    InvalidTrace(#[from] TraceError),
}

/// Index of the target token at which the end of the source is reached.
///
/// Returns the smallest 1-based `i` with `delays[i] >= source_duration - eps`.
/// Tokens after it were emitted with the full source available and carry no
/// latency information, so the lagging sum stops there. When no delay reaches
/// the end (the system finished before consuming all source), every token was
/// emitted under partial input and the cutoff falls back to the full length.
pub fn cutoff_index(delays: &[f64], source_duration_ms: f64) -> Result<usize, MetricError> {
    if delays.is_empty() {
        return Err(MetricError::EmptyDelays);
    }
    let end = source_duration_ms - CUTOFF_EPSILON_MS;
    Ok(delays
        .iter()
        .position(|&d| d >= end)
        .map_or(delays.len(), |p| p + 1))
}

/// Ideal emission schedule of the in-sync oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSchedule {
    /// Milliseconds between consecutive oracle words.
    pub word_duration_ms: f64,
    /// Length used as the denominator of the word duration.
    pub denominator_length: usize,
    /// `delays_ms[i] = i * word_duration_ms` (0-based storage for the
    /// 1-based oracle index, so the first word is emitted at time zero).
    pub delays_ms: Vec<f64>,
}

impl OracleSchedule {
    /// Oracle delay for the 1-based word index.
    pub fn delay_ms(&self, index: usize) -> f64 {
        (index - 1) as f64 * self.word_duration_ms
    }
}

/// Builds the oracle schedule for `count` words with the word duration set by
/// `source_duration_ms / denominator_length`.
///
/// `count` may exceed `denominator_length`: when a system over-generates, the
/// lagging sum runs past the denominator and the oracle delays keep growing
/// past the source end. They are deliberately not capped; the metric
/// definitions contain no cap.
pub fn oracle_schedule(
    source_duration_ms: f64,
    denominator_length: usize,
    count: usize,
) -> Result<OracleSchedule, MetricError> {
    if !source_duration_ms.is_finite() || source_duration_ms <= 0.0 {
        return Err(MetricError::NonPositiveDuration(source_duration_ms));
    }
    if denominator_length == 0 {
        return Err(MetricError::ZeroDenominator);
    }
    if count == 0 {
        return Err(MetricError::ZeroCount);
    }
    let word_duration_ms = source_duration_ms / denominator_length as f64;
    let delays_ms = (0..count).map(|i| i as f64 * word_duration_ms).collect();
    Ok(OracleSchedule {
        word_duration_ms,
        denominator_length,
        delays_ms,
    })
}

/// One lagging metric on one sentence: the averaged value, the per-token
/// lagging series it averages, and the cutoff index that bounded the sum.
#[derive(Debug, Clone, PartialEq)]
pub struct LaggingBreakdown {
    pub value_ms: f64,
    pub laggings_ms: Vec<f64>,
    pub cutoff_index: usize,
}

fn lagging_breakdown(
    trace: &UtteranceTrace,
    denominator_length: usize,
) -> Result<LaggingBreakdown, MetricError> {
    if trace.hyp_len() == 0 {
        return Err(MetricError::EmptyHypothesis);
    }
    let cutoff = cutoff_index(trace.delays_ms(), trace.source_duration_ms())?;
    let step = trace.source_duration_ms() / denominator_length as f64;
    let laggings_ms: Vec<f64> = trace.delays_ms()[..cutoff]
        .iter()
        .enumerate()
        .map(|(i, d)| d - i as f64 * step)
        .collect();
    let value_ms = laggings_ms.iter().sum::<f64>() / cutoff as f64;
    Ok(LaggingBreakdown {
        value_ms,
        laggings_ms,
        cutoff_index: cutoff,
    })
}

/// Average Lagging: oracle word duration set by the reference length.
pub fn sentence_al(trace: &UtteranceTrace) -> Result<LaggingBreakdown, MetricError> {
    lagging_breakdown(trace, trace.ref_len())
}

/// Length-Adaptive Average Lagging: oracle word duration set by the maximum
/// of hypothesis and reference lengths.
///
/// The hypothesis length counts every emitted token, including those after
/// the cutoff. When the hypothesis is no longer than the reference the
/// denominator reduces to the reference length and LAAL equals AL exactly.
pub fn sentence_laal(trace: &UtteranceTrace) -> Result<LaggingBreakdown, MetricError> {
    lagging_breakdown(trace, trace.hyp_len().max(trace.ref_len()))
}

/// A hypothesis token manually aligned to an oracle word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentPair {
    /// Emission delay of the aligned hypothesis token.
    pub system_delay_ms: f64,
    /// 1-based index into the reference oracle schedule.
    pub oracle_word_index: usize,
}

/// Mean lagging over a supplied token-to-oracle alignment.
///
/// This is the diagnostic counterpart of AL: instead of pairing hypothesis
/// token `i` with oracle word `i`, each pair carries the oracle word the
/// token actually corresponds to. Oracle delays are kept as exact fractions;
/// nothing is rounded before the subtraction.
pub fn aligned_lagging(
    pairs: &[AlignmentPair],
    source_duration_ms: f64,
    ref_len: usize,
) -> Result<f64, MetricError> {
    if pairs.is_empty() {
        return Err(MetricError::EmptyAlignment);
    }
    if !source_duration_ms.is_finite() || source_duration_ms <= 0.0 {
        return Err(MetricError::NonPositiveDuration(source_duration_ms));
    }
    if ref_len == 0 {
        return Err(MetricError::ZeroDenominator);
    }
    let step = source_duration_ms / ref_len as f64;
    let mut sum = 0.0;
    for pair in pairs {
        if pair.oracle_word_index == 0 || pair.oracle_word_index > ref_len {
            return Err(MetricError::AlignmentIndexOutOfRange {
                index: pair.oracle_word_index,
                ref_len,
            });
        }
        sum += pair.system_delay_ms - (pair.oracle_word_index - 1) as f64 * step;
    }
    Ok(sum / pairs.len() as f64)
}

/// Per-sentence metric bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceLatency {
    pub al_ms: f64,
    pub laal_ms: f64,
    /// 1-based cutoff index; identical for AL and LAAL since it depends only
    /// on the delays.
    pub cutoff_index: usize,
    pub lagging_series_al_ms: Vec<f64>,
    pub lagging_series_laal_ms: Vec<f64>,
    pub hyp_length: usize,
    pub ref_length: usize,
    /// Hypothesis minus reference length.
    pub length_diff: i64,
}

/// Computes AL and LAAL together with their lagging series.
pub fn sentence_metrics(trace: &UtteranceTrace) -> Result<SentenceLatency, MetricError> {
    let al = sentence_al(trace)?;
    let laal = sentence_laal(trace)?;
    debug_assert_eq!(al.cutoff_index, laal.cutoff_index);
    Ok(SentenceLatency {
        al_ms: al.value_ms,
        laal_ms: laal.value_ms,
        cutoff_index: al.cutoff_index,
        lagging_series_al_ms: al.laggings_ms,
        lagging_series_laal_ms: laal.laggings_ms,
        hyp_length: trace.hyp_len(),
        ref_length: trace.ref_len(),
        length_diff: trace.length_diff(),
    })
}

/// Outcome of scoring one sentence: defined metrics, or a recorded skip.
#[derive(Debug, Clone, PartialEq)]
pub enum SentenceOutcome {
    Defined(SentenceLatency),
    Undefined {
        hyp_length: usize,
        ref_length: usize,
        reason: String,
    },
}

impl SentenceOutcome {
    pub fn metrics(&self) -> Option<&SentenceLatency> {
        match self {
            SentenceOutcome::Defined(m) => Some(m),
            SentenceOutcome::Undefined { .. } => None,
        }
    }

    /// Hypothesis minus reference length; defined for skipped sentences too,
    /// which is what lets AWLD run over the whole corpus.
    pub fn length_diff(&self) -> i64 {
        match self {
            SentenceOutcome::Defined(m) => m.length_diff,
            SentenceOutcome::Undefined {
                hyp_length,
                ref_length,
                ..
            } => *hyp_length as i64 - *ref_length as i64,
        }
    }
}

/// Scores one sentence, folding the undefined-metric signal into the outcome.
pub fn score_sentence(trace: &UtteranceTrace) -> SentenceOutcome {
    match sentence_metrics(trace) {
        Ok(metrics) => SentenceOutcome::Defined(metrics),
        Err(err) => SentenceOutcome::Undefined {
            hyp_length: trace.hyp_len(),
            ref_length: trace.ref_len(),
            reason: err.to_string(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn toks(n: usize, prefix: &str) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn trace(source_ms: f64, delays: &[f64], ref_len: usize) -> UtteranceTrace {
        UtteranceTrace::new(
            source_ms,
            delays.to_vec(),
            toks(delays.len(), "h"),
            toks(ref_len, "r"),
        )
        .unwrap()
    }

    #[test]
    fn cutoff_at_exact_end() {
        assert_eq!(cutoff_index(&[1000.0, 2000.0, 3000.0], 3000.0).unwrap(), 3);
    }

    #[test]
    fn cutoff_excludes_tokens_after_first_end_token() {
        assert_eq!(
            cutoff_index(&[500.0, 3000.0, 3000.0, 3000.0], 3000.0).unwrap(),
            2
        );
    }

    #[test]
    fn cutoff_falls_back_to_hypothesis_length() {
        assert_eq!(cutoff_index(&[100.0, 200.0], 1000.0).unwrap(), 2);
    }

    #[test]
    fn cutoff_tolerates_serialization_jitter() {
        assert_eq!(cutoff_index(&[2999.9999995], 3000.0).unwrap(), 1);
    }

    #[test]
    fn cutoff_rejects_empty_delays() {
        assert_eq!(
            cutoff_index(&[], 1000.0).unwrap_err(),
            MetricError::EmptyDelays
        );
    }

    #[test]
    fn oracle_schedule_matches_hand_values() {
        // T = 5000 ms over 14 reference words: word duration 357.142857 ms.
        let oracle = oracle_schedule(5000.0, 14, 14).unwrap();
        assert!((oracle.delay_ms(8) - 2500.0).abs() < TOL);
        assert!((oracle.delay_ms(2) - 5000.0 / 14.0).abs() < TOL);
        assert_eq!(oracle.delay_ms(1), 0.0);
        assert!((oracle.word_duration_ms - 357.142_857_142_857_1).abs() < 1e-9);
    }

    #[test]
    fn oracle_schedule_runs_past_source_end_uncapped() {
        let oracle = oracle_schedule(3000.0, 2, 3).unwrap();
        assert_eq!(oracle.delays_ms, vec![0.0, 1500.0, 3000.0]);
        let oracle = oracle_schedule(3000.0, 2, 4).unwrap();
        assert!((oracle.delays_ms[3] - 4500.0).abs() < TOL);
    }

    #[test]
    fn oracle_schedule_rejects_degenerate_requests() {
        assert_eq!(
            oracle_schedule(1000.0, 0, 1).unwrap_err(),
            MetricError::ZeroDenominator
        );
        assert_eq!(
            oracle_schedule(1000.0, 1, 0).unwrap_err(),
            MetricError::ZeroCount
        );
        assert!(matches!(
            oracle_schedule(0.0, 1, 1).unwrap_err(),
            MetricError::NonPositiveDuration(_)
        ));
    }

    #[test]
    fn al_steady_lag() {
        let al = sentence_al(&trace(3000.0, &[1000.0, 2000.0, 3000.0], 3)).unwrap();
        assert!((al.value_ms - 1000.0).abs() < TOL);
        assert_eq!(al.cutoff_index, 3);
        for lag in &al.laggings_ms {
            assert!((lag - 1000.0).abs() < TOL);
        }
    }

    #[test]
    fn al_zero_for_in_sync_system() {
        let al = sentence_al(&trace(4000.0, &[0.0, 1000.0, 2000.0, 3000.0], 4)).unwrap();
        assert_eq!(al.value_ms, 0.0);
        assert_eq!(al.cutoff_index, 4);
    }

    #[test]
    fn al_discounts_overgeneration() {
        // Three tokens against a two-word reference: the oracle step is
        // 1500 ms, so the middle token picks up a -500 ms lagging.
        let al = sentence_al(&trace(3000.0, &[1000.0, 1000.0, 3000.0], 2)).unwrap();
        assert!((al.value_ms - 500.0 / 3.0).abs() < TOL);
        assert_eq!(al.laggings_ms.len(), 3);
        assert!((al.laggings_ms[0] - 1000.0).abs() < TOL);
        assert!((al.laggings_ms[1] + 500.0).abs() < TOL);
        assert!(al.laggings_ms[2].abs() < TOL);
    }

    #[test]
    fn laal_neutralizes_overgeneration_discount() {
        let laal = sentence_laal(&trace(3000.0, &[1000.0, 1000.0, 3000.0], 2)).unwrap();
        assert!((laal.value_ms - 2000.0 / 3.0).abs() < TOL);
        assert!((laal.laggings_ms[0] - 1000.0).abs() < TOL);
        assert!(laal.laggings_ms[1].abs() < TOL);
        assert!((laal.laggings_ms[2] - 1000.0).abs() < TOL);
    }

    #[test]
    fn laal_equals_al_without_overgeneration() {
        let t = trace(3000.0, &[1000.0, 2000.0, 3000.0], 3);
        let al = sentence_al(&t).unwrap();
        let laal = sentence_laal(&t).unwrap();
        assert_eq!(al.value_ms, laal.value_ms);
        assert!((laal.value_ms - 1000.0).abs() < TOL);
    }

    #[test]
    fn metrics_undefined_for_empty_hypothesis() {
        let t = UtteranceTrace::new(1000.0, vec![], vec![], toks(2, "r")).unwrap();
        assert_eq!(sentence_al(&t).unwrap_err(), MetricError::EmptyHypothesis);
        assert_eq!(sentence_laal(&t).unwrap_err(), MetricError::EmptyHypothesis);
        match score_sentence(&t) {
            SentenceOutcome::Undefined {
                hyp_length,
                ref_length,
                ..
            } => {
                assert_eq!(hyp_length, 0);
                assert_eq!(ref_length, 2);
            }
            SentenceOutcome::Defined(_) => panic!("expected undefined outcome"),
        }
    }

    #[test]
    fn aligned_lagging_published_pairs() {
        // 13 manually aligned pairs over a 5000 ms utterance with a 14-word
        // reference; exact fractional oracle delays give 845.27 ms.
        let delays = [
            1120.0, 1120.0, 2080.0, 2080.0, 2080.0, 2080.0, 3040.0, 3040.0, 4000.0, 4000.0, 4960.0,
            4960.0, 5000.0,
        ];
        let indices = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14];
        let pairs: Vec<AlignmentPair> = delays
            .iter()
            .zip(indices)
            .map(|(&system_delay_ms, oracle_word_index)| AlignmentPair {
                system_delay_ms,
                oracle_word_index,
            })
            .collect();
        let value = aligned_lagging(&pairs, 5000.0, 14).unwrap();
        assert!((value - 845.274_725_274_725_2).abs() < 1e-9);
    }

    #[test]
    fn aligned_lagging_single_pairs() {
        let zero = aligned_lagging(
            &[AlignmentPair {
                system_delay_ms: 0.0,
                oracle_word_index: 1,
            }],
            1234.0,
            7,
        )
        .unwrap();
        assert_eq!(zero, 0.0);
        let one = aligned_lagging(
            &[AlignmentPair {
                system_delay_ms: 1000.0,
                oracle_word_index: 1,
            }],
            1000.0,
            2,
        )
        .unwrap();
        assert!((one - 1000.0).abs() < TOL);
    }

    #[test]
    fn aligned_lagging_error_paths() {
        assert_eq!(
            aligned_lagging(&[], 1000.0, 2).unwrap_err(),
            MetricError::EmptyAlignment
        );
        let pair = AlignmentPair {
            system_delay_ms: 10.0,
            oracle_word_index: 3,
        };
        assert_eq!(
            aligned_lagging(&[pair], 1000.0, 2).unwrap_err(),
            MetricError::AlignmentIndexOutOfRange {
                index: 3,
                ref_len: 2
            }
        );
        let zero_index = AlignmentPair {
            system_delay_ms: 10.0,
            oracle_word_index: 0,
        };
        assert_eq!(
            aligned_lagging(&[zero_index], 1000.0, 2).unwrap_err(),
            MetricError::AlignmentIndexOutOfRange {
                index: 0,
                ref_len: 2
            }
        );
    }

    #[test]
    fn sentence_metrics_bundles_overgeneration_example() {
        let m = sentence_metrics(&trace(3000.0, &[1000.0, 1000.0, 3000.0], 2)).unwrap();
        assert!((m.al_ms - 500.0 / 3.0).abs() < TOL);
        assert!((m.laal_ms - 2000.0 / 3.0).abs() < TOL);
        assert_eq!(m.cutoff_index, 3);
        assert_eq!(m.length_diff, 1);
    }

    #[test]
    fn sentence_metrics_in_sync_trace() {
        let m = sentence_metrics(&trace(4000.0, &[0.0, 1000.0, 2000.0, 3000.0], 4)).unwrap();
        assert_eq!(m.al_ms, 0.0);
        assert_eq!(m.laal_ms, 0.0);
        assert_eq!(m.cutoff_index, 4);
        assert_eq!(m.length_diff, 0);
    }

    #[test]
    fn sentence_metrics_undergeneration_keeps_al_oracle() {
        let m = sentence_metrics(&trace(3000.0, &[1000.0, 2000.0, 3000.0], 5)).unwrap();
        assert_eq!(m.length_diff, -2);
        assert_eq!(m.al_ms, m.laal_ms);
    }
}
