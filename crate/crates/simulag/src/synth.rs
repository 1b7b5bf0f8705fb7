//! Seeded synthetic wait-k traces.
//!
//! The generator builds decoding traces under a wait-k emission policy: the
//! system reads `k` source words, then emits one target word after every
//! further source word, draining the rest once the source is exhausted. With
//! controllable length offsets and an over-generation injector this provides
//! a test bed for the AL-vs-LAAL bias without trained models.
//!
//! Generation is deterministic: the same [`SynthConfig`] (including the seed)
//! yields byte-identical corpora on the same build. The generator identity is
//! recorded in the emitted metadata.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::CUTOFF_EPSILON_MS;
use crate::trace::UtteranceTrace;

/// Name recorded in metadata for the RNG backing the generator.
pub const GENERATOR_ID: &str = "chacha8";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("wait-k lag must be at least 1")]
    ZeroK,
    #[error("empty source word count range [{0}, {1}]")]
    EmptyWordCountRange(usize, usize),
    #[error("invalid word duration range [{0} ms, {1} ms]")]
    InvalidDurationRange(f64, f64),
    #[error("empty target length offset range [{0}, {1}]")]
    EmptyOffsetRange(i64, i64),
    #[error("over-generation probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("number of sentences must be at least 1")]
    ZeroSentences,
}

/// Parameters of the wait-k trace generator.
///
/// Ranges are inclusive; a fixed value is the degenerate range `(v, v)`.
/// `target_length_offset` is the distribution of `|hypothesis| - n_src`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Wait-k lag in source words.
    pub k: usize,
    pub source_word_count: (usize, usize),
    pub source_word_duration_ms: (f64, f64),
    pub target_length_offset: (i64, i64),
    /// Probability of duplicating each token emitted before the source ends.
    pub overgen_insert_prob: f64,
    pub seed: u64,
    pub num_sentences: usize,
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.k == 0 {
            return Err(SynthError::ZeroK);
        }
        let (lo, hi) = self.source_word_count;
        if lo == 0 || lo > hi {
            return Err(SynthError::EmptyWordCountRange(lo, hi));
        }
        let (dlo, dhi) = self.source_word_duration_ms;
        if !dlo.is_finite() || !dhi.is_finite() || dlo <= 0.0 || dhi < dlo {
            return Err(SynthError::InvalidDurationRange(dlo, dhi));
        }
        let (olo, ohi) = self.target_length_offset;
        if olo > ohi {
            return Err(SynthError::EmptyOffsetRange(olo, ohi));
        }
        if !(0.0..=1.0).contains(&self.overgen_insert_prob) {
            return Err(SynthError::InvalidProbability(self.overgen_insert_prob));
        }
        if self.num_sentences == 0 {
            return Err(SynthError::ZeroSentences);
        }
        Ok(())
    }
}

/// Metadata header emitted next to a generated corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthMetadata {
    pub generator: String,
    pub config: SynthConfig,
}

impl SynthMetadata {
    pub fn for_config(config: SynthConfig) -> Self {
        Self {
            generator: GENERATOR_ID.to_owned(),
            config,
        }
    }
}

fn sample_usize(rng: &mut impl Rng, range: (usize, usize)) -> usize {
    rng.random_range(range.0..=range.1)
}

fn sample_f64(rng: &mut impl Rng, range: (f64, f64)) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.random_range(range.0..=range.1)
    }
}

/// Generates one wait-k trace.
///
/// For a source of `n` words with durations `D_1..D_n`, target token `i` is
/// emitted once `min(k + i - 1, n)` source words have been heard, so its
/// delay is the corresponding prefix sum of durations (the full duration once
/// the source is exhausted). Reference tokens are placeholders, one per
/// source word; the hypothesis length is `n` plus a draw from the offset
/// range, floored at 1.
pub fn gen_waitk_trace(
    config: &SynthConfig,
    rng: &mut impl Rng,
) -> Result<UtteranceTrace, SynthError> {
    config.validate()?;
    let n = sample_usize(rng, config.source_word_count);
    let mut prefix_sums = Vec::with_capacity(n);
    let mut total = 0.0;
    for _ in 0..n {
        total += sample_f64(rng, config.source_word_duration_ms);
        prefix_sums.push(total);
    }
    let offset = rng.random_range(config.target_length_offset.0..=config.target_length_offset.1);
    let target_len = (n as i64 + offset).max(1) as usize;

    let delays: Vec<f64> = (1..=target_len)
        .map(|i| prefix_sums[(config.k + i - 1).min(n) - 1])
        .collect();
    let hypothesis = (1..=target_len).map(|i| format!("tok{i}")).collect();
    let reference = (1..=n).map(|i| format!("ref{i}")).collect();

    Ok(UtteranceTrace::new(total, delays, hypothesis, reference)
        .expect("wait-k schedule is valid by construction"))
}

/// Duplicates tokens emitted before the source ends, each with the given
/// probability.
///
/// A duplicate keeps the original's delay and gets a disambiguating suffix on
/// the token text. Tokens whose delay already reaches the source end are
/// never duplicated: over-generation only biases the metrics when the extra
/// words appear before the utterance ends. Source duration and reference are
/// untouched.
///
/// The probability must lie in `[0, 1]`.
pub fn inject_overgeneration(
    trace: &UtteranceTrace,
    prob: f64,
    rng: &mut impl Rng,
) -> UtteranceTrace {
    assert!(
        (0.0..=1.0).contains(&prob),
        "over-generation probability {prob} outside [0, 1]"
    );
    if prob == 0.0 || trace.hyp_len() == 0 {
        return trace.clone();
    }
    let end = trace.source_duration_ms() - CUTOFF_EPSILON_MS;
    let mut delays = Vec::with_capacity(trace.hyp_len());
    let mut tokens = Vec::with_capacity(trace.hyp_len());
    for (delay, token) in trace.delays_ms().iter().zip(trace.hypothesis_tokens()) {
        delays.push(*delay);
        tokens.push(token.clone());
        if *delay < end && rng.random_range(0.0..1.0) < prob {
            delays.push(*delay);
            tokens.push(format!("{token}_dup"));
        }
    }
    UtteranceTrace::new(
        trace.source_duration_ms(),
        delays,
        tokens,
        trace.reference_tokens().to_vec(),
    )
    .expect("duplicating tokens in place preserves validity")
}

/// Generates the configured corpus, threading one seeded RNG through all
/// sentences.
pub fn generate_corpus(config: &SynthConfig) -> Result<Vec<UtteranceTrace>, SynthError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut corpus = Vec::with_capacity(config.num_sentences);
    for _ in 0..config.num_sentences {
        let base = gen_waitk_trace(config, &mut rng)?;
        corpus.push(inject_overgeneration(
            &base,
            config.overgen_insert_prob,
            &mut rng,
        ));
    }
    Ok(corpus)
}
