//! Latency evaluation for simultaneous (streaming) translation.
//!
//! Simultaneous systems start translating before the source utterance ends,
//! so evaluating them means asking how far each emitted token lags behind an
//! ideal in-sync translator. This crate computes the standard Average Lagging
//! (AL), its length-adaptive variant (LAAL) that stays unbiased when systems
//! emit more tokens than the reference, and the average word length
//! difference (AWLD) that quantifies that tendency. Around the metrics it
//! provides trace ingestion from JSONL logs, corpus aggregation and report
//! serialization, and a seeded wait-k trace synthesizer for controlled
//! experiments.

pub mod io;
pub mod metrics;
pub mod report;
pub mod synth;
pub mod trace;

pub use io::{
    parse_traces, tokenize, write_canonical, IngestError, IngestionReport, RawTraceRecord,
    TraceFormat,
};
pub use metrics::{
    aligned_lagging, cutoff_index, oracle_schedule, score_sentence, sentence_al, sentence_laal,
    sentence_metrics, AlignmentPair, LaggingBreakdown, MetricError, OracleSchedule,
    SentenceLatency, SentenceOutcome, CUTOFF_EPSILON_MS,
};
pub use report::{
    aggregate, awld, compare, write_report, ComparisonRecord, CorpusReport, MetricSelection,
    ReportError, ReportFormat, SentenceRow, DEFAULT_REGIME_THRESHOLDS_MS,
};
pub use synth::{
    gen_waitk_trace, generate_corpus, inject_overgeneration, SynthConfig, SynthError, SynthMetadata,
};
pub use trace::{TraceError, UtteranceTrace};
