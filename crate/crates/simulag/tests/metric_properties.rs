//! Property suite for the sentence-level metrics.

mod common;

use common::{brute_force_al, brute_force_laal, make_trace, valid_trace, valid_trace_reaching_end};
use proptest::prelude::*;
use simulag::{sentence_al, sentence_laal, sentence_metrics, UtteranceTrace};

fn scaled(trace: &UtteranceTrace, c: f64) -> UtteranceTrace {
    make_trace(
        trace.source_duration_ms() * c,
        trace.delays_ms().iter().map(|d| d * c).collect(),
        trace.ref_len(),
    )
}

proptest! {
    /// LAAL never undercuts AL; it equals AL exactly without over-generation
    /// and strictly exceeds it when over-generation reaches the lagging sum.
    #[test]
    fn laal_dominates_al(trace in valid_trace()) {
        let al = sentence_al(&trace).unwrap();
        let laal = sentence_laal(&trace).unwrap();
        prop_assert!(laal.value_ms >= al.value_ms);
        if trace.hyp_len() <= trace.ref_len() {
            prop_assert_eq!(laal.value_ms, al.value_ms);
        } else if al.cutoff_index >= 2 {
            prop_assert!(laal.value_ms > al.value_ms);
        }
    }

    /// The cutoff depends only on the delays, not on the oracle choice.
    #[test]
    fn cutoff_independent_of_oracle(trace in valid_trace()) {
        let al = sentence_al(&trace).unwrap();
        let laal = sentence_laal(&trace).unwrap();
        prop_assert_eq!(al.cutoff_index, laal.cutoff_index);
        prop_assert!(al.cutoff_index >= 1 && al.cutoff_index <= trace.hyp_len());
    }

    /// Scaling duration and delays by c scales both metrics by c and leaves
    /// the cutoff alone.
    #[test]
    fn scale_equivariance(
        trace in valid_trace(),
        c in prop::sample::select(vec![0.125, 0.5, 2.0, 3.0, 1000.0]),
    ) {
        let base = sentence_metrics(&trace).unwrap();
        let scaled = sentence_metrics(&scaled(&trace, c)).unwrap();
        prop_assert_eq!(scaled.cutoff_index, base.cutoff_index);
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0);
        prop_assert!(close(scaled.al_ms, c * base.al_ms));
        prop_assert!(close(scaled.laal_ms, c * base.laal_ms));
    }

    /// Tokens appended at the source end after the first end token never move
    /// the cutoff or AL; they can only grow LAAL.
    #[test]
    fn post_cutoff_tokens_leave_al_alone(
        trace in valid_trace_reaching_end(),
        extra in 1usize..5,
    ) {
        let base = sentence_metrics(&trace).unwrap();
        let mut delays = trace.delays_ms().to_vec();
        delays.extend(std::iter::repeat_n(trace.source_duration_ms(), extra));
        let appended = make_trace(trace.source_duration_ms(), delays, trace.ref_len());
        let grown = sentence_metrics(&appended).unwrap();
        prop_assert_eq!(grown.cutoff_index, base.cutoff_index);
        prop_assert_eq!(grown.al_ms, base.al_ms);
        prop_assert!(grown.laal_ms >= base.laal_ms);
    }

    /// The reported value is the arithmetic mean of the reported series.
    #[test]
    fn value_is_mean_of_lagging_series(trace in valid_trace()) {
        let m = sentence_metrics(&trace).unwrap();
        let mean_al = m.lagging_series_al_ms.iter().sum::<f64>()
            / m.lagging_series_al_ms.len() as f64;
        let mean_laal = m.lagging_series_laal_ms.iter().sum::<f64>()
            / m.lagging_series_laal_ms.len() as f64;
        prop_assert_eq!(m.al_ms, mean_al);
        prop_assert_eq!(m.laal_ms, mean_laal);
        prop_assert_eq!(m.lagging_series_al_ms.len(), m.cutoff_index);
        prop_assert_eq!(m.lagging_series_laal_ms.len(), m.cutoff_index);
    }

    /// The implementation agrees with an independent transliteration of the
    /// metric definitions.
    #[test]
    fn matches_brute_force_transliteration(trace in valid_trace()) {
        let m = sentence_metrics(&trace).unwrap();
        let (al, tau_al) = brute_force_al(
            trace.delays_ms(),
            trace.source_duration_ms(),
            trace.ref_len(),
        );
        let (laal, tau_laal) = brute_force_laal(
            trace.delays_ms(),
            trace.source_duration_ms(),
            trace.ref_len(),
        );
        prop_assert_eq!(m.cutoff_index, tau_al);
        prop_assert_eq!(m.cutoff_index, tau_laal);
        prop_assert!((m.al_ms - al).abs() <= 1e-9);
        prop_assert!((m.laal_ms - laal).abs() <= 1e-9);
    }
}
