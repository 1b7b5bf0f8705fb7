#![no_main]

use libfuzzer_sys::fuzz_target;
use simulag::{parse_traces, score_sentence, TraceFormat};

fuzz_target!(|data: &[u8]| {
    let (traces, report) =
        parse_traces(data, TraceFormat::SimulevalLog).expect("in-memory reads cannot fail");
    assert_eq!(report.accepted, traces.len());

    // Whatever the adapter admits must be scoreable without panicking, and
    // the dominance invariant must hold.
    for trace in &traces {
        if let Some(metrics) = score_sentence(trace).metrics() {
            assert!(metrics.laal_ms >= metrics.al_ms);
            assert!(metrics.cutoff_index >= 1 && metrics.cutoff_index <= trace.hyp_len());
        }
    }
});
