#![no_main]

use libfuzzer_sys::fuzz_target;
use simulag::{parse_traces, write_canonical, TraceFormat, UtteranceTrace};

fuzz_target!(|data: &[u8]| {
    let (traces, report) =
        parse_traces(data, TraceFormat::CanonicalJsonl).expect("in-memory reads cannot fail");

    // Every record is accounted for and accepted traces satisfy the
    // invariants the metric code relies on.
    assert_eq!(report.accepted, traces.len());
    for trace in &traces {
        UtteranceTrace::new(
            trace.source_duration_ms(),
            trace.delays_ms().to_vec(),
            trace.hypothesis_tokens().to_vec(),
            trace.reference_tokens().to_vec(),
        )
        .expect("accepted trace re-validates");
    }

    // Accepted traces survive a serialize/parse cycle unchanged.
    let mut buf = Vec::new();
    write_canonical(&traces, &mut buf).expect("in-memory writes cannot fail");
    let (reparsed, roundtrip_report) =
        parse_traces(buf.as_slice(), TraceFormat::CanonicalJsonl).unwrap();
    assert_eq!(roundtrip_report.accepted, traces.len());
    assert_eq!(reparsed, traces);
});
