//! Shared helpers for the integration and acceptance suites.
//!
//! The brute-force metric transliterations live here, in test code only, and
//! deliberately share no code with the library implementation: they are the
//! independent oracle the main metric path is checked against.

#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use simulag::UtteranceTrace;

pub fn tokens(n: usize, prefix: &str) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn make_trace(source_ms: f64, delays: Vec<f64>, ref_len: usize) -> UtteranceTrace {
    let hyp_len = delays.len();
    UtteranceTrace::new(
        source_ms,
        delays,
        tokens(hyp_len, "h"),
        tokens(ref_len, "r"),
    )
    .expect("test trace is valid")
}

/// Keeps generated delays clear of the cutoff epsilon: anything within 1 ms
/// of the source end snaps onto it exactly, so scaling cannot flip a token
/// across the end-of-source test.
fn snap_to_end(delays: &mut [f64], source_ms: f64) {
    for d in delays.iter_mut() {
        if *d > source_ms - 1.0 {
            *d = source_ms;
        }
    }
}

fn build_trace(
    source_ms: f64,
    fractions: Vec<f64>,
    ref_len: usize,
    tail_at_end: usize,
) -> UtteranceTrace {
    let mut delays: Vec<f64> = fractions.iter().map(|f| f * source_ms).collect();
    delays.sort_by(f64::total_cmp);
    let len = delays.len();
    for d in delays[len - tail_at_end.min(len)..].iter_mut() {
        *d = source_ms;
    }
    snap_to_end(&mut delays, source_ms);
    make_trace(source_ms, delays, ref_len)
}

/// Arbitrary valid trace: random lengths, random non-decreasing delays,
/// sometimes a tail of tokens emitted exactly at the source end.
pub fn valid_trace() -> impl Strategy<Value = UtteranceTrace> {
    (1usize..=30, 1usize..=30, 100.0f64..20000.0, 0usize..=3).prop_flat_map(
        |(hyp_len, ref_len, source_ms, tail)| {
            prop::collection::vec(0.0f64..1.0, hyp_len).prop_map(move |fractions| {
                build_trace(source_ms, fractions, ref_len, tail.min(hyp_len))
            })
        },
    )
}

/// Like [`valid_trace`] but guaranteed to contain at least one token emitted
/// at the source end.
pub fn valid_trace_reaching_end() -> impl Strategy<Value = UtteranceTrace> {
    (1usize..=30, 1usize..=30, 100.0f64..20000.0, 1usize..=3).prop_flat_map(
        |(hyp_len, ref_len, source_ms, tail)| {
            prop::collection::vec(0.0f64..1.0, hyp_len).prop_map(move |fractions| {
                build_trace(source_ms, fractions, ref_len, tail.min(hyp_len))
            })
        },
    )
}

/// Seeded bulk generator for the acceptance loops.
pub fn random_trace(rng: &mut impl Rng) -> UtteranceTrace {
    let hyp_len = rng.random_range(1..=40);
    let ref_len = rng.random_range(1..=40);
    let source_ms: f64 = rng.random_range(100.0..20000.0);
    let mut delays: Vec<f64> = (0..hyp_len)
        .map(|_| rng.random_range(0.0..=source_ms))
        .collect();
    delays.sort_by(f64::total_cmp);
    if rng.random_bool(0.5) {
        let tail = rng.random_range(1..=hyp_len);
        for d in delays[hyp_len - tail..].iter_mut() {
            *d = source_ms;
        }
    }
    snap_to_end(&mut delays, source_ms);
    make_trace(source_ms, delays, ref_len)
}

/// Direct transliteration of the AL definition: cutoff scan, then one pass
/// summing `d_i - (i-1) * T / L` with the reference length as `L`.
pub fn brute_force_al(delays: &[f64], source_ms: f64, ref_len: usize) -> (f64, usize) {
    brute_force_lagging(delays, source_ms, ref_len)
}

/// Same transliteration with `L = max(|Y|, |Y*|)`.
pub fn brute_force_laal(delays: &[f64], source_ms: f64, ref_len: usize) -> (f64, usize) {
    let denom = if delays.len() > ref_len {
        delays.len()
    } else {
        ref_len
    };
    brute_force_lagging(delays, source_ms, denom)
}

fn brute_force_lagging(delays: &[f64], source_ms: f64, denom: usize) -> (f64, usize) {
    let mut tau = delays.len();
    for (i, d) in delays.iter().enumerate() {
        if *d >= source_ms - 1e-6 {
            tau = i + 1;
            break;
        }
    }
    let mut sum = 0.0;
    for i in 1..=tau {
        let oracle = (i - 1) as f64 * (source_ms / denom as f64);
        sum += delays[i - 1] - oracle;
    }
    (sum / tau as f64, tau)
}

/// Spearman rank correlation; assumes no ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let rank = |values: &[f64]| -> Vec<f64> {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let mut ranks = vec![0.0; values.len()];
        for (r, &i) in order.iter().enumerate() {
            ranks[i] = r as f64;
        }
        ranks
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
    1.0 - 6.0 * d2 / (n as f64 * (n as f64 * n as f64 - 1.0))
}
