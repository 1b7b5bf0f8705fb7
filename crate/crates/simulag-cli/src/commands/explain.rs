use std::io::Write;

use simulag::{oracle_schedule, sentence_metrics, MetricError, UtteranceTrace};

use super::{load_traces, require_input, with_output};
use crate::args::{ExplainArgs, FormatArg};
use crate::config::{self, ExplainConfig};
use crate::error::AppError;

pub fn run(args: ExplainArgs) -> Result<(), AppError> {
    let file: ExplainConfig = config::load(args.config.as_deref())?;
    let input = require_input(args.input, file.input, "input file")?;
    let index = args
        .index
        .or(file.index)
        .ok_or_else(|| AppError::usage("missing --index"))?;
    let format = args.format.or(file.format).unwrap_or(FormatArg::Canonical);

    let traces = load_traces(&input, format.into(), "ingestion")?;
    let trace = traces.get(index).ok_or_else(|| {
        AppError::data(format!(
            "sentence index {index} out of range ({} accepted traces)",
            traces.len()
        ))
    })?;
    with_output(None, |w| render(trace, index, w))
}

fn render(trace: &UtteranceTrace, index: usize, w: &mut dyn Write) -> Result<(), AppError> {
    let metrics = match sentence_metrics(trace) {
        Ok(metrics) => metrics,
        Err(MetricError::EmptyHypothesis) => {
            writeln!(w, "sentence {index}: metrics undefined (empty hypothesis)")?;
            return Ok(());
        }
        Err(err) => return Err(AppError::data(err.to_string())),
    };
    let denominator_laal = trace.hyp_len().max(trace.ref_len());
    let oracle_al = oracle_schedule(trace.source_duration_ms(), trace.ref_len(), trace.hyp_len())
        .map_err(|e| AppError::data(e.to_string()))?;
    let oracle_laal = oracle_schedule(
        trace.source_duration_ms(),
        denominator_laal,
        trace.hyp_len(),
    )
    .map_err(|e| AppError::data(e.to_string()))?;

    writeln!(
        w,
        "sentence {index}: |Y| = {}, |Y*| = {}, T = {} ms, cutoff = {}",
        trace.hyp_len(),
        trace.ref_len(),
        trace.source_duration_ms(),
        metrics.cutoff_index
    )?;
    writeln!(
        w,
        "{:>4}  {:<16} {:>10}  {:>10} {:>10}  {:>10} {:>10}",
        "i", "token", "d_i", "d*_AL", "lag_AL", "d*_LAAL", "lag_LAAL"
    )?;
    for (i, (token, delay)) in trace
        .hypothesis_tokens()
        .iter()
        .zip(trace.delays_ms())
        .enumerate()
    {
        if i < metrics.cutoff_index {
            writeln!(
                w,
                "{:>4}  {:<16} {:>10.2}  {:>10.2} {:>10.2}  {:>10.2} {:>10.2}",
                i + 1,
                token,
                delay,
                oracle_al.delays_ms[i],
                metrics.lagging_series_al_ms[i],
                oracle_laal.delays_ms[i],
                metrics.lagging_series_laal_ms[i],
            )?;
        } else {
            writeln!(
                w,
                "{:>4}  {:<16} {:>10.2}  ignored (beyond cutoff)",
                i + 1,
                token,
                delay,
            )?;
        }
    }
    let sum_al: f64 = metrics.lagging_series_al_ms.iter().sum();
    let sum_laal: f64 = metrics.lagging_series_laal_ms.iter().sum();
    writeln!(w)?;
    writeln!(
        w,
        "lagging sums over {} counted tokens: AL {:.2} ms, LAAL {:.2} ms",
        metrics.cutoff_index, sum_al, sum_laal
    )?;
    writeln!(w, "AL   = {:.2} ms", metrics.al_ms)?;
    writeln!(w, "LAAL = {:.2} ms", metrics.laal_ms)?;
    Ok(())
}
