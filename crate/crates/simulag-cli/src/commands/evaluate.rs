use simulag::{
    aggregate, score_sentence, write_report, MetricSelection, SentenceOutcome,
    DEFAULT_REGIME_THRESHOLDS_MS,
};

use super::{load_traces, require_input, with_output};
use crate::args::{self, EvaluateArgs, FormatArg, OutputFormatArg};
use crate::config::{self, EvaluateConfig, ThresholdSpec};
use crate::error::AppError;

pub fn run(args: EvaluateArgs) -> Result<(), AppError> {
    let file: EvaluateConfig = config::load(args.config.as_deref())?;

    let input = require_input(args.input, file.input, "input file")?;
    let format = args.format.or(file.format).unwrap_or(FormatArg::Canonical);
    let selection = match args.metrics.or(file.metrics) {
        Some(spec) => args::parse_metrics(&spec)?,
        None => MetricSelection::all(),
    };
    let output = args.output.or(file.output);
    let output_format = args
        .output_format
        .or(file.output_format)
        .unwrap_or(OutputFormatArg::Table);
    let per_sentence = args.per_sentence || file.per_sentence.unwrap_or(false);
    let thresholds = match (args.thresholds, file.thresholds) {
        (Some(spec), _) => args::parse_thresholds(&spec)?,
        (None, Some(ThresholdSpec::Text(spec))) => args::parse_thresholds(&spec)?,
        (None, Some(ThresholdSpec::List(list))) => list,
        (None, None) => DEFAULT_REGIME_THRESHOLDS_MS.to_vec(),
    };

    let traces = load_traces(&input, format.into(), "ingestion")?;
    if traces.is_empty() {
        return Err(AppError::data("no valid traces"));
    }
    let outcomes: Vec<SentenceOutcome> = traces.iter().map(score_sentence).collect();
    let mut report = aggregate(&outcomes, &thresholds)?;
    if !per_sentence {
        report.per_sentence = None;
    }
    with_output(output.as_ref(), |w| {
        write_report(&report, output_format.into(), selection, w)?;
        Ok(())
    })
}
