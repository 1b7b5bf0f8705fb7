use std::io::Write;
use std::path::Path;

use simulag::{
    aggregate, compare, score_sentence, ComparisonRecord, CorpusReport, SentenceOutcome,
    TraceFormat, DEFAULT_REGIME_THRESHOLDS_MS,
};

use super::{load_traces, require_input, with_output};
use crate::args::{CompareArgs, FormatArg, OutputFormatArg};
use crate::config::{self, CompareConfig};
use crate::error::AppError;

pub fn run(args: CompareArgs) -> Result<(), AppError> {
    let file: CompareConfig = config::load(args.config.as_deref())?;
    let input_a = require_input(args.input_a, file.input_a, "first input file")?;
    let input_b = require_input(args.input_b, file.input_b, "second input file")?;
    let format = args.format.or(file.format).unwrap_or(FormatArg::Canonical);
    let output = args.output.or(file.output);
    let output_format = args
        .output_format
        .or(file.output_format)
        .unwrap_or(OutputFormatArg::Json);

    let report_a = scored_report(&input_a, format.into(), "ingestion A")?;
    let report_b = scored_report(&input_b, format.into(), "ingestion B")?;
    let record = compare(&report_a, &report_b);
    if let Some(warning) = &record.warning {
        eprintln!("warning: {warning}");
    }

    with_output(output.as_ref(), |w| match output_format {
        OutputFormatArg::Json | OutputFormatArg::Csv => write_json(&record, w),
        OutputFormatArg::Table => write_table(&record, w),
    })
}

fn scored_report(input: &Path, format: TraceFormat, label: &str) -> Result<CorpusReport, AppError> {
    let traces = load_traces(input, format, label)?;
    if traces.is_empty() {
        return Err(AppError::data(format!(
            "no valid traces in {}",
            input.display()
        )));
    }
    let outcomes: Vec<SentenceOutcome> = traces.iter().map(score_sentence).collect();
    Ok(aggregate(&outcomes, &DEFAULT_REGIME_THRESHOLDS_MS)?)
}

fn write_json(record: &ComparisonRecord, w: &mut dyn Write) -> Result<(), AppError> {
    serde_json::to_writer_pretty(&mut *w, record).map_err(|e| AppError::io(e.to_string()))?;
    w.write_all(b"\n")?;
    Ok(())
}

fn write_table(record: &ComparisonRecord, w: &mut dyn Write) -> Result<(), AppError> {
    writeln!(w, "comparison (B - A)")?;
    writeln!(w, "  delta AL     {:+.0} ms", record.delta_al_ms)?;
    writeln!(w, "  delta LAAL   {:+.0} ms", record.delta_laal_ms)?;
    writeln!(w, "  delta AWLD   {:+.2} words", record.delta_awld)?;
    if record.per_sentence_compared {
        if record.ranking_disagreements.is_empty() {
            writeln!(w, "  ranking disagreements: none")?;
        } else {
            writeln!(
                w,
                "  ranking disagreements: {} sentences {:?}",
                record.ranking_disagreements.len(),
                record.ranking_disagreements
            )?;
        }
    } else {
        writeln!(w, "  ranking disagreements: not compared")?;
    }
    Ok(())
}
