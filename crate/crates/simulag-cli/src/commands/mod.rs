pub mod compare;
pub mod evaluate;
pub mod explain;
pub mod generate;

use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use simulag::{parse_traces, IngestionReport, TraceFormat, UtteranceTrace};

use crate::error::AppError;

const MAX_REJECT_LINES: usize = 20;

/// Reads traces from a file or stdin ("-"), echoing the ingestion report to
/// stderr.
pub fn load_traces(
    input: &Path,
    format: TraceFormat,
    label: &str,
) -> Result<Vec<UtteranceTrace>, AppError> {
    let reader: Box<dyn Read> = if input == Path::new("-") {
        Box::new(io::stdin().lock())
    } else {
        Box::new(
            File::open(input)
                .map_err(|e| AppError::io(format!("cannot open {}: {e}", input.display())))?,
        )
    };
    let (traces, report) = parse_traces(BufReader::new(reader), format)?;
    echo_ingestion(&report, label);
    Ok(traces)
}

fn echo_ingestion(report: &IngestionReport, label: &str) {
    eprintln!(
        "{label}: {} accepted ({} repaired), {} rejected",
        report.accepted,
        report.repaired,
        report.rejected_count()
    );
    for rejected in report.rejected.iter().take(MAX_REJECT_LINES) {
        eprintln!(
            "{label}: line {}: {}",
            rejected.line_number, rejected.reason
        );
    }
    if report.rejected_count() > MAX_REJECT_LINES {
        eprintln!(
            "{label}: ... and {} more rejected records",
            report.rejected_count() - MAX_REJECT_LINES
        );
    }
}

/// Writes the payload to the given file, or stdout when absent.
pub fn with_output<F>(output: Option<&PathBuf>, write: F) -> Result<(), AppError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), AppError>,
{
    match output {
        Some(path) => {
            let mut file = File::create(path)
                .map_err(|e| AppError::io(format!("cannot create {}: {e}", path.display())))?;
            write(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

/// Resolves the input path from flag or config.
pub fn require_input(
    flag: Option<PathBuf>,
    config: Option<PathBuf>,
    what: &str,
) -> Result<PathBuf, AppError> {
    flag.or(config).ok_or_else(|| {
        AppError::usage(format!(
            "missing {what} (pass it as an argument or in --config)"
        ))
    })
}
