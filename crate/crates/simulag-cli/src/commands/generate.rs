use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use simulag::{generate_corpus, write_canonical, SynthConfig, SynthMetadata};

use super::require_input;
use crate::args::{self, GenerateArgs};
use crate::config::{self, GenerateConfig};
use crate::error::AppError;

pub fn run(args: GenerateArgs) -> Result<(), AppError> {
    let file: GenerateConfig = config::load(args.config.as_deref())?;

    let output = require_input(args.output, file.output, "--output path")?;
    let num = args
        .num
        .or(file.num)
        .ok_or_else(|| AppError::usage("missing --num"))?;
    let k = args
        .k
        .or(file.k)
        .ok_or_else(|| AppError::usage("missing --k"))?;
    let src_words = args
        .src_words
        .or_else(|| file.src_words.map(|s| s.as_text()))
        .ok_or_else(|| AppError::usage("missing --src-words"))?;
    let word_ms = args
        .word_ms
        .or_else(|| file.word_ms.map(|s| s.as_text()))
        .ok_or_else(|| AppError::usage("missing --word-ms"))?;
    let target_offset = args
        .target_offset
        .or_else(|| file.target_offset.map(|s| s.as_text()))
        .unwrap_or_else(|| "0".to_owned());

    let config = SynthConfig {
        k,
        source_word_count: args::parse_usize_range(&src_words)?,
        source_word_duration_ms: args::parse_f64_range(&word_ms)?,
        target_length_offset: args::parse_i64_range(&target_offset)?,
        overgen_insert_prob: args.overgen_prob.or(file.overgen_prob).unwrap_or(0.0),
        seed: args.seed.or(file.seed).unwrap_or(0),
        num_sentences: num,
    };
    config.validate()?;

    let traces = generate_corpus(&config)?;
    let mut writer = BufWriter::new(
        File::create(&output)
            .map_err(|e| AppError::io(format!("cannot create {}: {e}", output.display())))?,
    );
    write_canonical(&traces, &mut writer)?;
    writer.flush()?;

    let meta_path = PathBuf::from(format!("{}.meta.json", output.display()));
    let metadata = SynthMetadata::for_config(config);
    let mut meta_writer = BufWriter::new(
        File::create(&meta_path)
            .map_err(|e| AppError::io(format!("cannot create {}: {e}", meta_path.display())))?,
    );
    serde_json::to_writer_pretty(&mut meta_writer, &metadata)
        .map_err(|e| AppError::io(e.to_string()))?;
    meta_writer.write_all(b"\n")?;
    meta_writer.flush()?;

    eprintln!(
        "generated {} sentences -> {} (metadata: {})",
        traces.len(),
        output.display(),
        meta_path.display()
    );
    Ok(())
}
