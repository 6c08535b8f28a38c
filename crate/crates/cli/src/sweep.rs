//! Exhaustive sweeps written as JSON Lines, optionally in parallel and
//! resumable.

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use orbital_ac_core::oracle::{evaluate_item, sweep_items, Oracle, OracleConfig, SweepItem, SweepSummary};
use rayon::prelude::*;

use crate::records::{SummaryRecord, SweepRecord};
use crate::CliError;

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub rank: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub config: OracleConfig,
    pub parallel: bool,
    pub timings: bool,
}

impl SweepOptions {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(2..=4).contains(&self.rank) {
            return Err(CliError::Usage(format!("sweeps support ranks 2 to 4, got {}", self.rank)));
        }
        if self.min_len < 2 || self.max_len < self.min_len {
            return Err(CliError::Usage("need 2 <= --min-len <= --max-len".into()));
        }
        self.config.validate()?;
        Ok(())
    }
}

const CHUNK: usize = 64;

/// Evaluates every item not in `done`, in index order, handing each record
/// to `emit`. Parallel evaluation works on fixed chunks and emits in order,
/// so output does not depend on scheduling.
pub fn run<F>(opts: &SweepOptions, done: &BTreeSet<usize>, mut emit: F) -> Result<SummaryRecord, CliError>
where
    F: FnMut(&SweepRecord) -> Result<(), CliError>,
{
    opts.validate()?;
    let oracle = Oracle::new(opts.rank)?;
    let items: Vec<SweepItem> =
        sweep_items(opts.rank, opts.min_len, opts.max_len).into_iter().filter(|i| !done.contains(&i.index)).collect();
    let mut summary = SweepSummary::new(opts.rank);
    let eval = |item: &SweepItem| -> Result<(orbital_ac_core::oracle::SweepOutcome, f64), CliError> {
        let start = Instant::now();
        let out = evaluate_item(&oracle, item, &opts.config)?;
        Ok((out, start.elapsed().as_secs_f64() * 1e3))
    };
    for chunk in items.chunks(CHUNK) {
        let results: Vec<_> =
            if opts.parallel { chunk.par_iter().map(eval).collect() } else { chunk.iter().map(eval).collect() };
        for r in results {
            let (outcome, ms) = r?;
            summary.record(&outcome);
            emit(&SweepRecord::from_outcome(&outcome, opts.timings.then_some(ms)))?;
        }
    }
    Ok(SummaryRecord::new(&summary, opts.min_len, opts.max_len, done.len()))
}

/// Indices already present in an existing output file. A trailing partial
/// line from an interrupted run is cut off so appending stays valid.
pub fn existing_indices(path: &Path, rank: usize) -> Result<BTreeSet<usize>, CliError> {
    let mut done = BTreeSet::new();
    if !path.exists() {
        return Ok(done);
    }
    let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut valid_bytes = 0u64;
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    let mut line_no = 0;
    loop {
        line.clear();
        let read = reader.read_line(&mut line).map_err(|e| CliError::Io(e.to_string()))?;
        if read == 0 {
            break;
        }
        line_no += 1;
        if !line.ends_with('\n') {
            break;
        }
        let record: SweepRecord = serde_json::from_str(line.trim_end()).map_err(|e| CliError::Parse {
            line: line_no,
            column: e.column(),
            message: format!("{}: {e}", path.display()),
        })?;
        if record.rank != rank {
            return Err(CliError::Usage(format!(
                "{} holds rank {} records, not rank {rank}",
                path.display(),
                record.rank
            )));
        }
        done.insert(record.index);
        valid_bytes += read as u64;
    }
    let f = OpenOptions::new().write(true).open(path).map_err(|e| CliError::Io(e.to_string()))?;
    f.set_len(valid_bytes).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(done)
}

/// Runs a sweep into a JSONL file, appending when `skip_existing` is set.
pub fn run_to_file(opts: &SweepOptions, path: &Path, skip_existing: bool) -> Result<SummaryRecord, CliError> {
    let done = if skip_existing { existing_indices(path, opts.rank)? } else { BTreeSet::new() };
    let file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(skip_existing)
        .truncate(!skip_existing)
        .open(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let summary = run(opts, &done, |r| write_line(&mut w, r))?;
    w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(summary)
}

pub fn write_line<W: Write + ?Sized, T: serde::Serialize>(w: &mut W, value: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *w, value).map_err(|e| CliError::Io(e.to_string()))?;
    w.write_all(b"\n").map_err(|e| CliError::Io(e.to_string()))
}
