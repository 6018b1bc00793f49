//! Plot-ready emission of sweep results.
//!
//! CSV: header `scenario,x,rx_power_dbm,sinr_db,sinr_db_stddev`, one line per
//! row, six fractional digits. JSON: an array of result objects with `label`,
//! `variable`, `metadata` and `rows` (each row `[x, rx_power_dbm, sinr_db,
//! sinr_db_stddev]` at full precision).

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sweep::SweepResult;

pub const CSV_HEADER: [&str; 5] = ["scenario", "x", "rx_power_dbm", "sinr_db", "sinr_db_stddev"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

pub fn emit_results(
    results: &[SweepResult],
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<()> {
    if results.is_empty() {
        return Err(Error::invalid("no results to emit"));
    }
    match format {
        OutputFormat::Csv => write_csv(results, out),
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, results)
                .map_err(|e| Error::Io(e.to_string()))?;
            out.write_all(b"\n")?;
            Ok(())
        }
    }?;
    out.flush()?;
    Ok(())
}

fn write_csv(results: &[SweepResult], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for res in results {
        for row in &res.rows {
            w.write_record([
                res.scenario_label.clone(),
                format!("{:.6}", row.x),
                format!("{:.6}", row.rx_power_dbm),
                format!("{:.6}", row.sinr_db),
                format!("{:.6}", row.sinr_db_stddev),
            ])
            .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads back a JSON document written by [`emit_results`].
pub fn read_json(input: impl Read) -> Result<Vec<SweepResult>> {
    serde_json::from_reader(input).map_err(|e| Error::Io(e.to_string()))
}
