//! CSV / JSON emission shared by the subcommands.

use std::io::Write;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rounds to 12 significant digits so that text output parses back to the
/// identical `f64`.
pub fn quantize(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn quantize_opt(x: Option<f64>) -> Option<f64> {
    x.map(quantize)
}

pub fn write_rows<R: Serialize, W: Write>(rows: &[R], format: Format, out: W) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn read_csv_rows<R: DeserializeOwned, I: std::io::Read>(input: I) -> CliResult<Vec<R>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<Vec<R>, _>>()?)
}

/// Opens `--out` or falls back to stdout.
pub fn sink<'a>(
    path: Option<&std::path::Path>,
    stdout: &'a mut dyn Write,
) -> CliResult<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(stdout),
    })
}
