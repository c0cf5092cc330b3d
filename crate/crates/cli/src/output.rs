use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::args::{Cli, Format};

/// Report body plus the provenance envelope every output carries.
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub result: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn envelope(cli: &Cli, r: &Report, with_result: bool) -> Value {
    let mut v = json!({
        "tool": "shiftlab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": r.command,
        "config": r.config,
    });
    if with_result {
        v["result"] = r.result.clone();
    }
    if !cli.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        v["generated_at"] = json!(secs);
    }
    v
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Sidecar with the envelope next to a CSV file.
pub fn meta_path(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn emit(cli: &Cli, r: &Report) -> Result<()> {
    let path = cli.output.as_deref();
    match cli.format {
        Format::Json => {
            let mut out = sink(path)?;
            serde_json::to_writer_pretty(&mut out, &envelope(cli, r, true))?;
            writeln!(out)?;
            out.flush()?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink(path)?);
            w.write_record(&r.header)?;
            for row in &r.rows {
                w.write_record(row)?;
            }
            w.flush()?;
            if let Some(p) = path {
                let meta = serde_json::to_string_pretty(&envelope(cli, r, false))?;
                fs::write(meta_path(p), meta + "\n")?;
            }
        }
    }
    Ok(())
}
