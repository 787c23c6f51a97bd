//! Reading and writing histogram files. Binary records start with `HGT1`;
//! anything else is parsed as JSON.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use histtools_core::{wire, Histogram};

use crate::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Binary,
    Json,
}

pub fn decode_any(bytes: &[u8]) -> Result<Histogram> {
    if bytes.starts_with(&wire::MAGIC) {
        Ok(wire::decode(bytes)?)
    } else {
        let text = std::str::from_utf8(bytes).context("not a binary record and not UTF-8 JSON")?;
        Ok(json::from_json(text)?)
    }
}

pub fn read_histogram(path: &Path) -> Result<Histogram> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    decode_any(&bytes).with_context(|| format!("decoding {}", path.display()))
}

pub fn encode_as(h: &Histogram, format: Format) -> Vec<u8> {
    match format {
        Format::Binary => wire::encode(h),
        Format::Json => {
            let mut s = json::to_json(h);
            s.push('\n');
            s.into_bytes()
        }
    }
}

pub fn write_histogram(path: &Path, h: &Histogram, format: Format) -> Result<()> {
    fs::write(path, encode_as(h, format)).with_context(|| format!("writing {}", path.display()))
}

/// One finite real per line; blank lines are ignored.
pub fn parse_samples(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let x: f64 = t.parse().with_context(|| format!("line {}: `{t}` is not a number", i + 1))?;
        anyhow::ensure!(x.is_finite(), "line {}: sample must be finite", i + 1);
        out.push(x);
    }
    Ok(out)
}
