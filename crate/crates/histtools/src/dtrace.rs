//! Reader for the text DTrace prints for `quantize()`/`lquantize()`
//! aggregations:
//!
//! ```text
//!   bash
//!            value  ------------- Distribution ------------- count
//!                0 |                                         0
//!                1 |@@@@@@@@@@@@@                            41
//!                2 |@@@@                                     12
//! ```
//!
//! A block is an optional key line, a header containing `value`,
//! `Distribution` and `count`, then rows `<integer> |<bar> <count>`. The block
//! ends at the first blank or non-row line.
//!
//! Row `v` with predecessor `u` becomes bin `(u, v]`. The first row's left
//! break mirrors the gap to the second row (`v0 - (v1 - v0)`), or `v0 - 1`
//! for a single-row block.

use std::io::BufRead;

use histtools_core::{HistError, Histogram};

/// Histograms in input order, each with its block key.
pub type Named = Vec<(Option<String>, Histogram)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtraceAggregation {
    pub key: Option<String>,
    pub rows: Vec<(i64, u64)>,
}

impl DtraceAggregation {
    pub fn breaks(&self) -> Vec<f64> {
        let values: Vec<f64> = self.rows.iter().map(|&(v, _)| v as f64).collect();
        let first = match values.as_slice() {
            [v0, v1, ..] => v0 - (v1 - v0),
            [v0] => v0 - 1.0,
            [] => return Vec::new(),
        };
        std::iter::once(first).chain(values).collect()
    }

    pub fn to_histogram(&self) -> Result<Histogram, HistError> {
        let counts = self.rows.iter().map(|&(_, c)| c).collect();
        let h = Histogram::new(self.breaks(), counts)?;
        match &self.key {
            Some(k) => h.with_name(k.clone()),
            None => Ok(h),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based line number.
    pub line: usize,
    pub severity: Severity,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let level = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "line {}: {}: {}", self.line, level, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DtraceParse {
    pub aggregations: Vec<DtraceAggregation>,
    pub diagnostics: Vec<Diagnostic>,
}

impl DtraceParse {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct DtraceError {
    pub line: usize,
    pub message: String,
}

fn is_header(line: &str) -> bool {
    let mut words = line.split_whitespace();
    words.next() == Some("value") && line.contains("Distribution") && line.split_whitespace().last() == Some("count")
}

enum RowParse {
    Row(i64, u64),
    NotARow,
    Malformed(String),
}

fn parse_row(line: &str) -> RowParse {
    let Some((left, right)) = line.split_once('|') else {
        return RowParse::NotARow;
    };
    let value = match left.trim().parse::<i64>() {
        Ok(v) => v,
        Err(_) => return RowParse::Malformed(format!("bucket label `{}` is not an integer", left.trim())),
    };
    let count_text = right.trim_start_matches(['@', ' ']).trim();
    match count_text.parse::<u64>() {
        Ok(c) => RowParse::Row(value, c),
        Err(_) => RowParse::Malformed(format!("count `{count_text}` is not a nonnegative integer")),
    }
}

struct Block {
    key: Option<String>,
    header_line: usize,
    rows: Vec<(i64, u64)>,
    failed: bool,
}

fn finish(block: Block, out: &mut DtraceParse) {
    if block.failed {
        return;
    }
    if block.rows.is_empty() {
        out.diagnostics.push(Diagnostic {
            line: block.header_line,
            severity: Severity::Warning,
            message: "distribution header without rows; block skipped".into(),
        });
        return;
    }
    out.aggregations.push(DtraceAggregation { key: block.key, rows: block.rows });
}

/// Parse every distribution block in `text`. Never fails: problems become
/// diagnostics and the affected block is dropped.
pub fn parse_aggregations(text: &str) -> DtraceParse {
    let mut out = DtraceParse::default();
    let mut block: Option<Block> = None;
    let mut candidate_key: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();

        if let Some(b) = block.as_mut() {
            if trimmed.is_empty() {
                finish(block.take().expect("open block"), &mut out);
                candidate_key = None;
                continue;
            }
            if !b.failed {
                match parse_row(raw) {
                    RowParse::Row(v, c) => {
                        if let Some(&(prev, _)) = b.rows.last() {
                            if v <= prev {
                                out.diagnostics.push(Diagnostic {
                                    line: line_no,
                                    severity: Severity::Error,
                                    message: format!("bucket {v} does not follow {prev}; block dropped"),
                                });
                                b.failed = true;
                                continue;
                            }
                        }
                        b.rows.push((v, c));
                        continue;
                    }
                    RowParse::Malformed(msg) => {
                        out.diagnostics.push(Diagnostic {
                            line: line_no,
                            severity: Severity::Error,
                            message: format!("malformed row: {msg}; block dropped"),
                        });
                        b.failed = true;
                        continue;
                    }
                    RowParse::NotARow => {
                        finish(block.take().expect("open block"), &mut out);
                    }
                }
            } else if raw.contains('|') {
                // rest of a dropped block
                continue;
            } else {
                block = None;
            }
        }

        if trimmed.is_empty() {
            continue;
        }
        if is_header(trimmed) {
            block = Some(Block { key: candidate_key.take(), header_line: line_no, rows: Vec::new(), failed: false });
        } else {
            candidate_key = Some(trimmed.to_owned());
        }
    }
    if let Some(b) = block {
        finish(b, &mut out);
    }
    out
}

/// Parse and convert every block, in input order. Blocks whose breaks cannot
/// form a histogram are reported as errors and skipped.
pub fn parse_dtrace(text: &str) -> (Named, Vec<Diagnostic>) {
    let DtraceParse { aggregations, mut diagnostics } = parse_aggregations(text);
    let mut out = Vec::with_capacity(aggregations.len());
    for agg in aggregations {
        match agg.to_histogram() {
            Ok(h) => out.push((agg.key, h)),
            Err(e) => diagnostics.push(Diagnostic { line: 0, severity: Severity::Error, message: e.to_string() }),
        }
    }
    (out, diagnostics)
}

/// Like [`parse_dtrace`] but the first error diagnostic fails the parse.
pub fn parse_dtrace_strict(text: &str) -> Result<Named, DtraceError> {
    let (hists, diags) = parse_dtrace(text);
    match diags.into_iter().find(|d| d.severity == Severity::Error) {
        Some(d) => Err(DtraceError { line: d.line, message: d.message }),
        None => Ok(hists),
    }
}

pub fn parse_dtrace_reader<R: BufRead>(mut reader: R) -> std::io::Result<(Named, Vec<Diagnostic>)> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    Ok(parse_dtrace(&text))
}
