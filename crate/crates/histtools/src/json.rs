//! Human-readable JSON form of a histogram.
//!
//! ```json
//! {"breaks": [0.0, 1.0, 2.0], "counts": [3, 1], "moment_order": 1,
//!  "moment_sums": [1.5, 1.25], "name": "read_latency"}
//! ```
//!
//! `moment_sums` is order-major (all `S_1`, then all `S_2`, ...) and must hold
//! exactly `moment_order * bins` values. `name` is optional. Floats are
//! written in shortest round-trip form.

use histtools_core::{BinMoments, HistError, Histogram};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("JSON parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid histogram: {0}")]
    Invalid(#[from] HistError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HistogramDoc {
    breaks: Vec<f64>,
    counts: Vec<u64>,
    #[serde(default)]
    moment_order: u8,
    #[serde(default)]
    moment_sums: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl From<&Histogram> for HistogramDoc {
    fn from(h: &Histogram) -> Self {
        HistogramDoc {
            breaks: h.breaks().to_vec(),
            counts: h.counts().to_vec(),
            moment_order: h.moment_order(),
            moment_sums: h.moments().map(|m| m.as_slice().to_vec()).unwrap_or_default(),
            name: h.name().map(str::to_owned),
        }
    }
}

impl TryFrom<HistogramDoc> for Histogram {
    type Error = JsonError;

    fn try_from(doc: HistogramDoc) -> Result<Self, JsonError> {
        let bins = doc.counts.len();
        let expected = doc.moment_order as usize * bins;
        if doc.moment_sums.len() != expected {
            return Err(JsonError::Shape(format!(
                "moment_sums has {} values, moment_order {} x {} bins needs {}",
                doc.moment_sums.len(),
                doc.moment_order,
                bins,
                expected
            )));
        }
        let moments = match doc.moment_order {
            0 => None,
            p => Some(BinMoments::new(p, bins, doc.moment_sums)?),
        };
        Ok(Histogram::from_parts(doc.breaks, doc.counts, moments, doc.name)?)
    }
}

pub fn to_json_value(h: &Histogram) -> serde_json::Value {
    serde_json::to_value(HistogramDoc::from(h)).expect("histogram fields are always serializable")
}

pub fn to_json(h: &Histogram) -> String {
    serde_json::to_string(&HistogramDoc::from(h)).expect("histogram fields are always serializable")
}

pub fn to_json_pretty(h: &Histogram) -> String {
    serde_json::to_string_pretty(&HistogramDoc::from(h)).expect("histogram fields are always serializable")
}

pub fn from_json(text: &str) -> Result<Histogram, JsonError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: HistogramDoc = serde_path_to_error::deserialize(de)
        .map_err(|e| JsonError::Parse { path: e.path().to_string(), message: e.inner().to_string() })?;
    doc.try_into()
}

pub fn from_json_value(value: serde_json::Value) -> Result<Histogram, JsonError> {
    let doc: HistogramDoc = serde_path_to_error::deserialize(value)
        .map_err(|e| JsonError::Parse { path: e.path().to_string(), message: e.inner().to_string() })?;
    doc.try_into()
}
