use alloc::string::String;

/// Errors raised by histogram construction and the statistics built on it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HistError {
    #[error("invalid breaks: {0}")]
    InvalidBreaks(String),
    #[error("sample {value} is outside the break range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("incompatible breaks: first difference at position {position}")]
    IncompatibleBreaks { position: usize },
    #[error("incompatible moment annotations: order {left:?} vs {right:?}")]
    IncompatibleAnnotation { left: Option<u8>, right: Option<u8> },
    #[error("histogram is empty")]
    EmptyHistogram,
    #[error("value {0} outside the domain [0, 1]")]
    Domain(f64),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid histogram content: {0}")]
    InvalidContent(String),
    #[error(
        "infeasible moments: mean {mean}, variance {variance} (need 0 <= variance <= mean*(1-mean) on the unit bin)"
    )]
    InfeasibleMoments { mean: f64, variance: f64 },
    #[error("unsupported layout: {0}")]
    UnsupportedLayout(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

/// Binary codec failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WireError {
    #[error("format error: {0}")]
    Format(String),
    #[error("truncated input: needed more bytes at offset {offset}")]
    Truncated { offset: usize },
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Corrupted { stored: u32, computed: u32 },
    #[error("invalid content: {0}")]
    InvalidContent(String),
}

pub type Result<T, E = HistError> = core::result::Result<T, E>;
