//! File formats, DTrace import, threaded ingestion and the synthetic gain
//! study on top of `histtools-core`.

pub mod breaks;
pub mod dtrace;
pub mod io;
pub mod json;
pub mod mapreduce;
pub mod study;

pub use histtools_core as core;
