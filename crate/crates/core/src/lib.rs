//! Moment-annotated histograms and the information they lose.
//!
//! A [`Histogram`] keeps fixed breaks, integer counts and optionally the raw
//! power sums of the samples in each bin, so histograms with identical
//! breaks merge by plain addition. The [`bounds`] module gives the tightest
//! pointwise CDF envelopes consistent with a bin's count and moments, and
//! [`emdcc`] measures the area between them: the EMDCC information-loss
//! metric.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod emdcc;
pub mod error;
pub mod histogram;
pub mod ingest;
pub mod quadrature;
pub mod wire;

pub use bounds::{
    bounds_mean, bounds_mean_var, bounds_no_moment, bounds_pth_moment, BinConstraint, BoundPoint, CdfBounds,
    Constraint, Regime,
};
pub use emdcc::{
    emdcc_histogram, emdcc_histogram_with, emdcc_mean_closed, emdcc_mean_var_closed, information_gain, lambda,
    EmdccMethod, EmdccReport, HistogramEnvelope,
};
pub use error::{HistError, WireError};
pub use histogram::{BinMoments, Ecdf, Histogram};
pub use ingest::{map_emit, reduce_pairs, simulate_mapreduce, BucketScheme, Emission, MapReduceMethod};
