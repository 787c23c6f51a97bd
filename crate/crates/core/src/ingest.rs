//! Shared bucket schemes and an in-process model of the two MapReduce ways
//! of producing a histogram: mappers emitting whole partial histograms, or
//! mappers emitting `(bucket, 1)` pairs for reducers to sum.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{HistError, Result};
use crate::histogram::{bin_index, validate_breaks, Histogram};

/// Bin-boundary rule every producer must agree on.
#[derive(Debug, Clone, PartialEq)]
pub enum BucketScheme {
    Explicit(Vec<f64>),
    /// `count` bins of `width` starting at `start`.
    FixedWidth {
        start: f64,
        width: f64,
        count: usize,
    },
    /// Breaks `2^k` for `k` in `min_exponent..=max_exponent`.
    PowerOfTwo {
        min_exponent: i32,
        max_exponent: i32,
    },
}

impl BucketScheme {
    pub fn breaks(&self) -> Result<Vec<f64>> {
        let breaks = match self {
            BucketScheme::Explicit(b) => b.clone(),
            BucketScheme::FixedWidth { start, width, count } => {
                if *count == 0 || !(*width > 0.0) {
                    return Err(HistError::InvalidBreaks(format!(
                        "fixed-width scheme needs count >= 1 and width > 0, got {count} x {width}"
                    )));
                }
                (0..=*count).map(|i| start + width * i as f64).collect()
            }
            BucketScheme::PowerOfTwo { min_exponent, max_exponent } => {
                if min_exponent >= max_exponent {
                    return Err(HistError::InvalidBreaks(format!(
                        "power-of-two scheme needs min < max exponent, got {min_exponent}..{max_exponent}"
                    )));
                }
                (*min_exponent..=*max_exponent).map(|k| libm::ldexp(1.0, k)).collect()
            }
        };
        validate_breaks(&breaks)?;
        Ok(breaks)
    }
}

/// Output of one mapper in the key-value method.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Emission {
    /// One `(bucket index, 1)` pair per in-range sample.
    pub pairs: Vec<(usize, u64)>,
    /// Samples no bucket accepts, kept under a separate overflow key.
    pub overflow: Vec<f64>,
}

impl Emission {
    pub fn overflow_count(&self) -> usize {
        self.overflow.len()
    }
}

pub fn map_emit(samples: &[f64], scheme: &BucketScheme) -> Result<Emission> {
    let breaks = scheme.breaks()?;
    Ok(map_emit_breaks(samples, &breaks))
}

fn map_emit_breaks(samples: &[f64], breaks: &[f64]) -> Emission {
    let mut out = Emission::default();
    for &x in samples {
        match bin_index(breaks, x) {
            Some(i) => out.pairs.push((i, 1)),
            None => out.overflow.push(x),
        }
    }
    out
}

/// Sum `(bucket, count)` pairs into a histogram over the scheme's breaks.
pub fn reduce_pairs(pairs: &[(usize, u64)], scheme: &BucketScheme) -> Result<Histogram> {
    reduce_pairs_breaks(pairs, scheme.breaks()?)
}

fn reduce_pairs_breaks(pairs: &[(usize, u64)], breaks: Vec<f64>) -> Result<Histogram> {
    let bins = breaks.len() - 1;
    let mut counts = alloc::vec![0u64; bins];
    for &(i, c) in pairs {
        let slot = counts
            .get_mut(i)
            .ok_or_else(|| HistError::Shape(format!("bucket index {i} outside scheme with {bins} bins")))?;
        *slot = slot.checked_add(c).ok_or_else(|| HistError::InvalidContent("bucket count overflows u64".into()))?;
    }
    Histogram::new(breaks, counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapReduceMethod {
    /// Each mapper builds a partial histogram; the reducer merges them.
    MapperHistograms,
    /// Each mapper emits `(bucket, 1)`; the reducer sums per bucket.
    BucketPairs,
}

/// Contiguous index ranges splitting `n` items into `shards` chunks whose
/// sizes differ by at most one.
pub fn shard_ranges(n: usize, shards: usize) -> Vec<core::ops::Range<usize>> {
    let base = n / shards;
    let extra = n % shards;
    let mut start = 0;
    (0..shards)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// Build one partial histogram per shard (method 1).
pub fn map_partial(chunk: &[f64], breaks: &[f64], moment_order: u8) -> Result<Histogram> {
    Histogram::build(chunk, breaks, moment_order)
}

/// Fold partial histograms left to right.
pub fn reduce_partials(partials: Vec<Histogram>) -> Result<Histogram> {
    let mut iter = partials.into_iter();
    let first = iter.next().ok_or_else(|| HistError::Shape("no partial histograms".into()))?;
    iter.try_fold(first, |acc, h| acc.merge(&h))
}

pub fn check_mapreduce_args(shards: usize, method: MapReduceMethod, moment_order: u8) -> Result<()> {
    if shards == 0 {
        return Err(HistError::Shape("need at least one shard".into()));
    }
    if method == MapReduceMethod::BucketPairs && moment_order > 0 {
        return Err(HistError::Unsupported(
            "key-value emission carries counts only; moments need mapper-side histograms".into(),
        ));
    }
    Ok(())
}

/// Run either method over `samples` split into `shards` contiguous chunks.
/// The result equals `Histogram::build(samples, breaks, moment_order)`.
pub fn simulate_mapreduce(
    samples: &[f64],
    scheme: &BucketScheme,
    shards: usize,
    method: MapReduceMethod,
    moment_order: u8,
) -> Result<Histogram> {
    check_mapreduce_args(shards, method, moment_order)?;
    let breaks = scheme.breaks()?;
    let ranges = shard_ranges(samples.len(), shards);
    match method {
        MapReduceMethod::MapperHistograms => {
            let partials = ranges
                .into_iter()
                .map(|r| map_partial(&samples[r], &breaks, moment_order))
                .collect::<Result<Vec<_>>>()?;
            reduce_partials(partials)
        }
        MapReduceMethod::BucketPairs => {
            let mut pairs = Vec::with_capacity(samples.len());
            for r in ranges {
                let emission = map_emit_breaks(&samples[r], &breaks);
                if let Some(&value) = emission.overflow.first() {
                    return Err(HistError::OutOfRange { value, lo: breaks[0], hi: breaks[breaks.len() - 1] });
                }
                pairs.extend(emission.pairs);
            }
            reduce_pairs_breaks(&pairs, breaks)
        }
    }
}
