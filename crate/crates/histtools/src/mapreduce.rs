//! Threaded version of the in-process MapReduce model. One scoped thread per
//! shard; the reducer folds results in shard order, so the output is
//! identical to the sequential model for the same shard count.

use std::thread;

use histtools_core::ingest::{check_mapreduce_args, map_partial, reduce_partials, shard_ranges};
use histtools_core::{map_emit, reduce_pairs, BucketScheme, HistError, Histogram, MapReduceMethod};

pub fn simulate_mapreduce_parallel(
    samples: &[f64],
    scheme: &BucketScheme,
    shards: usize,
    method: MapReduceMethod,
    moment_order: u8,
) -> Result<Histogram, HistError> {
    check_mapreduce_args(shards, method, moment_order)?;
    let breaks = scheme.breaks()?;
    let ranges = shard_ranges(samples.len(), shards);
    match method {
        MapReduceMethod::MapperHistograms => {
            let partials = thread::scope(|s| {
                let handles: Vec<_> = ranges
                    .into_iter()
                    .map(|r| {
                        let chunk = &samples[r];
                        let breaks = &breaks;
                        s.spawn(move || map_partial(chunk, breaks, moment_order))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("mapper panicked")).collect::<Result<Vec<_>, _>>()
            })?;
            reduce_partials(partials)
        }
        MapReduceMethod::BucketPairs => {
            let emissions = thread::scope(|s| {
                let handles: Vec<_> = ranges
                    .into_iter()
                    .map(|r| {
                        let chunk = &samples[r];
                        s.spawn(move || map_emit(chunk, scheme))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("mapper panicked")).collect::<Result<Vec<_>, _>>()
            })?;
            let mut pairs = Vec::with_capacity(samples.len());
            for e in emissions {
                if let Some(&value) = e.overflow.first() {
                    return Err(HistError::OutOfRange { value, lo: breaks[0], hi: breaks[breaks.len() - 1] });
                }
                pairs.extend(e.pairs);
            }
            reduce_pairs(&pairs, scheme)
        }
    }
}
