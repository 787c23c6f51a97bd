//! Synthetic per-user read-size population for the information-gain study.
//!
//! Each user is a distribution of `log2(read size)` on `[0, 24]`: a few point
//! masses at whole powers of two (fixed-size reads) mixed with Beta-shaped
//! smooth components. The population is synthetic; it reproduces the shape
//! of a gain distribution, not any particular measured one.
//!
//! For each user three numbers are reported: the EMDCC of the 24-bin
//! histogram with bin means, the EMDCC of a 48-bin plain histogram over the
//! same span, and the information gain of the former.

use std::io::Write;
use std::thread;

use histtools_core::{emdcc_histogram, information_gain, HistError, Histogram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::Serialize;

pub const LOG_SPAN: f64 = 24.0;
pub const COARSE_BINS: usize = 24;
pub const FINE_BINS: usize = 48;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserGain {
    pub user: usize,
    pub samples: usize,
    pub point_mass_fraction: f64,
    pub emdcc_annotated: f64,
    pub emdcc_plain: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudySummary {
    pub users: usize,
    pub seed: u64,
    pub min: f64,
    pub q10: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q90: f64,
    pub max: f64,
    pub frac_below_1: f64,
    pub frac_above_2_5: f64,
    pub frac_above_10: f64,
    /// `1 / (2 ln 2)`, the smallest gain any mean-annotated layout can have.
    pub gain_floor: f64,
}

fn lin_breaks(bins: usize) -> Vec<f64> {
    (0..=bins).map(|i| LOG_SPAN * i as f64 / bins as f64).collect()
}

fn user_rng(seed: u64, user: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(user as u64);
    rng
}

/// Draw the `log2` read sizes of one user.
pub fn user_samples(seed: u64, user: usize) -> (Vec<f64>, f64) {
    let mut rng = user_rng(seed, user);
    let n = rng.random_range(500..=5000usize);
    // U-shaped: many users are mostly fixed-size or mostly smooth
    let point_frac: f64 = Beta::new(0.6f64, 0.6).expect("valid").sample(&mut rng).min(0.97);

    let n_points = rng.random_range(1..=3usize);
    let sizes: Vec<f64> = (0..n_points).map(|_| f64::from(rng.random_range(9..=20u32))).collect();
    let n_smooth = rng.random_range(1..=2usize);
    let smooth: Vec<(f64, f64, Beta<f64>)> = (0..n_smooth)
        .map(|_| {
            let center = rng.random_range(4.0..20.0);
            let half = rng.random_range(0.5..4.0);
            let a = rng.random_range(0.8..6.0);
            let b = rng.random_range(0.8..6.0);
            (center, half, Beta::new(a, b).expect("positive shape"))
        })
        .collect();

    let mut out = Vec::with_capacity(n);
    let mut fixed = 0usize;
    for _ in 0..n {
        if rng.random::<f64>() < point_frac {
            out.push(sizes[rng.random_range(0..sizes.len())]);
            fixed += 1;
        } else {
            let (c, h, beta) = &smooth[rng.random_range(0..smooth.len())];
            let x = c - h + 2.0 * h * beta.sample(&mut rng);
            out.push(x.clamp(0.0, LOG_SPAN));
        }
    }
    (out, fixed as f64 / n as f64)
}

pub fn evaluate_user(seed: u64, user: usize) -> Result<UserGain, HistError> {
    let (samples, point_mass_fraction) = user_samples(seed, user);
    let annotated = Histogram::build(&samples, &lin_breaks(COARSE_BINS), 1)?;
    let plain = Histogram::build(&samples, &lin_breaks(FINE_BINS), 0)?;
    let span = Some((0.0, LOG_SPAN));
    Ok(UserGain {
        user,
        samples: samples.len(),
        point_mass_fraction,
        emdcc_annotated: emdcc_histogram(&annotated, span)?.total,
        emdcc_plain: emdcc_histogram(&plain, span)?.total,
        gain: information_gain(&annotated)?,
    })
}

/// Evaluate `users` users, spread over the available cores. Each user has
/// its own random stream so the result does not depend on the thread count.
pub fn run_gain_study(users: usize, seed: u64) -> Result<Vec<UserGain>, HistError> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(users.max(1));
    let ids: Vec<usize> = (0..users).collect();
    let chunk = users.div_ceil(workers).max(1);
    let parts = thread::scope(|s| {
        let handles: Vec<_> = ids
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(|&u| evaluate_user(seed, u)).collect::<Result<Vec<_>, _>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("study worker panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi || sorted[hi] == sorted[lo] {
        return sorted[lo];
    }
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(rows: &[UserGain], seed: u64) -> Option<StudySummary> {
    if rows.is_empty() {
        return None;
    }
    let mut g: Vec<f64> = rows.iter().map(|r| r.gain).collect();
    g.sort_by(f64::total_cmp);
    let n = g.len() as f64;
    let frac = |pred: &dyn Fn(f64) -> bool| g.iter().filter(|&&x| pred(x)).count() as f64 / n;
    Some(StudySummary {
        users: rows.len(),
        seed,
        min: g[0],
        q10: quantile(&g, 0.10),
        q25: quantile(&g, 0.25),
        median: quantile(&g, 0.5),
        q75: quantile(&g, 0.75),
        q90: quantile(&g, 0.90),
        max: g[g.len() - 1],
        frac_below_1: frac(&|x| x < 1.0),
        frac_above_2_5: frac(&|x| x > 2.5),
        frac_above_10: frac(&|x| x > 10.0),
        gain_floor: 1.0 / (2.0 * std::f64::consts::LN_2),
    })
}

pub const CSV_HEADER: &str = "user,samples,point_mass_fraction,emdcc_h24_1,emdcc_h48_0,gain";

pub fn write_csv<W: Write>(mut w: W, rows: &[UserGain]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.user, r.samples, r.point_mass_fraction, r.emdcc_annotated, r.emdcc_plain, r.gain
        )?;
    }
    Ok(())
}
