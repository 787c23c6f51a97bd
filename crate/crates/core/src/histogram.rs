//! The histogram value type: fixed breaks, integer counts and optional
//! per-bin raw power sums.
//!
//! Bins use the `(a, b]` convention with the first bin closed on the left,
//! so a sample equal to an interior break belongs to the bin on its left.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{HistError, Result};

/// Per-bin raw power sums `S_k = sum(x^k)` for `k = 1..=order`.
///
/// Stored order-major: all `S_1` values, then all `S_2` values, and so on.
/// Keeping sums rather than means makes merging plain addition.
#[derive(Debug, Clone, PartialEq)]
pub struct BinMoments {
    order: u8,
    bins: usize,
    sums: Vec<f64>,
}

impl BinMoments {
    pub fn new(order: u8, bins: usize, sums: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(HistError::Shape("moment order must be at least 1".into()));
        }
        if sums.len() != order as usize * bins {
            return Err(HistError::Shape(format!(
                "expected {} power sums for order {} over {} bins, got {}",
                order as usize * bins,
                order,
                bins,
                sums.len()
            )));
        }
        if let Some(bad) = sums.iter().find(|s| !s.is_finite()) {
            return Err(HistError::InvalidContent(format!("non-finite power sum {bad}")));
        }
        Ok(BinMoments { order, bins, sums })
    }

    pub fn zeros(order: u8, bins: usize) -> Self {
        BinMoments { order, bins, sums: vec![0.0; order as usize * bins] }
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    /// `S_k` for `bin`, with `k` in `1..=order`.
    pub fn sum(&self, bin: usize, k: u8) -> f64 {
        debug_assert!(k >= 1 && k <= self.order);
        self.sums[(k as usize - 1) * self.bins + bin]
    }

    /// All sums, order-major.
    pub fn as_slice(&self) -> &[f64] {
        &self.sums
    }

    fn sum_mut(&mut self, bin: usize, k: u8) -> &mut f64 {
        &mut self.sums[(k as usize - 1) * self.bins + bin]
    }

    fn select(&self, bins: core::ops::Range<usize>) -> BinMoments {
        let mut sums = Vec::with_capacity(self.order as usize * bins.len());
        for k in 1..=self.order {
            for b in bins.clone() {
                sums.push(self.sum(b, k));
            }
        }
        BinMoments { order: self.order, bins: bins.len(), sums }
    }
}

/// A fixed-boundary histogram, optionally annotated with per-bin moments.
///
/// All operations return new values; a `Histogram` is never mutated after
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    breaks: Vec<f64>,
    counts: Vec<u64>,
    moments: Option<BinMoments>,
    name: Option<String>,
}

pub(crate) fn validate_breaks(breaks: &[f64]) -> Result<()> {
    if breaks.len() < 2 {
        return Err(HistError::InvalidBreaks(format!("need at least two breaks, got {}", breaks.len())));
    }
    if let Some((i, b)) = breaks.iter().enumerate().find(|(_, b)| !b.is_finite()) {
        return Err(HistError::InvalidBreaks(format!("break {i} is not finite ({b})")));
    }
    if let Some(i) = breaks.windows(2).position(|w| w[0] >= w[1]) {
        return Err(HistError::InvalidBreaks(format!(
            "breaks not strictly increasing at position {}: {} >= {}",
            i + 1,
            breaks[i],
            breaks[i + 1]
        )));
    }
    Ok(())
}

/// Index of the `(a, b]` bin holding `x`, first bin closed. `None` when `x`
/// falls outside the break range or is NaN.
pub(crate) fn bin_index(breaks: &[f64], x: f64) -> Option<usize> {
    let lo = breaks[0];
    let hi = breaks[breaks.len() - 1];
    if !(x >= lo && x <= hi) {
        return None;
    }
    let first_ge = breaks.partition_point(|&b| b < x);
    Some(first_ge.saturating_sub(1))
}

/// Smallest and largest value of `t^k` for `t` in `[a, b]`.
pub(crate) fn power_range(a: f64, b: f64, k: u8) -> (f64, f64) {
    let pa = powu(a, k);
    let pb = powu(b, k);
    if k.is_multiple_of(2) && a < 0.0 && b > 0.0 {
        (0.0, if pa > pb { pa } else { pb })
    } else if pa <= pb {
        (pa, pb)
    } else {
        (pb, pa)
    }
}

pub(crate) fn powu(x: f64, k: u8) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

impl Histogram {
    pub fn new(breaks: Vec<f64>, counts: Vec<u64>) -> Result<Self> {
        Self::from_parts(breaks, counts, None, None)
    }

    /// Assemble a histogram from raw parts, checking every invariant.
    pub fn from_parts(
        breaks: Vec<f64>,
        counts: Vec<u64>,
        moments: Option<BinMoments>,
        name: Option<String>,
    ) -> Result<Self> {
        validate_breaks(&breaks)?;
        let bins = breaks.len() - 1;
        if counts.len() != bins {
            return Err(HistError::Shape(format!(
                "{} breaks need {} counts, got {}",
                breaks.len(),
                bins,
                counts.len()
            )));
        }
        counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| HistError::InvalidContent("total count overflows u64".into()))?;
        if let Some(m) = &moments {
            if m.bins != bins {
                return Err(HistError::Shape(format!("moments cover {} bins, histogram has {}", m.bins, bins)));
            }
            check_moment_consistency(&breaks, &counts, m)?;
        }
        if let Some(n) = &name {
            if n.len() > u16::MAX as usize {
                return Err(HistError::InvalidContent(format!(
                    "metric name is {} bytes, limit is {}",
                    n.len(),
                    u16::MAX
                )));
            }
        }
        Ok(Histogram { breaks, counts, moments, name })
    }

    /// All-zero histogram over `breaks`, annotated when `moment_order >= 1`.
    pub fn empty(breaks: Vec<f64>, moment_order: u8) -> Result<Self> {
        validate_breaks(&breaks)?;
        let bins = breaks.len() - 1;
        let moments = (moment_order > 0).then(|| BinMoments::zeros(moment_order, bins));
        Ok(Histogram { breaks, counts: vec![0; bins], moments, name: None })
    }

    /// Tally `samples` into `breaks`. With `moment_order >= 1` the raw power
    /// sums are accumulated from the samples in input order.
    pub fn build(samples: &[f64], breaks: &[f64], moment_order: u8) -> Result<Self> {
        let mut h = Self::empty(breaks.to_vec(), moment_order)?;
        for &x in samples {
            let bin = bin_index(&h.breaks, x).ok_or(HistError::OutOfRange {
                value: x,
                lo: h.breaks[0],
                hi: h.breaks[h.breaks.len() - 1],
            })?;
            h.counts[bin] += 1;
            if let Some(m) = &mut h.moments {
                let mut p = x;
                for k in 1..=m.order {
                    *m.sum_mut(bin, k) += p;
                    p *= x;
                }
            }
        }
        Ok(h)
    }

    pub fn with_name(self, name: impl Into<String>) -> Result<Self> {
        let Histogram { breaks, counts, moments, .. } = self;
        Self::from_parts(breaks, counts, moments, Some(name.into()))
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn moments(&self) -> Option<&BinMoments> {
        self.moments.as_ref()
    }

    pub fn moment_order(&self) -> u8 {
        self.moments.as_ref().map_or(0, |m| m.order)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        (self.breaks[bin], self.breaks[bin + 1])
    }

    /// Total number of observations.
    pub fn count(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Mean of the samples in `bin`, if annotated and nonempty.
    pub fn bin_mean(&self, bin: usize) -> Option<f64> {
        let m = self.moments.as_ref()?;
        let n = self.counts[bin];
        (n > 0).then(|| m.sum(bin, 1) / n as f64)
    }

    /// Population variance of the samples in `bin`, if order >= 2 and nonempty.
    pub fn bin_variance(&self, bin: usize) -> Option<f64> {
        let m = self.moments.as_ref().filter(|m| m.order >= 2)?;
        let n = self.counts[bin] as f64;
        if n == 0.0 {
            return None;
        }
        let mean = m.sum(bin, 1) / n;
        Some(m.sum(bin, 2) / n - mean * mean)
    }

    /// Elementwise sum of two histograms over identical breaks.
    ///
    /// Power sums are added left operand first. The name survives only when
    /// both sides carry the same one.
    pub fn merge(&self, other: &Histogram) -> Result<Histogram> {
        if self.breaks.len() != other.breaks.len() {
            let position = self.breaks.len().min(other.breaks.len());
            return Err(HistError::IncompatibleBreaks { position });
        }
        if let Some(position) = self.breaks.iter().zip(&other.breaks).position(|(a, b)| a.to_bits() != b.to_bits()) {
            return Err(HistError::IncompatibleBreaks { position });
        }
        let moments = match (&self.moments, &other.moments) {
            (None, None) => None,
            (Some(a), Some(b)) if a.order == b.order => {
                let sums = a.sums.iter().zip(&b.sums).map(|(x, y)| x + y).collect();
                Some(BinMoments { order: a.order, bins: a.bins, sums })
            }
            (a, b) => {
                return Err(HistError::IncompatibleAnnotation {
                    left: a.as_ref().map(|m| m.order),
                    right: b.as_ref().map(|m| m.order),
                })
            }
        };
        let mut counts = Vec::with_capacity(self.counts.len());
        for (a, b) in self.counts.iter().zip(&other.counts) {
            counts
                .push(a.checked_add(*b).ok_or_else(|| HistError::InvalidContent("merged count overflows u64".into()))?);
        }
        counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| HistError::InvalidContent("merged total overflows u64".into()))?;
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) if a == b => Some(a.clone()),
            _ => None,
        };
        Ok(Histogram { breaks: self.breaks.clone(), counts, moments, name })
    }

    /// Drop leading and trailing zero-count bins.
    ///
    /// An all-zero histogram collapses to one empty bin spanning the
    /// original range.
    pub fn trim(&self) -> Histogram {
        let first = self.counts.iter().position(|&c| c > 0);
        let last = self.counts.iter().rposition(|&c| c > 0);
        let (first, last) = match (first, last) {
            (Some(f), Some(l)) => (f, l),
            _ => {
                let breaks = vec![self.breaks[0], self.breaks[self.breaks.len() - 1]];
                return Histogram {
                    breaks,
                    counts: vec![0],
                    moments: self.moments.as_ref().map(|m| BinMoments::zeros(m.order, 1)),
                    name: self.name.clone(),
                };
            }
        };
        Histogram {
            breaks: self.breaks[first..=last + 1].to_vec(),
            counts: self.counts[first..=last].to_vec(),
            moments: self.moments.as_ref().map(|m| m.select(first..last + 1)),
            name: self.name.clone(),
        }
    }

    /// Merge every run of `factor` adjacent bins.
    pub fn coalesce(&self, factor: usize) -> Result<Histogram> {
        if factor < 2 {
            return Err(HistError::Shape(format!("coalesce factor must be >= 2, got {factor}")));
        }
        let bins = self.bins();
        if !bins.is_multiple_of(factor) {
            return Err(HistError::Shape(format!("{bins} bins are not divisible by {factor}")));
        }
        let out_bins = bins / factor;
        let breaks = self.breaks.iter().step_by(factor).copied().collect();
        let counts = self.counts.chunks(factor).map(|c| c.iter().sum()).collect();
        let moments = self.moments.as_ref().map(|m| {
            let mut out = BinMoments::zeros(m.order, out_bins);
            for k in 1..=m.order {
                for b in 0..bins {
                    *out.sum_mut(b / factor, k) += m.sum(b, k);
                }
            }
            out
        });
        Ok(Histogram { breaks, counts, moments, name: self.name.clone() })
    }

    /// Cumulative fraction at each right break: `C_1..C_B`.
    fn cumulative_fractions(&self) -> Result<Vec<f64>> {
        let total = self.count();
        if total == 0 {
            return Err(HistError::EmptyHistogram);
        }
        let mut cum = 0u64;
        Ok(self
            .counts
            .iter()
            .map(|&c| {
                cum += c;
                cum as f64 / total as f64
            })
            .collect())
    }

    /// Mean of the underlying data. Exact (`sum S_1 / n`) when annotated,
    /// otherwise the count-weighted bin midpoint.
    pub fn approx_mean(&self) -> Result<f64> {
        let total = self.count();
        if total == 0 {
            return Err(HistError::EmptyHistogram);
        }
        let weighted: f64 = match &self.moments {
            Some(m) => (0..self.bins()).map(|b| m.sum(b, 1)).sum(),
            None => self
                .counts
                .iter()
                .enumerate()
                .map(|(i, &c)| 0.5 * (self.breaks[i] + self.breaks[i + 1]) * c as f64)
                .sum(),
        };
        Ok(weighted / total as f64)
    }

    /// Quantiles by linear interpolation inside the bin where the cumulative
    /// fraction crosses `q`.
    ///
    /// `q = 0` gives the first break. `q = 1` gives the right edge of the last
    /// bin holding data, not the last break.
    pub fn approx_quantile(&self, qs: &[f64]) -> Result<Vec<f64>> {
        if let Some(&bad) = qs.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(HistError::Domain(bad));
        }
        let cum = self.cumulative_fractions()?;
        Ok(qs
            .iter()
            .map(|&q| {
                if q == 0.0 {
                    return self.breaks[0];
                }
                let i = cum.partition_point(|&c| c < q);
                let lo_frac = if i == 0 { 0.0 } else { cum[i - 1] };
                let (a, b) = self.bin_edges(i);
                let t = (q - lo_frac) / (cum[i] - lo_frac);
                if t >= 1.0 {
                    b
                } else {
                    (a + t * (b - a)).min(b)
                }
            })
            .collect())
    }

    /// Piecewise cumulative curve with knots at the breaks.
    pub fn to_ecdf(&self) -> Result<Ecdf> {
        let cum = self.cumulative_fractions()?;
        let mut probs = Vec::with_capacity(cum.len() + 1);
        probs.push(0.0);
        probs.extend(cum);
        Ok(Ecdf { knots: self.breaks.clone(), probs })
    }
}

fn check_moment_consistency(breaks: &[f64], counts: &[u64], m: &BinMoments) -> Result<()> {
    for (bin, &n) in counts.iter().enumerate() {
        let (a, b) = (breaks[bin], breaks[bin + 1]);
        for k in 1..=m.order {
            let s = m.sum(bin, k);
            if n == 0 {
                if s != 0.0 {
                    return Err(HistError::InvalidContent(format!("bin {bin} is empty but S_{k} = {s}")));
                }
                continue;
            }
            let (lo, hi) = power_range(a, b, k);
            let n = n as f64;
            let scale = n * lo.abs().max(hi.abs());
            let tol = 1e-9 * scale;
            if s < n * lo - tol || s > n * hi + tol {
                return Err(HistError::InvalidContent(format!(
                    "bin {bin}: S_{k} = {s} outside [{}, {}]",
                    n * lo,
                    n * hi
                )));
            }
        }
    }
    Ok(())
}

/// Cumulative curve recovered from a histogram: `probs[i]` is the fraction of
/// observations at or below `knots[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    knots: Vec<f64>,
    probs: Vec<f64>,
}

impl Ecdf {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Right-continuous step evaluation.
    pub fn step(&self, x: f64) -> f64 {
        let i = self.knots.partition_point(|&k| k <= x);
        if i == 0 {
            0.0
        } else {
            self.probs[i - 1]
        }
    }

    /// Linear interpolation between knots; 0 left of the first knot and 1
    /// right of the last.
    pub fn interpolate(&self, x: f64) -> f64 {
        let last = self.knots.len() - 1;
        if x <= self.knots[0] {
            return if x < self.knots[0] { 0.0 } else { self.probs[0] };
        }
        if x >= self.knots[last] {
            return self.probs[last];
        }
        let i = self.knots.partition_point(|&k| k <= x);
        let (x0, x1) = (self.knots[i - 1], self.knots[i]);
        let (p0, p1) = (self.probs[i - 1], self.probs[i]);
        p0 + (x - x0) / (x1 - x0) * (p1 - p0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_breaks(n: usize) -> Vec<f64> {
        (0..=n).map(|i| i as f64).collect()
    }

    #[test]
    fn build_matches_r_hist_example() {
        let h = Histogram::build(&[1.0, 2.0, 3.0], &unit_breaks(9), 0).unwrap();
        assert_eq!(h.counts(), &[1, 1, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(h.count(), 3);
    }

    #[test]
    fn build_empty_with_moments() {
        let h = Histogram::build(&[], &[0.0, 1.0], 2).unwrap();
        assert_eq!(h.counts(), &[0]);
        assert_eq!(h.moments().unwrap().as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn build_exact_first_sum() {
        let h = Histogram::build(&[0.25, 0.75], &[0.0, 1.0], 1).unwrap();
        assert_eq!(h.counts(), &[2]);
        assert_eq!(h.moments().unwrap().sum(0, 1), 1.0);
    }

    #[test]
    fn first_bin_is_closed_interior_breaks_go_left() {
        let h = Histogram::build(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0], 0).unwrap();
        assert_eq!(h.counts(), &[2, 1]);
    }

    #[test]
    fn build_rejects_out_of_range_and_bad_breaks() {
        let err = Histogram::build(&[5.5], &[0.0, 1.0], 0).unwrap_err();
        assert!(matches!(err, HistError::OutOfRange { value, .. } if value == 5.5));
        let err = Histogram::build(&[f64::NAN], &[0.0, 1.0], 0).unwrap_err();
        assert!(matches!(err, HistError::OutOfRange { .. }));
        assert!(matches!(Histogram::build(&[], &[0.0, 1.0, 1.0], 0), Err(HistError::InvalidBreaks(_))));
        assert!(matches!(Histogram::build(&[], &[0.0], 0), Err(HistError::InvalidBreaks(_))));
    }

    #[test]
    fn merge_identity_and_errors() {
        let brks = unit_breaks(4);
        let h = Histogram::build(&[0.5, 1.5, 3.2], &brks, 1).unwrap();
        let e = Histogram::empty(brks.clone(), 1).unwrap();
        assert_eq!(h.merge(&e).unwrap(), h);

        let other = Histogram::build(&[0.5], &unit_breaks(3), 1).unwrap();
        assert!(matches!(h.merge(&other), Err(HistError::IncompatibleBreaks { .. })));
        let mut shifted = brks.clone();
        shifted[2] = 2.5;
        let other = Histogram::empty(shifted, 1).unwrap();
        assert_eq!(h.merge(&other), Err(HistError::IncompatibleBreaks { position: 2 }));
        let plain = Histogram::empty(brks, 0).unwrap();
        assert_eq!(h.merge(&plain), Err(HistError::IncompatibleAnnotation { left: Some(1), right: None }));
    }

    #[test]
    fn merge_split_matches_direct_build() {
        let brks = unit_breaks(5);
        let whole = Histogram::build(&[1.0, 2.0, 3.0, 4.0], &brks, 1).unwrap();
        let a = Histogram::build(&[1.0, 2.0], &brks, 1).unwrap();
        let b = Histogram::build(&[3.0, 4.0], &brks, 1).unwrap();
        assert_eq!(a.merge(&b).unwrap(), whole);
    }

    #[test]
    fn merge_keeps_equal_names_only() {
        let brks = unit_breaks(2);
        let a = Histogram::empty(brks.clone(), 0).unwrap().with_name("rd").unwrap();
        let b = Histogram::empty(brks.clone(), 0).unwrap().with_name("rd").unwrap();
        let c = Histogram::empty(brks, 0).unwrap().with_name("wr").unwrap();
        assert_eq!(a.merge(&b).unwrap().name(), Some("rd"));
        assert_eq!(a.merge(&c).unwrap().name(), None);
    }

    #[test]
    fn trim_cases() {
        let h = Histogram::new(unit_breaks(5), vec![0, 0, 5, 3, 0]).unwrap();
        let t = h.trim();
        assert_eq!(t.counts(), &[5, 3]);
        assert_eq!(t.breaks(), &[2.0, 3.0, 4.0]);

        let full = Histogram::new(unit_breaks(3), vec![1, 2, 3]).unwrap();
        assert_eq!(full.trim(), full);

        let h = Histogram::new(unit_breaks(5), vec![0, 1, 0, 1, 0]).unwrap();
        assert_eq!(h.trim().counts(), &[1, 0, 1]);

        let z = Histogram::empty(unit_breaks(5), 2).unwrap().trim();
        assert_eq!(z.breaks(), &[0.0, 5.0]);
        assert_eq!(z.counts(), &[0]);
        assert_eq!(z.moment_order(), 2);
    }

    #[test]
    fn trim_carries_moments() {
        let h = Histogram::build(&[2.5, 3.5, 3.75], &unit_breaks(6), 2).unwrap();
        let t = h.trim();
        assert_eq!(t.counts(), &[1, 2]);
        assert_eq!(t.moments().unwrap().as_slice(), &[2.5, 7.25, 6.25, 3.5 * 3.5 + 3.75 * 3.75]);
    }

    #[test]
    fn approx_mean_cases() {
        // samples land in (0,1], (1,2], (2,3]: midpoints 0.5, 1.5, 2.5
        let h = Histogram::build(&[1.0, 2.0, 3.0], &unit_breaks(9), 0).unwrap();
        assert_eq!(h.approx_mean().unwrap(), 1.5);
        let single = Histogram::new(vec![2.0, 6.0], vec![7]).unwrap();
        assert_eq!(single.approx_mean().unwrap(), 4.0);
        let samples = [0.1, 0.2, 0.7, 3.3];
        let h = Histogram::build(&samples, &unit_breaks(4), 1).unwrap();
        assert!((h.approx_mean().unwrap() - 4.3 / 4.0).abs() < 1e-15);
        assert_eq!(Histogram::empty(unit_breaks(2), 0).unwrap().approx_mean(), Err(HistError::EmptyHistogram));
    }

    /// Brute-force inverse of the piecewise-linear CDF through
    /// `(breaks[i], C_i)` by bisection on x.
    fn quantile_oracle(h: &Histogram, q: f64) -> f64 {
        let total = h.count() as f64;
        let cdf = |x: f64| -> f64 {
            let mut acc = 0.0;
            for (i, &c) in h.counts().iter().enumerate() {
                let (a, b) = h.bin_edges(i);
                if x >= b {
                    acc += c as f64;
                } else if x > a {
                    acc += c as f64 * (x - a) / (b - a);
                }
            }
            acc / total
        };
        let (mut lo, mut hi) = (h.breaks()[0], *h.breaks().last().unwrap());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    #[test]
    fn approx_quantile_example() {
        let h = Histogram::build(&[1.0, 2.0, 3.0], &unit_breaks(9), 0).unwrap();
        let got = h.approx_quantile(&[0.0, 0.5, 1.0, 0.05, 0.95]).unwrap();
        assert_eq!(got[0], 0.0);
        assert!((got[1] - 1.5).abs() < 1e-12);
        assert_eq!(got[2], 3.0);
        assert!((got[3] - 0.15).abs() < 1e-12);
        assert!((got[4] - 2.85).abs() < 1e-12);
        for (q, g) in [0.5, 0.05, 0.95].iter().zip([got[1], got[3], got[4]]) {
            assert!((quantile_oracle(&h, *q) - g).abs() < 1e-9);
        }
        assert_eq!(h.trim().approx_quantile(&[1.0]).unwrap(), vec![3.0]);
    }

    #[test]
    fn approx_quantile_uniform_single_bin_and_errors() {
        let h = Histogram::new(vec![2.0, 10.0], vec![4]).unwrap();
        assert_eq!(h.approx_quantile(&[0.5]).unwrap(), vec![6.0]);
        assert_eq!(h.approx_quantile(&[1.5]), Err(HistError::Domain(1.5)));
        assert_eq!(h.approx_quantile(&[-0.1]), Err(HistError::Domain(-0.1)));
        let e = Histogram::empty(vec![0.0, 1.0], 0).unwrap();
        assert_eq!(e.approx_quantile(&[0.5]), Err(HistError::EmptyHistogram));
    }

    #[test]
    fn ecdf_cases() {
        let h = Histogram::build(&[1.0, 2.0, 3.0], &unit_breaks(3), 0).unwrap();
        let e = h.to_ecdf().unwrap();
        assert_eq!(e.knots(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(e.probs(), &[0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
        assert_eq!(e.step(3.0), 1.0);
        assert_eq!(e.step(-1.0), 0.0);
        assert_eq!(e.step(1.5), 1.0 / 3.0);
        assert!((e.interpolate(1.5) - 0.5).abs() < 1e-15);
        assert_eq!(e.interpolate(10.0), 1.0);

        let single = Histogram::new(vec![0.0, 1.0], vec![9]).unwrap();
        assert_eq!(single.to_ecdf().unwrap().probs(), &[0.0, 1.0]);
        assert!(Histogram::empty(vec![0.0, 1.0], 0).unwrap().to_ecdf().is_err());
    }

    #[test]
    fn coalesce_cases() {
        let counts: Vec<u64> = (0..48).map(|i| i as u64 % 5).collect();
        let samples: Vec<f64> = (0..480).map(|i| i as f64 * 0.1).collect();
        let h = Histogram::new(unit_breaks(48), counts.clone()).unwrap();
        let c = h.coalesce(2).unwrap();
        assert_eq!(c.bins(), 24);
        assert_eq!(c.breaks()[1], 2.0);
        for i in 0..24 {
            assert_eq!(c.counts()[i], counts[2 * i] + counts[2 * i + 1]);
        }
        assert_eq!(c.count(), h.count());

        let h = Histogram::build(&samples, &unit_breaks(48), 1).unwrap();
        let c = h.coalesce(4).unwrap();
        let total = |h: &Histogram| -> f64 { (0..h.bins()).map(|b| h.moments().unwrap().sum(b, 1)).sum() };
        assert!((total(&c) - total(&h)).abs() < 1e-9);
        assert!(matches!(h.coalesce(5), Err(HistError::Shape(_))));
        assert!(matches!(h.coalesce(1), Err(HistError::Shape(_))));
    }

    #[test]
    fn from_parts_rejects_inconsistent_moments() {
        let m = BinMoments::new(1, 1, vec![5.0]).unwrap();
        let err = Histogram::from_parts(vec![0.0, 1.0], vec![2], Some(m), None).unwrap_err();
        assert!(matches!(err, HistError::InvalidContent(_)));
        let m = BinMoments::new(1, 1, vec![0.5]).unwrap();
        let err = Histogram::from_parts(vec![0.0, 1.0], vec![0], Some(m), None).unwrap_err();
        assert!(matches!(err, HistError::InvalidContent(_)));
        assert!(BinMoments::new(2, 3, vec![0.0; 5]).is_err());
        assert!(BinMoments::new(1, 1, vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn negative_bins_respect_power_range() {
        let h = Histogram::build(&[-1.5, -1.2], &[-2.0, -1.0, 0.0], 2).unwrap();
        assert!(Histogram::from_parts(h.breaks().to_vec(), h.counts().to_vec(), h.moments().cloned(), None).is_ok());
        assert_eq!(power_range(-1.0, 2.0, 2), (0.0, 4.0));
        assert_eq!(power_range(-2.0, -1.0, 3), (-8.0, -1.0));
    }
}
