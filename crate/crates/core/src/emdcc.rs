//! EMDCC: the area between the tightest upper and lower CDF envelopes a
//! representation allows, divided by the represented range.

use alloc::vec::Vec;

use crate::bounds::{self, BinConstraint, BoundPoint, CdfBounds, Constraint};
use crate::error::{HistError, Result};
use crate::histogram::{powu, Histogram};
use crate::quadrature;

/// Binary entropy in nats, with `0 ln 0 = 0`. NaN outside `[0, 1]`.
fn binary_entropy(m: f64) -> f64 {
    if !(0.0..=1.0).contains(&m) {
        return f64::NAN;
    }
    if m == 0.0 || m == 1.0 {
        return 0.0;
    }
    -(1.0 - m) * libm::log1p(-m) - m * libm::log(m)
}

/// Normalized bin EMDCC when only the mean `m1` is known.
pub fn emdcc_mean_closed(m1: f64) -> f64 {
    binary_entropy(m1)
}

/// Normalized per-bin EMDCC when the bin mean sits at fraction `alpha` of the
/// bin width. Same function as [`emdcc_mean_closed`].
pub fn lambda(alpha: f64) -> f64 {
    emdcc_mean_closed(alpha)
}

/// Normalized bin EMDCC given mean `m1` and variance `variance`, from the
/// antiderivatives `sigma * atan((x - m1) / sigma)` on the small-variance
/// pieces and `K * ln(x / (1 - x))` on the large-variance piece, where
/// `K = m1 (1 - m1) - variance`.
pub fn emdcc_mean_var_closed(m1: f64, variance: f64) -> Result<f64> {
    bounds::bounds_mean_var(m1, variance)?;
    if variance == 0.0 {
        return Ok(0.0);
    }
    let sigma = libm::sqrt(variance);
    // (c1 - m1)/sigma = -sigma/(1 - m1) and (c2 - m1)/sigma = sigma/m1
    let left = sigma * (libm::atan(m1 / sigma) - libm::atan(sigma / (1.0 - m1)));
    let right = sigma * (libm::atan((1.0 - m1) / sigma) - libm::atan(sigma / m1));
    let slack = m1 * (1.0 - m1) - variance;
    let middle = if slack <= 0.0 {
        0.0
    } else {
        // c1 = K/(1 - m1) and 1 - c2 = K/m1
        let c2 = m1 + variance / m1;
        let one_minus_c1 = 1.0 - m1 + variance / (1.0 - m1);
        slack * (libm::log(c2) + libm::log(one_minus_c1) + libm::log(m1) + libm::log(1.0 - m1) - 2.0 * libm::log(slack))
    };
    Ok(left + middle + right)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmdccMethod {
    ClosedForm,
    Quadrature,
}

impl EmdccMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EmdccMethod::ClosedForm => "closed_form",
            EmdccMethod::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinEmdcc {
    pub bin: usize,
    /// `mass * width / range`.
    pub weight: f64,
    /// Gap area over the normalized bin, in `[0, 1]`.
    pub normalized: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmdccReport {
    pub total: f64,
    pub per_bin: Vec<BinEmdcc>,
    pub method: EmdccMethod,
    pub range: (f64, f64),
}

/// Constraint for every bin of `h`. Moments derived from power sums are
/// projected onto the attainable set to absorb rounding.
pub fn bin_constraints(h: &Histogram) -> Result<Vec<BinConstraint>> {
    let total = h.count();
    if total == 0 {
        return Err(HistError::EmptyHistogram);
    }
    let order = h.moment_order();
    (0..h.bins())
        .map(|bin| {
            let (a, b) = h.bin_edges(bin);
            let n = h.counts()[bin];
            let c = BinConstraint::new(a, b, n as f64 / total as f64)?;
            if n == 0 || order == 0 {
                return Ok(c);
            }
            let m = h.moments().expect("order >= 1");
            let nf = n as f64;
            let w = b - a;
            let mean = (m.sum(bin, 1) / nf).clamp(a, b);
            let c = c.with_mean(mean)?;
            if order == 1 {
                return Ok(c);
            }
            let m1 = (mean - a) / w;
            let v = ((m.sum(bin, 2) / nf - mean * mean) / (w * w)).clamp(0.0, m1 * (1.0 - m1));
            let c = c.with_second_moment(mean * mean + v * w * w)?;
            if order == 2 {
                return Ok(c);
            }
            // E[((X - a)/w)^p] by binomial expansion of the raw sums
            let mut acc = 0.0;
            let mut binom = 1.0;
            for k in 0..=order {
                let raw = if k == 0 { 1.0 } else { m.sum(bin, k) / nf };
                acc += binom * powu(-a, order - k) * raw;
                binom = binom * (order - k) as f64 / (k + 1) as f64;
            }
            let moment = (acc / powu(w, order)).clamp(powu(m1, order), m1.max(powu(m1, order)));
            c.with_normalized_pth_moment(order as u32, moment)
        })
        .collect()
}

fn normalized_gap(c: &BinConstraint, method: EmdccMethod) -> Result<(f64, bool)> {
    let bounds = c.bounds();
    let primary = match (bounds.constraint(), method) {
        (Constraint::CountOnly, EmdccMethod::ClosedForm) => (1.0, false),
        (Constraint::Mean { m1 }, EmdccMethod::ClosedForm) => (lambda(m1), false),
        (Constraint::MeanVariance { m1, variance }, EmdccMethod::ClosedForm) => {
            (emdcc_mean_var_closed(m1, variance)?, false)
        }
        _ => (bounds.gap_integral(), true),
    };
    match c.pth_moment() {
        Some((p, moment)) => {
            let higher = bounds::bounds_pth_moment(libm::pow(moment, 1.0 / p as f64), p)?;
            let g = higher.gap_integral();
            Ok(if g < primary.0 { (g, true) } else { primary })
        }
        None => Ok(primary),
    }
}

/// EMDCC over a set of bins, normalized by `range`.
pub fn emdcc_bins(bins: &[BinConstraint], range: (f64, f64), method: EmdccMethod) -> Result<EmdccReport> {
    let r = range.1 - range.0;
    if !(r > 0.0 && r.is_finite()) {
        return Err(HistError::InvalidBreaks(alloc::format!(
            "normalization range ({}, {}) is empty",
            range.0,
            range.1
        )));
    }
    let mut used_quadrature = method == EmdccMethod::Quadrature;
    let mut per_bin = Vec::with_capacity(bins.len());
    let mut total = 0.0;
    for (i, c) in bins.iter().enumerate() {
        let weight = c.mass() * c.width() / r;
        let (normalized, quad) = if c.mass() == 0.0 { (0.0, false) } else { normalized_gap(c, method)? };
        used_quadrature |= quad;
        let contribution = weight * normalized;
        total += contribution;
        per_bin.push(BinEmdcc { bin: i, weight, normalized, contribution });
    }
    let method = if used_quadrature { EmdccMethod::Quadrature } else { EmdccMethod::ClosedForm };
    Ok(EmdccReport { total, per_bin, method, range })
}

/// Histogram EMDCC. Each bin uses the strongest constraint its annotation
/// supports; `range` defaults to the span of the bins that hold data.
pub fn emdcc_histogram(h: &Histogram, range: Option<(f64, f64)>) -> Result<EmdccReport> {
    emdcc_histogram_with(h, range, EmdccMethod::ClosedForm)
}

pub fn emdcc_histogram_with(h: &Histogram, range: Option<(f64, f64)>, method: EmdccMethod) -> Result<EmdccReport> {
    let bins = bin_constraints(h)?;
    let trimmed = h.trim();
    let span = (trimmed.breaks()[0], trimmed.breaks()[trimmed.bins()]);
    let range = match range {
        None => span,
        Some((lo, hi)) => {
            if !(lo <= span.0 && hi >= span.1) {
                return Err(HistError::InvalidBreaks(alloc::format!(
                    "range ({lo}, {hi}) does not cover the data span ({}, {})",
                    span.0,
                    span.1
                )));
            }
            (lo, hi)
        }
    };
    emdcc_bins(&bins, range, method)
}

/// Storage multiple of plain equal-width bins needed to match the EMDCC of
/// a mean-annotated histogram: `1 / (2 K X)`.
///
/// `K` counts the bins between the first and last nonempty bin, the same
/// span `X` is normalized by, so the result does not depend on empty edge
/// bins. Returns `+inf` when `X = 0`.
pub fn information_gain(h: &Histogram) -> Result<f64> {
    if h.moment_order() == 0 {
        return Err(HistError::Unsupported("information gain needs moment-annotated bins".into()));
    }
    let w0 = h.breaks()[1] - h.breaks()[0];
    if let Some(i) = (0..h.bins()).find(|&i| {
        let (a, b) = h.bin_edges(i);
        ((b - a) - w0).abs() > 1e-9 * w0
    }) {
        return Err(HistError::UnsupportedLayout(alloc::format!("bin {i} width differs from bin 0 width {w0}")));
    }
    let x = emdcc_histogram(h, None)?.total;
    let k = h.trim().bins() as f64;
    Ok(if x == 0.0 { f64::INFINITY } else { 1.0 / (2.0 * k * x) })
}

/// Whole-histogram CDF envelope: bin envelopes scaled by bin mass and
/// stacked on the cumulative mass of the bins to their left.
#[derive(Debug, Clone)]
pub struct HistogramEnvelope {
    breaks: Vec<f64>,
    bins: Vec<(CdfBounds, f64, f64)>,
}

impl HistogramEnvelope {
    pub fn new(h: &Histogram) -> Result<Self> {
        let constraints = bin_constraints(h)?;
        let mut cum = 0.0;
        let bins = constraints
            .iter()
            .map(|c| {
                let entry = (c.bounds(), cum, c.mass());
                cum += c.mass();
                entry
            })
            .collect();
        Ok(HistogramEnvelope { breaks: h.breaks().to_vec(), bins })
    }

    pub fn eval(&self, x: f64) -> BoundPoint {
        let last = self.breaks.len() - 1;
        if x < self.breaks[0] {
            return BoundPoint { lower: 0.0, upper: 0.0, regime: bounds::Regime::Unconstrained };
        }
        if x >= self.breaks[last] {
            return BoundPoint { lower: 1.0, upper: 1.0, regime: bounds::Regime::Unconstrained };
        }
        let i = self.breaks.partition_point(|&b| b <= x) - 1;
        let (b, before, mass) = &self.bins[i];
        let p = b.eval(x);
        BoundPoint { lower: before + mass * p.lower, upper: before + mass * p.upper, regime: p.regime }
    }

    /// Unnormalized area between the envelopes, by quadrature.
    pub fn gap_area(&self) -> f64 {
        let mut total = 0.0;
        for (i, (b, _, mass)) in self.bins.iter().enumerate() {
            if *mass == 0.0 {
                continue;
            }
            let (lo, hi) = (self.breaks[i], self.breaks[i + 1]);
            let (hints, n) = b.breakpoints();
            let mapped: Vec<f64> = hints[..n].iter().map(|t| lo + t * (hi - lo)).collect();
            total += quadrature::integrate(&|x| self.eval(x).gap(), lo, hi, &mapped, bounds::GAP_TOLERANCE);
        }
        total
    }
}
