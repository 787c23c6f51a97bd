//! Pointwise CDF envelopes implied by a bin's count and optional moments.
//!
//! Every construction works on the normalized bin `[0, 1]`; [`CdfBounds::on_interval`]
//! maps it onto a real bin `(a, b]`. `upper(x)` is the largest attainable
//! `P(X <= x)` and `lower(x)` the smallest attainable `P(X < x)` over all
//! distributions on the bin that match the constraint.

use core::fmt;

use crate::error::{HistError, Result};
use crate::histogram::powu;
use crate::quadrature;

/// Absolute tolerance for per-bin gap integration.
pub const GAP_TOLERANCE: f64 = 1e-10;

const EDGE_GUARD: f64 = 1e-15;

/// Rounding slack accepted on the normalized variance box.
const VARIANCE_SLACK: f64 = 1e-9;

/// Which extremal construction produced a bound at a given point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Only the count is known: all mass may sit on either endpoint.
    Unconstrained,
    /// Mean known, `x <= mean`: mass at `x` and `1`.
    F1,
    /// Mean known, `x > mean`: mass at `0` and `x`.
    F2,
    /// Mean and variance known, small-variance side: mass at `x` and one other atom.
    F3,
    /// Mean and variance known, large-variance side: mass at `0`, `x` and `1`.
    F4,
    /// Single higher raw moment known.
    PthMoment,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Unconstrained => "none",
            Regime::F1 => "F1",
            Regime::F2 => "F2",
            Regime::F3 => "F3",
            Regime::F4 => "F4",
            Regime::PthMoment => "p-moment",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The information a bound is conditioned on, in normalized units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    CountOnly,
    Mean {
        m1: f64,
    },
    MeanVariance {
        m1: f64,
        variance: f64,
    },
    /// `mu_p` is the p-th root of the p-th raw moment.
    PthMoment {
        mu_p: f64,
        p: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub lower: f64,
    pub upper: f64,
    pub regime: Regime,
}

impl BoundPoint {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Lower/upper CDF envelope over one bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfBounds {
    constraint: Constraint,
    support: (f64, f64),
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(HistError::Domain(x))
    }
}

/// Envelope with only the count known.
pub fn bounds_no_moment() -> CdfBounds {
    CdfBounds { constraint: Constraint::CountOnly, support: (0.0, 1.0) }
}

/// Envelope given the normalized bin mean.
pub fn bounds_mean(m1: f64) -> Result<CdfBounds> {
    check_unit(m1)?;
    Ok(CdfBounds { constraint: Constraint::Mean { m1 }, support: (0.0, 1.0) })
}

/// Envelope given normalized mean and variance.
pub fn bounds_mean_var(m1: f64, variance: f64) -> Result<CdfBounds> {
    check_unit(m1)?;
    if !(variance >= 0.0 && variance <= m1 * (1.0 - m1)) {
        return Err(HistError::InfeasibleMoments { mean: m1, variance });
    }
    Ok(CdfBounds { constraint: Constraint::MeanVariance { m1, variance }, support: (0.0, 1.0) })
}

/// Envelope given the normalized p-th raw moment `mu_p^p`.
pub fn bounds_pth_moment(mu_p: f64, p: u32) -> Result<CdfBounds> {
    check_unit(mu_p)?;
    if p == 0 {
        return Err(HistError::Shape("moment order must be at least 1".into()));
    }
    Ok(CdfBounds { constraint: Constraint::PthMoment { mu_p, p }, support: (0.0, 1.0) })
}

/// Regime boundaries `(c1, c2)` between the small- and large-variance
/// constructions. Requires `0 < m1 < 1`.
pub fn regime_boundaries(m1: f64, variance: f64) -> (f64, f64) {
    (m1 - variance / (1.0 - m1), m1 + variance / m1)
}

/// Shared single-moment form: `moment` is `E[t^p]`, `x_pow` is `x^p`.
fn single_moment(moment: f64, threshold: f64, x: f64, x_pow: f64, regimes: (Regime, Regime)) -> BoundPoint {
    if x <= threshold {
        let denom = 1.0 - x_pow;
        let upper = if denom < EDGE_GUARD { 1.0 } else { ((1.0 - moment) / denom).min(1.0) };
        BoundPoint { lower: 0.0, upper, regime: regimes.0 }
    } else {
        let lower = if x_pow < EDGE_GUARD { 0.0 } else { (1.0 - moment / x_pow).max(0.0) };
        BoundPoint { lower, upper: 1.0, regime: regimes.1 }
    }
}

fn mean_var_point(m1: f64, variance: f64, x: f64) -> BoundPoint {
    if variance == 0.0 {
        // point mass at m1
        return if x < m1 {
            BoundPoint { lower: 0.0, upper: 0.0, regime: Regime::F3 }
        } else if x > m1 {
            BoundPoint { lower: 1.0, upper: 1.0, regime: Regime::F3 }
        } else {
            BoundPoint { lower: 0.0, upper: 1.0, regime: Regime::F4 }
        };
    }
    let (c1, c2) = regime_boundaries(m1, variance);
    if x < c1 || x > c2 {
        let d = x - m1;
        let p3 = variance / (variance + d * d);
        return if x < m1 {
            BoundPoint { lower: 0.0, upper: p3, regime: Regime::F3 }
        } else {
            BoundPoint { lower: 1.0 - p3, upper: 1.0, regime: Regime::F3 }
        };
    }
    let slack = (m1 * (1.0 - m1) - variance).max(0.0);
    if x <= 0.0 {
        // only reachable when c1 == 0, i.e. maximal variance: atoms at 0 and 1
        return BoundPoint { lower: 0.0, upper: 1.0 - m1, regime: Regime::F4 };
    }
    let p4 = slack / (x - x * x);
    let at_one = m1 - x * p4;
    let at_zero = 1.0 - p4 - at_one;
    BoundPoint { lower: at_zero.clamp(0.0, 1.0), upper: (1.0 - at_one).clamp(0.0, 1.0), regime: Regime::F4 }
}

impl CdfBounds {
    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// The same envelope stretched over `(a, b]`.
    pub fn on_interval(self, a: f64, b: f64) -> CdfBounds {
        CdfBounds { support: (a, b), ..self }
    }

    fn normalize(&self, x: f64) -> f64 {
        let (a, b) = self.support;
        if a == 0.0 && b == 1.0 {
            x
        } else {
            (x - a) / (b - a)
        }
    }

    /// Evaluate both envelopes at `x` (in support units).
    pub fn eval(&self, x: f64) -> BoundPoint {
        let t = self.normalize(x);
        let mut point = self.eval_unit(t);
        if t < 0.0 {
            point.lower = 0.0;
            point.upper = 0.0;
        } else if t >= 1.0 {
            point.lower = 1.0;
            point.upper = 1.0;
        }
        point
    }

    fn eval_unit(&self, t: f64) -> BoundPoint {
        match self.constraint {
            Constraint::CountOnly => BoundPoint { lower: 0.0, upper: 1.0, regime: Regime::Unconstrained },
            Constraint::Mean { m1 } => single_moment(m1, m1, t, t, (Regime::F1, Regime::F2)),
            Constraint::PthMoment { mu_p, p } => {
                let p = p.min(u8::MAX as u32) as u8;
                single_moment(powu(mu_p, p), mu_p, t, powu(t, p), (Regime::PthMoment, Regime::PthMoment))
            }
            Constraint::MeanVariance { m1, variance } => mean_var_point(m1, variance, t),
        }
    }

    pub fn lower(&self, x: f64) -> f64 {
        self.eval(x).lower
    }

    pub fn upper(&self, x: f64) -> f64 {
        self.eval(x).upper
    }

    pub fn gap(&self, x: f64) -> f64 {
        self.eval(x).gap()
    }

    pub fn regime(&self, x: f64) -> Regime {
        self.eval(x).regime
    }

    /// Points in `[0, 1]` where the normalized gap has kinks.
    pub fn breakpoints(&self) -> ([f64; 3], usize) {
        match self.constraint {
            Constraint::CountOnly => ([0.0; 3], 0),
            Constraint::Mean { m1 } => ([m1, 0.0, 0.0], 1),
            Constraint::PthMoment { mu_p, .. } => ([mu_p, 0.0, 0.0], 1),
            Constraint::MeanVariance { m1, variance } => {
                if variance == 0.0 {
                    ([m1, 0.0, 0.0], 1)
                } else {
                    let (c1, c2) = regime_boundaries(m1, variance);
                    ([c1, m1, c2], 3)
                }
            }
        }
    }

    /// Area between the envelopes over the normalized bin, by adaptive
    /// quadrature. Equals the bin's EMDCC as a fraction of its width.
    pub fn gap_integral(&self) -> f64 {
        let (hints, n) = self.breakpoints();
        let unit = CdfBounds { support: (0.0, 1.0), ..*self };
        quadrature::integrate(&|t| unit.eval_unit(t).gap(), 0.0, 1.0, &hints[..n], GAP_TOLERANCE)
    }
}

/// What is known about one bin, in data units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinConstraint {
    a: f64,
    b: f64,
    mass: f64,
    mu: Option<f64>,
    mu2: Option<f64>,
    pth: Option<(u32, f64)>,
}

impl BinConstraint {
    pub fn new(a: f64, b: f64, mass: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(HistError::InvalidBreaks(alloc::format!("bin ({a}, {b}] is empty or not finite")));
        }
        check_unit(mass)?;
        Ok(BinConstraint { a, b, mass, mu: None, mu2: None, pth: None })
    }

    /// Attach the bin mean (data units).
    pub fn with_mean(mut self, mu: f64) -> Result<Self> {
        if !(mu >= self.a && mu <= self.b) {
            return Err(HistError::InfeasibleMoments { mean: mu, variance: 0.0 });
        }
        self.mu = Some(mu);
        Ok(self)
    }

    /// Attach the second raw moment (data units squared). Needs a mean.
    pub fn with_second_moment(mut self, mu2: f64) -> Result<Self> {
        let mu = self.mu.ok_or_else(|| HistError::Unsupported("second moment without a mean".into()))?;
        self.mu2 = Some(mu2);
        let m1 = self.normalized_mean().unwrap_or(0.0);
        let w = self.width();
        let v = (mu2 - mu * mu) / (w * w);
        if !(v >= -VARIANCE_SLACK && v <= m1 * (1.0 - m1) + VARIANCE_SLACK) {
            return Err(HistError::InfeasibleMoments { mean: mu, variance: mu2 - mu * mu });
        }
        Ok(self)
    }

    /// Attach a normalized p-th raw moment `E[((X - a) / (b - a))^p]`.
    pub fn with_normalized_pth_moment(mut self, p: u32, moment: f64) -> Result<Self> {
        check_unit(moment)?;
        if p == 0 {
            return Err(HistError::Shape("moment order must be at least 1".into()));
        }
        self.pth = Some((p, moment));
        Ok(self)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn normalized_mean(&self) -> Option<f64> {
        self.mu.map(|mu| ((mu - self.a) / self.width()).clamp(0.0, 1.0))
    }

    pub fn normalized_variance(&self) -> Option<f64> {
        let (mu, mu2) = (self.mu?, self.mu2?);
        let w = self.width();
        let m1 = self.normalized_mean()?;
        Some(((mu2 - mu * mu) / (w * w)).clamp(0.0, m1 * (1.0 - m1)))
    }

    pub fn pth_moment(&self) -> Option<(u32, f64)> {
        self.pth
    }

    /// The tightest single construction available for this bin.
    pub fn bounds(&self) -> CdfBounds {
        let b = match (self.normalized_mean(), self.normalized_variance()) {
            (Some(m1), Some(v)) => bounds_mean_var(m1, v).unwrap_or_else(|_| bounds_no_moment()),
            (Some(m1), None) => bounds_mean(m1).unwrap_or_else(|_| bounds_no_moment()),
            _ => match self.pth {
                Some((p, m)) => {
                    bounds_pth_moment(libm::pow(m, 1.0 / p as f64), p).unwrap_or_else(|_| bounds_no_moment())
                }
                None => bounds_no_moment(),
            },
        };
        b.on_interval(self.a, self.b)
    }
}
