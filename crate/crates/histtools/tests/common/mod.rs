//! Oracles shared by the integration tests. Nothing here calls into the
//! numeric code under test.
#![allow(dead_code)]

use std::path::PathBuf;

pub fn testdata(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../testdata").join(rel)
}

/// `(min P(X < x), max P(X <= x))` over distributions on the atoms `grid`
/// with `E[X] = m1` and `E[X^2] = m2`, by enumerating every basic feasible
/// solution of the moment LP (at most three atoms carry mass). `None` when
/// the moments are not attainable on the grid.
pub fn lp_cdf_extremes(grid: &[f64], m1: f64, m2: f64, x: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let n = grid.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (grid[i], grid[j], grid[k]);
                // Vandermonde solve in Lagrange form
                let wa = (m2 - (b + c) * m1 + b * c) / ((a - b) * (a - c));
                let wb = (m2 - (a + c) * m1 + a * c) / ((b - a) * (b - c));
                let wc = (m2 - (a + b) * m1 + a * b) / ((c - a) * (c - b));
                if wa < -1e-12 || wb < -1e-12 || wc < -1e-12 {
                    continue;
                }
                let atoms = [(a, wa), (b, wb), (c, wc)];
                let below: f64 = atoms.iter().filter(|(t, _)| *t < x).map(|(_, w)| w.max(0.0)).sum();
                let upto: f64 = atoms.iter().filter(|(t, _)| *t <= x).map(|(_, w)| w.max(0.0)).sum();
                lo = lo.min(below);
                hi = hi.max(upto);
            }
        }
    }
    (lo <= hi).then_some((lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0)))
}

pub fn lp_grid(atoms: usize) -> Vec<f64> {
    (0..atoms).map(|i| i as f64 / (atoms - 1) as f64).collect()
}

/// `atoms - 1` evenly spaced atoms on `[0, 1]` plus `x` itself, so the
/// extremal laws can put mass exactly at the evaluation point.
pub fn lp_grid_with(atoms: usize, x: f64) -> Vec<f64> {
    let mut g = lp_grid(atoms - 1);
    g.push(x);
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
        + simpson(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson over `[a, b]`, split at `cuts` first.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, cuts: &[f64], tol: f64) -> f64 {
    let mut pts = vec![a];
    pts.extend(cuts.iter().copied().filter(|&c| c > a && c < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let pieces = (pts.len() - 1) as f64;
    pts.windows(2)
        .map(|w| {
            let (l, r) = (w[0], w[1]);
            let m = 0.5 * (l + r);
            let (fl, fr, fm) = (f(l), f(r), f(m));
            let whole = (r - l) / 6.0 * (fl + 4.0 * fm + fr);
            simpson(f, l, fl, r, fr, m, fm, whole, tol / pieces, 50)
        })
        .sum()
}

/// Binary entropy in nats, written out directly.
pub fn entropy(a: f64) -> f64 {
    let t = |p: f64| if p == 0.0 { 0.0 } else { -p * p.ln() };
    t(a) + t(1.0 - a)
}

pub fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Parse the gain-study CSV into rows of floats (header dropped).
pub fn read_csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}
