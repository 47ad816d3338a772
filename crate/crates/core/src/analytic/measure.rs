//! Integrals and sublevel-set measures of `|f|` on the torus.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::contour::{golden_section, line_min, locate_zeros, AnnulusContour, ZeroCluster};
use super::trigpoly::{StripDomain, TrigPoly};
use crate::error::{Error, Result};

/// Half-width of the strip whose zeros are divided out before quadrature.
const MEAN_LOG_STRIP: f64 = 0.05;
/// Zeros with `|Im z|` below this count as zeros on the torus.
pub const TORUS_ZERO_TOL: f64 = 1e-5;
/// Grid exponent for crossing detection: `2^-14` resolution.
pub const SUBLEVEL_GRID_LOG2: u32 = 14;
const BISECTION_TOL: f64 = 1e-12;

/// Zeros of `f` in a thin strip around the torus. The strip is shrunk and
/// retried if a zero sits on its boundary.
pub fn zeros_near_torus(f: &TrigPoly, half_width: f64, tol: f64) -> Result<Vec<ZeroCluster>> {
    let mut delta = half_width;
    let mut last = None;
    for _ in 0..8 {
        let contour = AnnulusContour::from_strip(StripDomain::new(delta)?);
        match locate_zeros(f, &contour, tol) {
            Ok(z) => return Ok(z),
            Err(e @ Error::ZeroOnContour { .. }) => {
                last = Some(e);
                delta *= 0.83;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// Zeros lying on the torus itself (`|Im z| <= TORUS_ZERO_TOL`).
pub fn torus_zeros(f: &TrigPoly) -> Result<Vec<ZeroCluster>> {
    Ok(zeros_near_torus(f, 1e-3, 1e-5)?
        .into_iter()
        .filter(|z| z.location.im.abs() <= TORUS_ZERO_TOL)
        .collect())
}

/// `<log|f|> = integral over the torus of log|f(x)| dx`.
///
/// Zeros in a thin strip are divided out as factors `(w - w_j)`, whose mean
/// log-modulus over the unit circle is `max(0, log|w_j|)`; the zero-free
/// remainder is integrated with the trapezoid rule, which converges
/// geometrically for it. No `1/(2 pi)` prefactor is applied.
pub fn mean_log(f: &TrigPoly) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let zeros = zeros_near_torus(f, MEAN_LOG_STRIP, 1e-5)?;
    let factors: Vec<(Complex64, i32)> = zeros
        .iter()
        .map(|z| {
            let w = Complex64::from_polar((-TAU * z.location.im).exp(), TAU * z.location.re);
            (w, z.multiplicity as i32)
        })
        .collect();
    let jensen: f64 = zeros
        .iter()
        .map(|z| z.multiplicity as f64 * (-TAU * z.location.im).max(0.0))
        .sum();
    let remainder = |x: f64| {
        let w = Complex64::from_polar(1.0, TAU * x);
        let mut v = f.eval_unit(w).norm().ln();
        for (wj, m) in &factors {
            v -= *m as f64 * (w - wj).norm().ln();
        }
        v
    };
    let mut n = 256usize;
    let mut prev = trapezoid(&remainder, n);
    loop {
        n *= 2;
        let cur = trapezoid(&remainder, n);
        if (cur - prev).abs() <= 1e-14 * (1.0 + cur.abs()) || n >= 1 << 18 {
            return Ok(cur + jensen);
        }
        prev = cur;
    }
}

/// Midpoint-offset trapezoid rule on the torus with a compensated sum.
fn trapezoid(g: &impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    kahan_sum((0..n).map(|m| g((m as f64 + 0.5) * h))) * h
}

pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let y = v - comp;
        let t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    s
}

/// Lebesgue measure of `{x in [a, b] : g(x) < eps}` for a continuous `g >= 0`.
///
/// Crossings of `g = eps` are bracketed on a uniform grid and refined by
/// bisection; sampled local minima are refined by golden-section search and
/// inserted as extra nodes so that dips narrower than the grid are seen.
/// With `periodic`, `g(b) = g(a)` and the set wraps around.
pub(crate) fn sublevel_length(
    g: &(impl Fn(f64) -> f64 + ?Sized),
    a: f64,
    b: f64,
    eps: f64,
    grid: usize,
    periodic: bool,
    extra_seeds: &[f64],
) -> f64 {
    let h = (b - a) / grid as f64;
    let mut nodes: Vec<(f64, f64)> = (0..=grid)
        .map(|i| {
            let x = if i == grid { b } else { a + i as f64 * h };
            (x, g(x))
        })
        .collect();
    if periodic {
        nodes[grid].1 = nodes[0].1;
    }
    let mut seeds: Vec<(f64, f64)> = Vec::new();
    for i in 0..=grid {
        let v = nodes[i].1;
        let prev = if i > 0 {
            nodes[i - 1].1
        } else if periodic {
            nodes[grid - 1].1
        } else {
            f64::INFINITY
        };
        let next = if i < grid {
            nodes[i + 1].1
        } else if periodic {
            nodes[1].1
        } else {
            f64::INFINITY
        };
        if v <= prev && v <= next && v >= eps {
            let x = nodes[i].0;
            let (lo, hi) = if periodic { (x - h, x + h) } else { ((x - h).max(a), (x + h).min(b)) };
            let (xm, gm) = golden_section(g, lo, hi);
            if gm < eps {
                seeds.push((wrap(xm, a, b, periodic), gm));
            }
        }
    }
    for &s in extra_seeds {
        let x = wrap(s, a, b, periodic);
        if x >= a && x <= b {
            seeds.push((x, g(x)));
        }
    }
    if !seeds.is_empty() {
        nodes.extend(seeds);
        nodes.sort_by(|p, q| p.0.total_cmp(&q.0));
        nodes.dedup_by(|p, q| p.0 == q.0);
    }

    let mut total = 0.0;
    for pair in nodes.windows(2) {
        let ((x0, g0), (x1, g1)) = (pair[0], pair[1]);
        let (in0, in1) = (g0 < eps, g1 < eps);
        total += match (in0, in1) {
            (true, true) => x1 - x0,
            (false, false) => 0.0,
            (true, false) => bisect_crossing(g, x0, x1, eps) - x0,
            (false, true) => x1 - bisect_crossing(g, x0, x1, eps),
        };
    }
    total
}

fn wrap(x: f64, a: f64, b: f64, periodic: bool) -> f64 {
    if periodic {
        a + (x - a).rem_euclid(b - a)
    } else {
        x
    }
}

/// Point in `[lo, hi]` where `g` crosses `eps`, given opposite sides at the ends.
fn bisect_crossing(g: &(impl Fn(f64) -> f64 + ?Sized), mut lo: f64, mut hi: f64, eps: f64) -> f64 {
    let lo_inside = g(lo) < eps;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if (g(mid) < eps) == lo_inside {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `mu{x in T : |f(x)| < eps}`.
pub fn sublevel_measure(f: &TrigPoly, eps: f64) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let seeds: Vec<f64> = torus_zeros(f)?.iter().map(|z| z.location.re).collect();
    Ok(sublevel_measure_seeded(f, eps, &seeds))
}

fn sublevel_measure_seeded(f: &TrigPoly, eps: f64, seeds: &[f64]) -> f64 {
    if !(eps > 0.0) {
        return 0.0;
    }
    let g = |x: f64| f.eval_real(x).norm();
    sublevel_length(&g, 0.0, 1.0, eps, 1 << SUBLEVEL_GRID_LOG2, true, seeds).clamp(0.0, 1.0)
}

/// Fitted Lojasiewicz-type profile `mu{|f| < eps} < eps^alpha`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TransversalityProfile {
    pub alpha: f64,
    /// Zero when the bound fails already at the smallest sampled `eps`.
    pub epsilon0: f64,
    /// Largest multiplicity of a torus zero; zero for a zero-free function.
    pub max_multiplicity: usize,
    pub samples: Vec<(f64, f64)>,
}

/// Default fit window: 16 geometric points from `1e-6` to `1e-2`.
pub fn default_eps_grid() -> Vec<f64> {
    geometric(1e-6, 1e-2, 16)
}

pub fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let r = (hi / lo).ln();
    (0..n)
        .map(|i| lo * (r * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

/// Least-squares slope of `log mu{|f| < eps}` against `log eps`, capped at 1,
/// together with the largest grid `eps0` below which every sample obeys the
/// bound and the maximal torus-zero multiplicity `l(f)`.
///
/// A function without torus zeros yields the degenerate profile `alpha = 1`,
/// `eps0 = min |f|` on the torus.
pub fn fit_transversality(f: &TrigPoly, eps_grid: &[f64]) -> Result<TransversalityProfile> {
    if f.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    if eps_grid.len() < 2 {
        return Err(Error::InvalidArgument("eps grid needs at least two points".into()));
    }
    let mut eps: Vec<f64> = eps_grid.to_vec();
    eps.sort_by(f64::total_cmp);
    let zeros = torus_zeros(f)?;
    let seeds: Vec<f64> = zeros.iter().map(|z| z.location.re).collect();
    let samples: Vec<(f64, f64)> = eps.iter().map(|&e| (e, sublevel_measure_seeded(f, e, &seeds))).collect();

    if zeros.is_empty() {
        return Ok(TransversalityProfile {
            alpha: 1.0,
            epsilon0: line_min(f),
            max_multiplicity: 0,
            samples,
        });
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, m)| *m > 0.0)
        .map(|(e, m)| (e.ln(), m.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::NonConvergence("sublevel measures vanish on the fit window".into()));
    }
    let alpha = least_squares_slope(&pts).min(1.0);
    let mut epsilon0 = 0.0;
    for &(e, m) in &samples {
        if m < e.powf(alpha) {
            epsilon0 = e;
        } else {
            break;
        }
    }
    Ok(TransversalityProfile {
        alpha,
        epsilon0,
        max_multiplicity: zeros.iter().map(|z| z.multiplicity).max().unwrap_or(0),
        samples,
    })
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Outcome of a Polya-inequality probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyaCheck {
    pub measure: f64,
    /// Sharper constant `2^{2 - 1/n} eps^{1/n}`.
    pub bound: f64,
    /// `measure <= 4 eps^{1/n}`.
    pub ok: bool,
}

/// Measures `{x in R : |p(x + i y)| <= eps}` for a monic polynomial given by
/// ascending coefficients and compares it with Polya's bound.
///
/// The set lies within `eps^{1/n}` of the real parts of the roots, which the
/// Cauchy bound `1 + max |p_k|` confines, so a finite window covers all of it.
pub fn polya_check(p: &[Complex64], y: f64, eps: f64) -> Result<PolyaCheck> {
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::InvalidArgument("polynomial degree must be at least 1".into()));
    }
    let lead = p[n];
    if (lead - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::NotMonic(lead.norm()));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let root_bound = 1.0 + p[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let reach = eps.powf(1.0 / n as f64);
    let (a, b) = (-root_bound - reach - 1e-3, root_bound + reach + 1e-3);
    let eval = |x: f64| {
        let z = Complex64::new(x, y);
        p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c).norm()
    };
    // `<= eps` and `< eps` differ on a null set.
    let grid = ((b - a) * 65536.0) as usize;
    let measure = sublevel_length(&eval, a, b, eps, grid.max(1 << 16), false, &[]);
    Ok(PolyaCheck {
        measure,
        bound: 2f64.powf(2.0 - 1.0 / n as f64) * reach,
        ok: measure <= 4.0 * reach,
    })
}
