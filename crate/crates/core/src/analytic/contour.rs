//! Argument-principle machinery on strips of the torus.
//!
//! A horizontal strip `y_lo <= Im z <= y_hi` (taken modulo 1 in `Re z`)
//! is the annulus `e^{-2 pi y_hi} <= |w| <= e^{-2 pi y_lo}` in the
//! coordinate `w = e^{2 pi i z}`, where a trigonometric polynomial is a
//! Laurent polynomial. The zero count of the strip is the winding along the
//! lower line minus the winding along the upper line; the pole at `w = 0`
//! cancels between the two.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::trigpoly::{StripDomain, TrigPoly};
use crate::error::{Error, Result};

/// Discretization of the boundary of the annulus `inner <= |w| <= outer`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusContour {
    inner_radius: f64,
    outer_radius: f64,
    samples_per_circle: usize,
}

pub const MIN_SAMPLES_PER_CIRCLE: usize = 64;
const MAX_SAMPLES_PER_EDGE: usize = 1 << 18;
/// Largest accepted argument change between neighbouring samples.
const MAX_TURN: f64 = PI / 4.0;
/// Relative guard for sub-contours used while localizing zeros.
const SUBDIVISION_GUARD: f64 = 1e-13;
/// Default relative guard for the full contour.
pub const CONTOUR_GUARD: f64 = 1e-10;

impl AnnulusContour {
    pub fn new(inner_radius: f64, outer_radius: f64, samples_per_circle: usize) -> Result<Self> {
        if !(inner_radius > 0.0 && inner_radius < 1.0 && outer_radius > 1.0 && outer_radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "annulus needs 0 < inner < 1 < outer, got {inner_radius}, {outer_radius}"
            )));
        }
        if samples_per_circle < MIN_SAMPLES_PER_CIRCLE {
            return Err(Error::InvalidArgument(format!(
                "samples_per_circle must be at least {MIN_SAMPLES_PER_CIRCLE}"
            )));
        }
        Ok(Self {
            inner_radius,
            outer_radius,
            samples_per_circle,
        })
    }

    /// The image of the strip `|Im z| <= delta`.
    pub fn from_strip(dom: StripDomain) -> Self {
        let r = (TAU * dom.delta()).exp();
        Self {
            inner_radius: 1.0 / r,
            outer_radius: r,
            samples_per_circle: 256,
        }
    }

    pub fn with_samples(mut self, samples_per_circle: usize) -> Result<Self> {
        Self::new(self.inner_radius, self.outer_radius, samples_per_circle)?;
        self.samples_per_circle = samples_per_circle;
        Ok(self)
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn samples_per_circle(&self) -> usize {
        self.samples_per_circle
    }

    /// `Im z` of the line mapped to the inner circle (upper edge of the strip).
    pub fn y_upper(&self) -> f64 {
        -self.inner_radius.ln() / TAU
    }

    /// `Im z` of the line mapped to the outer circle (lower edge of the strip).
    pub fn y_lower(&self) -> f64 {
        -self.outer_radius.ln() / TAU
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.im > self.y_lower() && z.im < self.y_upper()
    }
}

/// Supremum of `|f|` over the strip, attained on one of its boundary lines.
///
/// Dense sampling followed by golden-section refinement of every sampled
/// local maximum within 1% of the largest one.
pub fn strip_norm(f: &TrigPoly, dom: StripDomain) -> f64 {
    let d = dom.delta();
    line_max(&f.on_line(d)).max(line_max(&f.on_line(-d)))
}

pub(crate) fn sup_on_lines(f: &TrigPoly, y_lo: f64, y_hi: f64) -> f64 {
    line_max(&f.on_line(y_lo)).max(line_max(&f.on_line(y_hi)))
}

/// Maximum of `|g(x)|` over the torus.
pub(crate) fn line_max(g: &TrigPoly) -> f64 {
    extremum_on_torus(g, true)
}

/// Minimum of `|g(x)|` over the torus.
pub(crate) fn line_min(g: &TrigPoly) -> f64 {
    extremum_on_torus(g, false)
}

fn extremum_on_torus(g: &TrigPoly, maximize: bool) -> f64 {
    let n = (64 * (g.degree() + 1)).max(512);
    let h = 1.0 / n as f64;
    let vals: Vec<f64> = (0..n).map(|i| g.eval_real(i as f64 * h).norm()).collect();
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let best = vals
        .iter()
        .copied()
        .fold(vals[0], |acc, v| if better(v, acc) { v } else { acc });
    let mut result = best;
    for i in 0..n {
        let (prev, next) = (vals[(i + n - 1) % n], vals[(i + 1) % n]);
        let v = vals[i];
        let is_candidate = if maximize {
            v >= prev && v >= next && v >= 0.99 * best
        } else {
            v <= prev && v <= next && v <= best + 0.01 * (best + 1e-300) + 1e-300
        };
        if is_candidate {
            let x = i as f64 * h;
            let sign = if maximize { -1.0 } else { 1.0 };
            let (_, fx) = golden_section(|t| sign * g.eval_real(t).norm(), x - h, x + h);
            let refined = sign * fx;
            if better(refined, result) {
                result = refined;
            }
        }
    }
    result
}

/// Minimizes a unimodal function on `[a, b]`; returns `(argmin, min)`.
pub(crate) fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[derive(Debug)]
enum EdgeFailure {
    /// Sampled modulus fell below the guard.
    Small(f64),
    /// Argument could not be resolved within the sample cap.
    Unresolved,
}

/// Net change of `arg f` along the straight segment `a -> b`, tracked by
/// summing turn angles between successive samples. The sample count doubles
/// until every turn is below `MAX_TURN` and the result is stable under one
/// more doubling.
fn arg_increment(
    f: &TrigPoly,
    a: Complex64,
    b: Complex64,
    start_samples: usize,
    guard: f64,
) -> std::result::Result<f64, EdgeFailure> {
    let mut n = start_samples.max(8);
    let mut previous: Option<f64> = None;
    while n <= MAX_SAMPLES_PER_EDGE {
        let step = (b - a) / n as f64;
        let mut prev = f.eval(a);
        let mut min_mod = prev.norm();
        let mut total = 0.0;
        let mut max_turn: f64 = 0.0;
        for i in 1..=n {
            let z = if i == n { b } else { a + step * i as f64 };
            let v = f.eval(z);
            min_mod = min_mod.min(v.norm());
            let turn = (v * prev.conj()).arg();
            max_turn = max_turn.max(turn.abs());
            total += turn;
            prev = v;
        }
        if min_mod < guard {
            return Err(EdgeFailure::Small(min_mod));
        }
        if max_turn < MAX_TURN {
            if let Some(p) = previous {
                if (p - total).abs() < 1e-6 {
                    return Ok(total);
                }
            }
            previous = Some(total);
        } else {
            previous = None;
        }
        n *= 2;
    }
    Err(EdgeFailure::Unresolved)
}

fn edge_error(e: EdgeFailure, guard: f64) -> Error {
    match e {
        EdgeFailure::Small(m) => Error::ZeroOnContour { modulus: m, guard },
        EdgeFailure::Unresolved => Error::ZeroOnContour { modulus: 0.0, guard },
    }
}

fn round_winding(total: f64) -> Result<usize> {
    let w = total / TAU;
    let r = w.round();
    if (w - r).abs() > 0.05 {
        return Err(Error::NonConvergence(format!("winding number {w} is not an integer")));
    }
    if r < 0.0 {
        return Err(Error::NonConvergence(format!("negative zero count {r}")));
    }
    Ok(r as usize)
}

/// Number of zeros, with multiplicity, of `f` inside the annulus (one period
/// of the corresponding strip).
pub fn count_zeros(f: &TrigPoly, contour: &AnnulusContour) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::NotRepresentable);
    }
    let (ylo, yhi) = (contour.y_lower(), contour.y_upper());
    let guard = CONTOUR_GUARD * sup_on_lines(f, ylo, yhi);
    count_in_strip(f, ylo, yhi, contour.samples_per_circle(), guard)
}

fn count_in_strip(f: &TrigPoly, ylo: f64, yhi: f64, samples: usize, guard: f64) -> Result<usize> {
    let lower = arg_increment(f, Complex64::new(0.0, ylo), Complex64::new(1.0, ylo), samples, guard)
        .map_err(|e| edge_error(e, guard))?;
    let upper = arg_increment(f, Complex64::new(0.0, yhi), Complex64::new(1.0, yhi), samples, guard)
        .map_err(|e| edge_error(e, guard))?;
    round_winding(lower - upper)
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    count: usize,
}

impl Cell {
    fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }
}

fn count_in_box(f: &TrigPoly, x0: f64, x1: f64, y0: f64, y1: f64, samples: usize, guard: f64) -> Result<usize> {
    let corners = [
        Complex64::new(x0, y0),
        Complex64::new(x1, y0),
        Complex64::new(x1, y1),
        Complex64::new(x0, y1),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        total += arg_increment(f, corners[i], corners[(i + 1) % 4], samples, guard)
            .map_err(|e| edge_error(e, guard))?;
    }
    round_winding(total)
}

/// Relative offsets tried when a split line passes too close to a zero. The
/// first is nonzero so that split lines avoid symmetric positions such as
/// `Im z = 0`, where torus zeros sit.
const SPLIT_OFFSETS: [f64; 8] = [0.0187, 0.0731, -0.0617, 0.1379, -0.1123, 0.1913, -0.1741, 0.2297];

fn split(f: &TrigPoly, cell: Cell, samples: usize, guard: f64) -> Result<Vec<Cell>> {
    let width = cell.x1 - cell.x0;
    let height = cell.y1 - cell.y0;
    let mut last_err = None;
    for off in SPLIT_OFFSETS {
        let t = 0.5 + off;
        let (a, b) = if width >= height {
            let xm = cell.x0 + t * width;
            (
                Cell { x1: xm, ..cell },
                Cell { x0: xm, ..cell },
            )
        } else {
            let ym = cell.y0 + t * height;
            (
                Cell { y1: ym, ..cell },
                Cell { y0: ym, ..cell },
            )
        };
        let counts = count_in_box(f, a.x0, a.x1, a.y0, a.y1, samples, guard)
            .and_then(|ca| count_in_box(f, b.x0, b.x1, b.y0, b.y1, samples, guard).map(|cb| (ca, cb)));
        match counts {
            Ok((ca, cb)) if ca + cb == cell.count => {
                return Ok([Cell { count: ca, ..a }, Cell { count: cb, ..b }]
                    .into_iter()
                    .filter(|c| c.count > 0)
                    .collect());
            }
            Ok((ca, cb)) => {
                last_err = Some(Error::NonConvergence(format!(
                    "sub-box counts {ca} + {cb} disagree with parent {}",
                    cell.count
                )))
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(Error::NonConvergence("subdivision failed".into())))
}

/// A cluster of zeros: its location (real part reduced to `[0, 1)`) and
/// total multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCluster {
    pub location: Complex64,
    pub multiplicity: usize,
}

/// Localizes the zeros inside the annulus by recursive box subdivision,
/// counting with the argument principle on every sub-box until each box has
/// diameter at most `tol`. Touching boxes are merged into one cluster and the
/// cluster center is polished with multiplicity-aware Newton steps.
pub fn locate_zeros(f: &TrigPoly, contour: &AnnulusContour, tol: f64) -> Result<Vec<ZeroCluster>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let total = count_zeros(f, contour)?;
    if total == 0 {
        return Ok(Vec::new());
    }
    let (ylo, yhi) = (contour.y_lower(), contour.y_upper());
    let samples = contour.samples_per_circle();
    let guard = SUBDIVISION_GUARD * sup_on_lines(f, ylo, yhi);

    // One full period as a box; shift its seam off any zero on Re z = 0.
    let mut root = None;
    for off in SPLIT_OFFSETS {
        let x0 = -0.5 * off - 0.0113;
        if let Ok(c) = count_in_box(f, x0, x0 + 1.0, ylo, yhi, samples, guard) {
            if c == total {
                root = Some(Cell { x0, x1: x0 + 1.0, y0: ylo, y1: yhi, count: c });
                break;
            }
        }
    }
    let root = root.ok_or_else(|| Error::NonConvergence("could not place the period seam".into()))?;

    let mut leaves = Vec::new();
    let mut stack = vec![root];
    while let Some(cell) = stack.pop() {
        if cell.diameter() <= tol {
            leaves.push(cell);
            continue;
        }
        match split(f, cell, samples, guard) {
            Ok(parts) => stack.extend(parts),
            // Near a multiple zero |f| drops below the guard on every split
            // line before the box reaches `tol`; Newton polishing takes over.
            Err(Error::ZeroOnContour { .. }) if cell.count > 1 => leaves.push(cell),
            Err(e) => return Err(e),
        }
    }
    leaves.sort_by(|a, b| a.x0.total_cmp(&b.x0).then(a.y0.total_cmp(&b.y0)));

    // Union-find over touching leaves.
    let touch = |a: &Cell, b: &Cell| {
        let slack = 1e-12 + 1e-9 * tol;
        a.x0 <= b.x1 + slack && b.x0 <= a.x1 + slack && a.y0 <= b.y1 + slack && b.y0 <= a.y1 + slack
    };
    let mut parent: Vec<usize> = (0..leaves.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            if touch(&leaves[i], &leaves[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, (Complex64, usize, f64)> = Default::default();
    for (i, leaf) in leaves.iter().enumerate() {
        let r = find(&mut parent, i);
        let e = groups.entry(r).or_insert((Complex64::new(0.0, 0.0), 0, 0.0));
        e.0 += leaf.center() * leaf.count as f64;
        e.1 += leaf.count;
        e.2 = e.2.max(leaf.diameter());
    }
    let df = f.derivative();
    let mut out: Vec<ZeroCluster> = groups
        .into_values()
        .map(|(sum, m, diam)| {
            let center = sum / m as f64;
            let z = polish(f, &df, center, m, 2.0 * diam.max(tol));
            ZeroCluster {
                location: reduce_period(z),
                multiplicity: m,
            }
        })
        .collect();
    out.sort_by(|a, b| a.location.re.total_cmp(&b.location.re));
    Ok(out)
}

fn reduce_period(z: Complex64) -> Complex64 {
    let mut re = z.re.rem_euclid(1.0);
    if re >= 1.0 {
        re = 0.0;
    }
    Complex64::new(re, z.im)
}

/// Newton iteration `z <- z - m f/f'`, kept within `radius` of the start and
/// accepted only while `|f|` does not grow.
fn polish(f: &TrigPoly, df: &TrigPoly, start: Complex64, m: usize, radius: f64) -> Complex64 {
    let mut z = start;
    let mut fz = f.eval(z);
    for _ in 0..30 {
        let d = df.eval(z);
        if d.norm() == 0.0 || fz.norm() == 0.0 {
            break;
        }
        let step = fz / d * m as f64;
        let cand = z - step;
        if (cand - start).norm() > radius {
            break;
        }
        let fc = f.eval(cand);
        if fc.norm() > fz.norm() {
            break;
        }
        z = cand;
        fz = fc;
        if step.norm() < 1e-16 {
            break;
        }
    }
    z
}

/// `a_j(f, z0) = f^{(j)}(z0)/j!` from the Cauchy integral over a circle
/// around `z0` inside the strip, discretized by the trapezoid rule.
pub fn taylor_coeff(f: &TrigPoly, z0: Complex64, j: usize, contour: &AnnulusContour) -> Result<Complex64> {
    if !contour.contains(z0) {
        return Err(Error::InvalidArgument(format!("{z0} is not inside the contour")));
    }
    let dist = (contour.y_upper() - z0.im).min(z0.im - contour.y_lower());
    let rho = (0.9 * dist).min(0.5);
    let n = (4 * (j + 1)).max(256);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..n {
        let theta = TAU * m as f64 / n as f64;
        let e = Complex64::from_polar(1.0, theta);
        acc += f.eval(z0 + e * rho) * Complex64::from_polar(1.0, -(j as f64) * theta);
    }
    Ok(acc / (n as f64 * rho.powi(j as i32)))
}

/// `a_j(f, z0)` by termwise differentiation of the Fourier series.
pub fn taylor_coeff_direct(f: &TrigPoly, z0: Complex64, j: usize) -> Complex64 {
    let fact: f64 = (1..=j).map(|i| i as f64).product();
    f.terms()
        .map(|(k, c)| {
            let w = Complex64::new(0.0, TAU * k as f64);
            c * w.powu(j as u32) * (w * z0).exp()
        })
        .sum::<Complex64>()
        / fact
}

/// Scale for relative comparisons of Taylor coefficients: the sum of the
/// moduli of the termwise contributions.
pub fn taylor_scale(f: &TrigPoly, z0: Complex64, j: usize) -> f64 {
    let fact: f64 = (1..=j).map(|i| i as f64).product();
    f.terms()
        .map(|(k, c)| c.norm() * (TAU * k.abs() as f64).powi(j as i32) * (-TAU * k as f64 * z0.im).exp())
        .sum::<f64>()
        / fact
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn strip(delta: f64) -> AnnulusContour {
        AnnulusContour::from_strip(StripDomain::new(delta).unwrap())
    }

    #[test]
    fn strip_norms() {
        let dom = StripDomain::new(0.1).unwrap();
        assert!((strip_norm(&TrigPoly::constant(c(3.0, -4.0)), dom) - 5.0).abs() < 1e-14);
        let e1 = strip_norm(&TrigPoly::monomial(1, 1.0), dom);
        assert!((e1 - (0.2 * PI).exp()).abs() < 1e-12);
        assert!((e1 - 1.8745).abs() < 1e-4);
        // Oracle: brute-force maximum of |2cos(2 pi z)| over a fine grid of both lines.
        let f = TrigPoly::cosine(2.0);
        let oracle = (0..200_000)
            .flat_map(|i| {
                let x = i as f64 / 200_000.0;
                [c(x, 0.1), c(x, -0.1)]
            })
            .map(|z| f.eval(z).norm())
            .fold(0.0, f64::max);
        let got = strip_norm(&f, dom);
        assert!(got >= oracle - 1e-12);
        assert!((got - 2.0 * (0.2 * PI).cosh()).abs() < 1e-12);
    }

    #[test]
    fn simple_zero_counts_once() {
        let f = &TrigPoly::monomial(1, 1.0) - &TrigPoly::constant(1.0);
        assert_eq!(count_zeros(&f, &strip(0.1)).unwrap(), 1);
    }

    #[test]
    fn zero_outside_annulus() {
        let f = &TrigPoly::monomial(1, 1.0) - &TrigPoly::constant(3.0);
        let contour = AnnulusContour::new(0.5, 2.5, 64).unwrap();
        assert_eq!(count_zeros(&f, &contour).unwrap(), 0);
        let wide = AnnulusContour::new(0.5, 3.5, 64).unwrap();
        assert_eq!(count_zeros(&f, &wide).unwrap(), 1);
    }

    #[test]
    fn negative_frequencies_do_not_count() {
        // e^{-2 pi i x}: no zeros anywhere, a pole of order one at w = 0.
        assert_eq!(count_zeros(&TrigPoly::monomial(-1, 2.0), &strip(0.2)).unwrap(), 0);
        assert_eq!(count_zeros(&TrigPoly::monomial(-3, 1.0), &strip(0.2)).unwrap(), 0);
    }

    #[test]
    fn zero_function_and_contour_hit() {
        assert_eq!(count_zeros(&TrigPoly::zero(), &strip(0.1)), Err(Error::NotRepresentable));
        // Zero exactly on the outer circle |w| = e^{2 pi 0.1}.
        let r = (TAU * 0.1f64).exp();
        let f = &TrigPoly::monomial(1, 1.0) - &TrigPoly::constant(r);
        assert!(matches!(count_zeros(&f, &strip(0.1)), Err(Error::ZeroOnContour { .. })));
    }

    #[test]
    fn contour_validation() {
        assert!(AnnulusContour::new(1.2, 2.0, 64).is_err());
        assert!(AnnulusContour::new(0.5, 2.0, 32).is_err());
    }

    #[test]
    fn locate_simple_zero_at_origin() {
        let f = &TrigPoly::monomial(1, 1.0) - &TrigPoly::constant(1.0);
        let zs = locate_zeros(&f, &strip(0.1), 1e-6).unwrap();
        assert_eq!(zs.len(), 1);
        assert_eq!(zs[0].multiplicity, 1);
        let z = zs[0].location;
        let dx = (z.re - z.re.round()).abs();
        assert!(dx < 1e-10 && z.im.abs() < 1e-10, "{z}");
    }

    #[test]
    fn locate_two_simple_zeros() {
        // (w - 1)(w + 1)/w  has zeros at x = 0 and x = 1/2.
        let f = &TrigPoly::monomial(1, 1.0) - &TrigPoly::monomial(-1, 1.0);
        let zs = locate_zeros(&f, &strip(0.1), 1e-6).unwrap();
        assert_eq!(zs.len(), 2);
        assert!(zs.iter().all(|z| z.multiplicity == 1));
        let xs: Vec<f64> = zs.iter().map(|z| z.location.re).collect();
        assert!(xs.iter().any(|x| (x - 0.5).abs() < 1e-9));
        assert!(xs.iter().any(|x| x.min(1.0 - x) < 1e-9));
    }

    #[test]
    fn locate_double_zero_below_guard_resolution() {
        // 2 + 2cos(2 pi (x + 0.3)): double zero at x = 0.2.
        let f = TrigPoly::from_pairs([(-1, c(1.0, 0.0)), (0, c(2.0, 0.0)), (1, c(1.0, 0.0))]).shift(0.3);
        let zs = locate_zeros(&f, &strip(0.1), 1e-8).unwrap();
        assert_eq!(zs.len(), 1);
        assert_eq!(zs[0].multiplicity, 2);
        assert!((zs[0].location - c(0.2, 0.0)).norm() < 1e-7, "{}", zs[0].location);
    }

    #[test]
    fn taylor_examples() {
        let contour = strip(0.2);
        let k = TrigPoly::constant(c(1.5, -0.5));
        assert!((taylor_coeff(&k, c(0.3, 0.0), 0, &contour).unwrap() - c(1.5, -0.5)).norm() < 1e-14);
        assert!(taylor_coeff(&k, c(0.3, 0.0), 3, &contour).unwrap().norm() < 1e-12);
        let e = TrigPoly::monomial(1, 1.0);
        let a1 = taylor_coeff(&e, c(0.0, 0.0), 1, &contour).unwrap();
        assert!((a1 - c(0.0, TAU)).norm() < 1e-12);
        let g = &e - &TrigPoly::constant(1.0);
        assert!(taylor_coeff(&g, c(0.0, 0.0), 0, &contour).unwrap().norm() < 1e-14);
        assert!(taylor_coeff(&g, c(0.0, 0.3), 0, &contour).is_err());
    }
}
