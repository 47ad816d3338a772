use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Half-width of the closed strip `|Im z| <= delta` around the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripDomain {
    delta: f64,
}

impl StripDomain {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "strip half-width must be positive, got {delta}"
            )));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// A finite Fourier series `f(z) = sum_k f_k e^{2 pi i k z}` with `|k| <= degree`.
///
/// Coefficients are stored densely from `k = -degree` to `k = degree`. The
/// series is entire, so every strip norm and zero count is well defined.
#[derive(Clone, PartialEq)]
pub struct TrigPoly {
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self {
            degree: 0,
            coeffs: vec![c.into()],
        }
    }

    /// `c e^{2 pi i k x}`.
    pub fn monomial(k: i32, c: impl Into<Complex64>) -> Self {
        let mut p = Self::with_degree(k.unsigned_abs() as usize);
        *p.slot_mut(k) = c.into();
        p
    }

    /// `amplitude * cos(2 pi x)`.
    pub fn cosine(amplitude: f64) -> Self {
        Self::from_pairs([(-1, amplitude / 2.0), (1, amplitude / 2.0)].map(|(k, a)| (k, Complex64::new(a, 0.0))))
    }

    /// Builds a polynomial from `(k, f_k)` pairs; repeated frequencies add.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, Complex64)>) -> Self {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let degree = pairs
            .iter()
            .map(|(k, _)| k.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut p = Self::with_degree(degree);
        for (k, c) in pairs {
            *p.slot_mut(k) += c;
        }
        p
    }

    /// Dense constructor: `coeffs[j]` is the coefficient of `k = j - degree`.
    pub fn from_dense(degree: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * degree + 1 {
            return Err(Error::InvalidArgument(format!(
                "degree {degree} needs {} coefficients, got {}",
                2 * degree + 1,
                coeffs.len()
            )));
        }
        Ok(Self { degree, coeffs })
    }

    fn with_degree(degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * degree + 1],
        }
    }

    fn slot_mut(&mut self, k: i32) -> &mut Complex64 {
        let idx = (k as i64 + self.degree as i64) as usize;
        &mut self.coeffs[idx]
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient `f_k`; zero outside the stored band.
    pub fn coeff(&self, k: i32) -> Complex64 {
        if k.unsigned_abs() as usize > self.degree {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(k as i64 + self.degree as i64) as usize]
    }

    /// Iterates `(k, f_k)` over the stored band, zeros included.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        let d = self.degree as i32;
        self.coeffs.iter().enumerate().map(move |(j, c)| (j as i32 - d, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Lowest and highest frequency with a nonzero coefficient.
    pub fn frequency_span(&self) -> Option<(i32, i32)> {
        let mut nz = self.terms().filter(|(_, c)| c.norm_sqr() > 0.0).map(|(k, _)| k);
        let lo = nz.next()?;
        let hi = nz.last().unwrap_or(lo);
        Some((lo, hi))
    }

    /// Drops the band down to the largest `|k|` that carries a nonzero coefficient.
    pub fn trimmed(&self) -> Self {
        let deg = match self.frequency_span() {
            Some((lo, hi)) => lo.unsigned_abs().max(hi.unsigned_abs()) as usize,
            None => 0,
        };
        self.resized(deg)
    }

    fn resized(&self, degree: usize) -> Self {
        let mut p = Self::with_degree(degree);
        for (k, c) in self.terms() {
            if k.unsigned_abs() as usize <= degree {
                *p.slot_mut(k) = c;
            }
        }
        p
    }

    /// Truncates to `degree` and reports `sum_{|k| > degree} |f_k| e^{2 pi delta |k|}`,
    /// an upper bound for the strip norm of the discarded tail.
    pub fn truncate(&self, degree: usize, dom: StripDomain) -> (Self, f64) {
        let tail = self
            .terms()
            .filter(|(k, _)| k.unsigned_abs() as usize > degree)
            .map(|(k, c)| c.norm() * (TAU * dom.delta() * k.abs() as f64).exp())
            .sum();
        (self.resized(degree.min(self.degree)), tail)
    }

    /// Evaluates at a complex point `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = Complex64::from_polar((-TAU * z.im).exp(), TAU * z.re);
        let u = Complex64::from_polar((TAU * z.im).exp(), -TAU * z.re);
        self.eval_pair(w, u)
    }

    /// Evaluates on the torus.
    pub fn eval_real(&self, x: f64) -> Complex64 {
        let w = Complex64::from_polar(1.0, TAU * x);
        self.eval_pair(w, w.conj())
    }

    /// Evaluates the Laurent form at `w = e^{2 pi i z}`.
    pub fn eval_w(&self, w: Complex64) -> Complex64 {
        self.eval_pair(w, w.inv())
    }

    /// Evaluates at a point of the unit circle, using `1/w = conj(w)`.
    #[inline]
    pub fn eval_unit(&self, w: Complex64) -> Complex64 {
        self.eval_pair(w, w.conj())
    }

    #[inline]
    fn eval_pair(&self, w: Complex64, u: Complex64) -> Complex64 {
        let d = self.degree;
        let mut pos = Complex64::new(0.0, 0.0);
        for c in self.coeffs[d..].iter().rev() {
            pos = pos * w + c;
        }
        let mut neg = Complex64::new(0.0, 0.0);
        for c in self.coeffs[..d].iter() {
            neg = (neg + c) * u;
        }
        pos + neg
    }

    /// `g(x) = f(x + s)`.
    pub fn shift(&self, s: f64) -> Self {
        let mut p = self.clone();
        let d = self.degree as i32;
        for (j, c) in p.coeffs.iter_mut().enumerate() {
            let k = j as i32 - d;
            *c *= Complex64::from_polar(1.0, TAU * k as f64 * s);
        }
        p
    }

    /// The analytic function that equals `conj(f(x))` on the real line:
    /// coefficient `k` becomes `conj(f_{-k})`.
    pub fn conj_reflect(&self) -> Self {
        let mut p = Self::with_degree(self.degree);
        for (k, c) in self.terms() {
            *p.slot_mut(-k) = c.conj();
        }
        p
    }

    pub fn derivative(&self) -> Self {
        let mut p = self.clone();
        let d = self.degree as i32;
        for (j, c) in p.coeffs.iter_mut().enumerate() {
            let k = (j as i32 - d) as f64;
            *c *= Complex64::new(0.0, TAU * k);
        }
        p
    }

    pub fn scale(&self, a: impl Into<Complex64>) -> Self {
        let a = a.into();
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// Largest `|f_{-k} - conj(f_k)|`; zero exactly when `f` is real on the torus.
    pub fn real_asymmetry(&self) -> f64 {
        self.terms()
            .map(|(k, c)| (self.coeff(-k) - c.conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `sum_k |f_k| e^{2 pi delta |k|}`, a cheap upper bound for the strip norm.
    pub fn coefficient_bound(&self, delta: f64) -> f64 {
        self.terms()
            .map(|(k, c)| c.norm() * (TAU * delta * k.abs() as f64).exp())
            .sum()
    }

    /// Coefficients of `x -> f(x + i y)` as a series in `e^{2 pi i k x}`.
    pub(crate) fn on_line(&self, y: f64) -> Self {
        let mut p = self.clone();
        let d = self.degree as i32;
        for (j, c) in p.coeffs.iter_mut().enumerate() {
            let k = (j as i32 - d) as f64;
            *c *= (-TAU * k * y).exp();
        }
        p
    }
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (k, c) in self.terms().filter(|(_, c)| c.norm_sqr() > 0.0) {
            m.entry(&k, &c);
        }
        m.finish()
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        let mut p = TrigPoly::with_degree(self.degree.max(rhs.degree));
        for (k, c) in self.terms().chain(rhs.terms()) {
            *p.slot_mut(k) += c;
        }
        p
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self + &(-rhs)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(-1.0)
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        let mut p = TrigPoly::with_degree(self.degree + rhs.degree);
        for (k, a) in self.terms() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (l, b) in rhs.terms() {
                *p.slot_mut(k + l) += a * b;
            }
        }
        p
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrigPolyWire {
    degree: usize,
    coeffs: Vec<(i32, f64, f64)>,
}

impl Serialize for TrigPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TrigPolyWire {
            degree: self.degree,
            coeffs: self
                .terms()
                .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
                .map(|(k, c)| (k, c.re, c.im))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = TrigPolyWire::deserialize(d)?;
        let mut p = TrigPoly::with_degree(wire.degree);
        let mut seen = std::collections::BTreeSet::new();
        for (k, re, im) in wire.coeffs {
            if k.unsigned_abs() as usize > wire.degree {
                return Err(D::Error::custom(format!(
                    "frequency {k} exceeds degree {}",
                    wire.degree
                )));
            }
            if !seen.insert(k) {
                return Err(D::Error::custom(format!("frequency {k} listed twice")));
            }
            *p.slot_mut(k) = Complex64::new(re, im);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_evaluates_everywhere() {
        let f = TrigPoly::constant(3.0);
        assert_eq!(f.eval(c(0.25, 0.0)), c(3.0, 0.0));
        assert_eq!(f.eval(c(0.7, -0.05)), c(3.0, 0.0));
    }

    #[test]
    fn single_mode_on_upper_line() {
        let delta = 0.1;
        let v = TrigPoly::monomial(1, 1.0).eval(c(0.0, delta));
        assert!((v.re - (-TAU * delta).exp()).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn cosine_at_half_period() {
        let v = TrigPoly::cosine(2.0).eval(c(0.5, 0.0));
        assert!((v.re + 2.0).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn conj_reflect_and_shift() {
        // c(x) = e^{2 pi i (x + b/2)}  =>  conj(c)(x - b) = e^{-2 pi i (x - b/2)}
        let b = 0.3819660112501051;
        let cx = TrigPoly::monomial(1, Complex64::from_polar(1.0, TAU * b / 2.0));
        let got = cx.conj_reflect().shift(-b);
        let want = TrigPoly::monomial(-1, Complex64::from_polar(1.0, TAU * b / 2.0));
        for k in -1..=1 {
            assert!((got.coeff(k) - want.coeff(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn json_layout() {
        let f = TrigPoly::from_pairs([(-1, c(0.5, 0.0)), (2, c(0.0, -1.25))]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"degree":2,"coeffs":[[-1,0.5,0.0],[2,0.0,-1.25]]}"#);
        assert!(serde_json::from_str::<TrigPoly>(r#"{"degree":1,"coeffs":[[3,1.0,0.0]]}"#).is_err());
        assert!(serde_json::from_str::<TrigPoly>(r#"{"degree":1,"coeffs":[],"x":1}"#).is_err());
    }

    #[test]
    fn truncation_reports_tail() {
        let f = TrigPoly::from_pairs([(0, c(1.0, 0.0)), (3, c(1e-3, 0.0))]);
        let dom = StripDomain::new(0.1).unwrap();
        let (g, tail) = f.truncate(1, dom);
        assert_eq!(g.degree(), 1);
        assert!((tail - 1e-3 * (TAU * 0.3f64).exp()).abs() < 1e-15);
    }

    fn arb_poly() -> impl Strategy<Value = TrigPoly> {
        (0usize..4).prop_flat_map(|d| {
            prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2 * d + 1).prop_map(move |v| {
                TrigPoly::from_dense(d, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn json_roundtrip_is_exact(f in arb_poly()) {
            let s = serde_json::to_string(&f).unwrap();
            let g: TrigPoly = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(f.degree(), g.degree());
            for k in -(f.degree() as i32)..=f.degree() as i32 {
                prop_assert_eq!(f.coeff(k), g.coeff(k));
            }
        }

        #[test]
        fn product_evaluates_pointwise(f in arb_poly(), g in arb_poly(), x in 0.0f64..1.0, y in -0.1f64..0.1) {
            let z = c(x, y);
            let lhs = (&f * &g).eval(z);
            let rhs = f.eval(z) * g.eval(z);
            prop_assert!((lhs - rhs).norm() <= 1e-11 * (1.0 + rhs.norm()));
        }
    }
}
