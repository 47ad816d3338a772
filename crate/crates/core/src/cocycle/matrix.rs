use std::ops::Mul;

use num_complex::Complex64;

/// A complex `2 x 2` matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: ONE, b: ZERO, c: ZERO, d: ONE };

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Self::real(a, 0.0, 0.0, d)
    }

    #[inline]
    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Sum of squared moduli of the entries.
    #[inline]
    pub fn frobenius_sq(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    /// Operator norm from the closed-form largest singular value:
    /// `sigma^2 = (S + sqrt(S - 2|det|) sqrt(S + 2|det|)) / 2` with `S` the
    /// squared Frobenius norm.
    #[inline]
    pub fn norm(&self) -> f64 {
        let s = self.frobenius_sq();
        let dd = 2.0 * self.det().norm();
        let root = (s - dd).max(0.0).sqrt() * (s + dd).sqrt();
        (0.5 * (s + root)).sqrt()
    }

    /// Largest modulus of an eigenvalue.
    pub fn spectral_radius(&self) -> f64 {
        let t = self.trace();
        let s = (t * t - 4.0 * self.det()).sqrt();
        let (p, m) = (t + s, t - s);
        0.5 * p.norm().max(m.norm())
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 {
            return None;
        }
        let r = det.inv();
        Some(Self::new(self.d * r, -self.b * r, -self.c * r, self.a * r))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Largest absolute value among the eight real components.
    #[inline]
    pub fn max_component(&self) -> f64 {
        let v = [
            self.a.re, self.a.im, self.b.re, self.b.im, self.c.re, self.c.im, self.d.re, self.d.im,
        ];
        v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|z| z.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    #[inline]
    fn mul(self, r: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }
}

/// `2^k` as an exact double, `|k| <= 1000`.
#[inline]
pub(crate) fn pow2(k: i32) -> f64 {
    debug_assert!(k.abs() <= 1000);
    f64::from_bits(((1023 + k) as u64) << 52)
}

/// Binary exponent of a positive normal double: `2^e <= x < 2^{e+1}`.
#[inline]
pub(crate) fn exponent(x: f64) -> i32 {
    ((x.to_bits() >> 52) & 0x7ff) as i32 - 1023
}
