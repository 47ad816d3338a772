//! Lane-parallel product kernel.
//!
//! `L` phases advance in lockstep with every complex quantity split into
//! real and imaginary arrays, which the compiler turns into SIMD code. All
//! drivers (single phase included, with `L = 1`) go through this kernel, and
//! each lane performs the same IEEE operations in the same order whatever
//! `L` is, so results do not depend on how phases are batched.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::matrix::{exponent, pow2};
use super::{CocycleMap, Mat2};
use crate::error::{Error, Result};

/// Products are rescaled by an exact power of two whenever their largest
/// component leaves `[2^-RESCALE_EXP, 2^RESCALE_EXP]`.
const RESCALE_EXP: i32 = 128;
/// The rotated point is recomputed from the reduced phase this often.
const RESYNC: u64 = 64;

/// `L` complex `2 x 2` matrices, entries ordered `a, b, c, d`.
#[derive(Debug, Clone, Copy)]
pub struct MatLanes<const L: usize> {
    pub re: [[f64; L]; 4],
    pub im: [[f64; L]; 4],
}

impl<const L: usize> MatLanes<L> {
    pub fn identity() -> Self {
        let mut re = [[0.0; L]; 4];
        re[0] = [1.0; L];
        re[3] = [1.0; L];
        Self { re, im: [[0.0; L]; 4] }
    }

    pub fn lane(&self, l: usize) -> Mat2 {
        let z = |i: usize| Complex64::new(self.re[i][l], self.im[i][l]);
        Mat2::new(z(0), z(1), z(2), z(3))
    }

    pub fn from_fn(f: impl Fn(usize) -> Mat2) -> Self {
        let mut out = Self { re: [[0.0; L]; 4], im: [[0.0; L]; 4] };
        for l in 0..L {
            let m = f(l);
            for (i, z) in [m.a, m.b, m.c, m.d].into_iter().enumerate() {
                out.re[i][l] = z.re;
                out.im[i][l] = z.im;
            }
        }
        out
    }

    /// `self * rhs`, lane by lane.
    #[inline(always)]
    fn mul(&self, r: &Self) -> Self {
        let mut out = Self { re: [[0.0; L]; 4], im: [[0.0; L]; 4] };
        // (row, col) -> (left_0, right_0, left_1, right_1)
        const IDX: [(usize, usize, usize, usize); 4] = [(0, 0, 1, 2), (0, 1, 1, 3), (2, 0, 3, 2), (2, 1, 3, 3)];
        for (o, &(l0, r0, l1, r1)) in IDX.iter().enumerate() {
            for l in 0..L {
                let (ar, ai) = (self.re[l0][l], self.im[l0][l]);
                let (br, bi) = (r.re[r0][l], r.im[r0][l]);
                let (cr, ci) = (self.re[l1][l], self.im[l1][l]);
                let (dr, di) = (r.re[r1][l], r.im[r1][l]);
                out.re[o][l] = (ar * br - ai * bi) + (cr * dr - ci * di);
                out.im[o][l] = (ar * bi + ai * br) + (cr * di + ci * dr);
            }
        }
        out
    }

    #[inline(always)]
    fn max_component(&self, l: usize) -> f64 {
        let mut s = 0.0f64;
        for i in 0..4 {
            s = s.max(self.re[i][l].abs()).max(self.im[i][l].abs());
        }
        s
    }

    #[inline(always)]
    fn scale_lane(&mut self, l: usize, s: f64) {
        for i in 0..4 {
            self.re[i][l] *= s;
            self.im[i][l] *= s;
        }
    }
}

/// Dense coefficient table evaluated lane-parallel by Horner's rule in `w`
/// for `k >= 0` and in `conj(w) = 1/w` for `k < 0`.
#[derive(Debug, Clone)]
pub(crate) struct LaneTable {
    degree: usize,
    re: Vec<[f64; 4]>,
    im: Vec<[f64; 4]>,
}

impl LaneTable {
    pub fn new(coeff: impl Fn(i32) -> [Complex64; 4], degree: usize) -> Self {
        let d = degree as i32;
        let rows: Vec<[Complex64; 4]> = (-d..=d).map(coeff).collect();
        Self {
            degree,
            re: rows.iter().map(|r| r.map(|z| z.re)).collect(),
            im: rows.iter().map(|r| r.map(|z| z.im)).collect(),
        }
    }

    #[inline(always)]
    pub fn eval<const L: usize>(&self, wr: &[f64; L], wi: &[f64; L]) -> MatLanes<L> {
        let d = self.degree;
        let mut out = MatLanes { re: [[0.0; L]; 4], im: [[0.0; L]; 4] };
        for i in 0..4 {
            for l in 0..L {
                out.re[i][l] = self.re[2 * d][i];
                out.im[i][l] = self.im[2 * d][i];
            }
        }
        for k in (d..2 * d).rev() {
            let (cr, ci) = (self.re[k], self.im[k]);
            for i in 0..4 {
                for l in 0..L {
                    let (pr, pi) = (out.re[i][l], out.im[i][l]);
                    out.re[i][l] = (pr * wr[l] - pi * wi[l]) + cr[i];
                    out.im[i][l] = (pr * wi[l] + pi * wr[l]) + ci[i];
                }
            }
        }
        if d > 0 {
            let mut nr = [[0.0; L]; 4];
            let mut ni = [[0.0; L]; 4];
            for k in 0..d {
                let (cr, ci) = (self.re[k], self.im[k]);
                for i in 0..4 {
                    for l in 0..L {
                        // (n + c) * conj(w)
                        let (sr, si) = (nr[i][l] + cr[i], ni[i][l] + ci[i]);
                        nr[i][l] = sr * wr[l] + si * wi[l];
                        ni[i][l] = si * wr[l] - sr * wi[l];
                    }
                }
            }
            for i in 0..4 {
                for l in 0..L {
                    out.re[i][l] += nr[i][l];
                    out.im[i][l] += ni[i][l];
                }
            }
        }
        out
    }
}

/// Walks `D_n(x_l)` for `n = 1, ..., checkpoints.last()` on all lanes and
/// calls `at(lane, index, M, e)` with `D_n(x_l) = 2^e M` at every checkpoint
/// (strictly increasing, positive). A lane whose product becomes exactly zero
/// or non-finite stops and reports the error; the others continue.
pub(crate) fn walk<C, F, const L: usize>(coc: &C, xs: [f64; L], checkpoints: &[u64], mut at: F) -> [Result<()>; L]
where
    C: CocycleMap,
    F: FnMut(usize, usize, &Mat2, i64),
{
    let Some(&n_max) = checkpoints.last() else {
        return std::array::from_fn(|_| Ok(()));
    };
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return std::array::from_fn(|_| {
            Err(Error::InvalidArgument("checkpoints must be positive and strictly increasing".into()))
        });
    }
    let freq = coc.frequency();
    let step = Complex64::from_polar(1.0, TAU * freq.rotation(1));
    let (sr, si) = (step.re, step.im);
    let mut wr = [0.0; L];
    let mut wi = [0.0; L];
    let resync = |j: u64, wr: &mut [f64; L], wi: &mut [f64; L]| {
        for l in 0..L {
            let w = Complex64::from_polar(1.0, TAU * freq.phase(xs[l], j));
            wr[l] = w.re;
            wi[l] = w.im;
        }
    };
    resync(0, &mut wr, &mut wi);

    let mut m = MatLanes::<L>::identity();
    let mut e2 = [0i64; L];
    let mut status: [Result<()>; L] = std::array::from_fn(|_| Ok(()));
    let mut live = [true; L];
    let mut next = 0;
    let hi = pow2(RESCALE_EXP);
    let lo = pow2(-RESCALE_EXP);
    for j in 1..=n_max {
        let d = coc.eval_lanes(&wr, &wi);
        m = d.mul(&m);
        for l in 0..L {
            let s = m.max_component(l);
            if !(s > lo && s < hi) && live[l] {
                if s == 0.0 {
                    status[l] = Err(Error::ExactSingularHit(freq.phase(xs[l], j - 1)));
                    live[l] = false;
                } else if !s.is_finite() {
                    status[l] = Err(Error::Overflow(format!("matrix product is not finite at step {j}")));
                    live[l] = false;
                } else {
                    let k = exponent(s);
                    m.scale_lane(l, pow2(-k));
                    e2[l] += k as i64;
                }
            }
        }
        if checkpoints[next] == j {
            for l in 0..L {
                if live[l] {
                    at(l, next, &m.lane(l), e2[l]);
                }
            }
            next += 1;
            if next == checkpoints.len() {
                break;
            }
        }
        if j % RESYNC == 0 {
            resync(j, &mut wr, &mut wi);
        } else {
            for l in 0..L {
                let (a, b) = (wr[l], wi[l]);
                wr[l] = a * sr - b * si;
                wi[l] = a * si + b * sr;
            }
        }
    }
    status
}
