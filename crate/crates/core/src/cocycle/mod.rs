//! Analytic `2 x 2` cocycles `(beta, D)`: construction, iteration and
//! Lyapunov exponents.

mod build;
mod iterate;
mod kernel;
mod matrix;

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::analytic::{mean_log, StripDomain, TrigPoly};
use crate::arithmetic::Frequency;
use crate::error::{Error, Result};

pub use build::{
    build_almost_mathieu, build_harper, build_jacobi, harper_c, HarperParams, JacobiCocycle,
};
pub use iterate::{
    cutoff_un, default_cutoff, fejer_average, iterate, l_n, lognorms, lyapunov, phase_grid,
    rational_le, renorm_le, IterateResult, LEEstimate, RationalLe, ScheduleStep,
};
pub use iterate::lognorm_table;
pub(crate) use iterate::mean_stderr;
use kernel::LaneTable;
pub use kernel::MatLanes;
pub use matrix::Mat2;

/// Anything that can be iterated over the rotation by `beta`: a matrix
/// function on the unit circle `w = e^{2 pi i x}`.
pub trait CocycleMap: Sync {
    fn frequency(&self) -> &Frequency;

    fn at_unit(&self, w: Complex64) -> Mat2;

    /// The matrices at the unit-circle points `wr + i wi`, lane by lane.
    fn eval_lanes<const L: usize>(&self, wr: &[f64; L], wi: &[f64; L]) -> MatLanes<L>;

    /// `<log|det D|>`.
    fn mean_log_det(&self) -> Result<f64>;

    /// True when `det D` vanishes identically.
    fn det_is_zero(&self) -> bool;
}

/// An analytic cocycle `(beta, D)` with `D` a matrix of trigonometric
/// polynomials. The determinant is formed symbolically at construction.
#[derive(Debug, Clone)]
pub struct AnalyticCocycle {
    freq: Frequency,
    entries: [TrigPoly; 4],
    det: TrigPoly,
    dom: StripDomain,
    table: LaneTable,
    mean_log_det: OnceLock<Result<f64>>,
}

impl AnalyticCocycle {
    /// `entries = [[a, b], [c, d]]`.
    pub fn new(freq: Frequency, entries: [[TrigPoly; 2]; 2], dom: StripDomain) -> Self {
        let [[a, b], [c, d]] = entries;
        let entries = [a, b, c, d];
        let det = (&(&entries[0] * &entries[3]) - &(&entries[1] * &entries[2])).trimmed();
        let degree = entries.iter().map(TrigPoly::degree).max().unwrap_or(0);
        let table = LaneTable::new(
            |k| [entries[0].coeff(k), entries[1].coeff(k), entries[2].coeff(k), entries[3].coeff(k)],
            degree,
        );
        Self { freq, entries, det, dom, table, mean_log_det: OnceLock::new() }
    }

    /// The constant cocycle `x -> m`.
    pub fn constant(m: Mat2, freq: Frequency, dom: StripDomain) -> Self {
        let t = TrigPoly::constant;
        Self::new(freq, [[t(m.a), t(m.b)], [t(m.c), t(m.d)]], dom)
    }

    /// Entry `(i, j)`, zero-based.
    pub fn entry(&self, i: usize, j: usize) -> &TrigPoly {
        &self.entries[2 * i + j]
    }

    pub fn entries(&self) -> [[TrigPoly; 2]; 2] {
        let e = &self.entries;
        [[e[0].clone(), e[1].clone()], [e[2].clone(), e[3].clone()]]
    }

    pub fn det(&self) -> &TrigPoly {
        &self.det
    }

    pub fn domain(&self) -> StripDomain {
        self.dom
    }

    /// The matrix at a complex phase.
    pub fn at(&self, z: Complex64) -> Mat2 {
        let e = &self.entries;
        Mat2::new(e[0].eval(z), e[1].eval(z), e[2].eval(z), e[3].eval(z))
    }

    /// The matrix at a real phase.
    pub fn at_real(&self, x: f64) -> Mat2 {
        self.at_unit(Complex64::from_polar(1.0, std::f64::consts::TAU * x))
    }

    /// Entrywise sum `D + P`.
    pub fn perturbed(&self, p: &[[TrigPoly; 2]; 2]) -> Self {
        let e = &self.entries;
        Self::new(
            self.freq.clone(),
            [[&e[0] + &p[0][0], &e[1] + &p[0][1]], [&e[2] + &p[1][0], &e[3] + &p[1][1]]],
            self.dom,
        )
    }

    /// Upper bound for `sup_{|Im z| <= delta} ||D(z)||`: the Frobenius norm of the
    /// entrywise coefficient bounds.
    pub fn strip_norm_bound(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.coefficient_bound(self.dom.delta()).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// The same matrix function over another frequency.
    pub fn with_frequency(&self, freq: Frequency) -> Self {
        Self { freq, mean_log_det: self.mean_log_det.clone(), ..self.clone() }
    }
}

impl CocycleMap for AnalyticCocycle {
    fn frequency(&self) -> &Frequency {
        &self.freq
    }

    #[inline]
    fn at_unit(&self, w: Complex64) -> Mat2 {
        self.table.eval(&[w.re], &[w.im]).lane(0)
    }

    #[inline(always)]
    fn eval_lanes<const L: usize>(&self, wr: &[f64; L], wi: &[f64; L]) -> MatLanes<L> {
        self.table.eval(wr, wi)
    }

    fn mean_log_det(&self) -> Result<f64> {
        self.mean_log_det
            .get_or_init(|| {
                if self.det.is_zero() {
                    Err(Error::IdenticallyZeroDet)
                } else {
                    mean_log(&self.det)
                }
            })
            .clone()
    }

    fn det_is_zero(&self) -> bool {
        self.det.is_zero()
    }
}

/// `D' = D / sqrt|det D|`, divided pointwise. Only meaningful away from the
/// zeros of `det D`; used to cross-check the telescoped renormalization.
#[derive(Debug, Clone, Copy)]
pub struct PointwiseRenormalized<'a>(pub &'a AnalyticCocycle);

impl CocycleMap for PointwiseRenormalized<'_> {
    fn frequency(&self) -> &Frequency {
        &self.0.freq
    }

    #[inline]
    fn at_unit(&self, w: Complex64) -> Mat2 {
        self.eval_lanes(&[w.re], &[w.im]).lane(0)
    }

    fn eval_lanes<const L: usize>(&self, wr: &[f64; L], wi: &[f64; L]) -> MatLanes<L> {
        let m = self.0.eval_lanes(wr, wi);
        MatLanes::from_fn(|l| {
            let d = m.lane(l);
            d.scale(Complex64::new(d.det().norm().sqrt().recip(), 0.0))
        })
    }

    fn mean_log_det(&self) -> Result<f64> {
        Ok(0.0)
    }

    fn det_is_zero(&self) -> bool {
        self.0.det_is_zero()
    }
}
