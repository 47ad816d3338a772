//! Birkhoff sums of `log|f|` along the rotation.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{mean_log, torus_zeros, TrigPoly};
use crate::arithmetic::Frequency;
use crate::cocycle::phase_grid;
use crate::error::{Error, Result};

/// One row of the Birkhoff table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BirkhoffRow {
    pub n: u64,
    /// `sup_x |(1/n) sum_{j=1}^n log|f(x + j beta)| - <log|f|>|` over the grid.
    pub sup_error: f64,
    /// `sup_x N n^{-1/r} log^2(n) |min_{j <= n} log|f(x + j beta)||`.
    pub zero_term: f64,
    /// `1/n`.
    pub rate_term: f64,
    /// `sup_x error(x) / (zero_term(x) + 1/n)`: the smallest constant
    /// `C = C_3 = C_4` for which the bound holds at this `n`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirkhoffTable {
    pub rows: Vec<BirkhoffRow>,
    /// Zeros of `f` on the torus, with multiplicity.
    pub zero_count: usize,
    pub r: f64,
    pub mean: f64,
    /// Largest ratio over `n <= n_max / 2`.
    pub calibration_max: f64,
    /// `FIT_HEADROOM * calibration_max`; `C_3 = C_4 = fitted_constant`,
    /// except `C_3 = 0` when `f` has no torus zeros.
    pub fitted_constant: f64,
    pub c3: f64,
    pub c4: f64,
    /// Largest ratio over `n_max / 2 < n <= n_max`.
    pub out_of_sample_ratio: f64,
}

impl BirkhoffTable {
    pub fn holds_out_of_sample(&self) -> bool {
        self.out_of_sample_ratio <= self.fitted_constant
    }
}

/// Headroom applied to the calibration maximum. The supremum of `n error`
/// over a finite range only approaches its limit, so the raw maximum of the
/// first half can be exceeded by a hair on the second.
pub const FIT_HEADROOM: f64 = 1.05;

/// Per-`n` suprema over phases, combined with `max` (exact and order-free).
#[derive(Clone)]
struct Sup {
    err: Vec<f64>,
    zero: Vec<f64>,
    ratio: Vec<f64>,
}

impl Sup {
    fn new(n: usize) -> Self {
        Self { err: vec![0.0; n], zero: vec![0.0; n], ratio: vec![0.0; n] }
    }

    fn merge(mut self, o: Sup) -> Sup {
        for i in 0..self.err.len() {
            self.err[i] = self.err[i].max(o.err[i]);
            self.zero[i] = self.zero[i].max(o.zero[i]);
            self.ratio[i] = self.ratio[i].max(o.ratio[i]);
        }
        self
    }
}

/// Computes the error at every `n <= max(n_list)` on `grid` phases, reports
/// the rows in `n_list`, fits `C` on the first half of the range and
/// evaluates it on the second. For zero-free `f` the zero term vanishes and
/// `C` is the `C_4` of the pure `1/n` rate.
pub fn birkhoff_error(f: &TrigPoly, freq: &Frequency, n_list: &[u64], r: f64, grid: usize) -> Result<BirkhoffTable> {
    if f.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let Some(&n_max) = n_list.iter().max() else {
        return Err(Error::InvalidArgument("n_list is empty".into()));
    };
    if n_list.contains(&0) || grid == 0 {
        return Err(Error::InvalidArgument("n and grid must be positive".into()));
    }
    let mean = mean_log(f)?;
    let zero_count: usize = torus_zeros(f)?.iter().map(|z| z.multiplicity).sum();
    let len = n_max as usize;
    let weight: Vec<f64> = (1..=n_max)
        .map(|n| {
            let n = n as f64;
            zero_count as f64 * n.powf(-1.0 / r) * n.ln().powi(2)
        })
        .collect();

    let sup = phase_grid(grid)
        .par_iter()
        .fold(
            || Sup::new(len),
            |mut acc, &x| {
                let (mut s, mut comp) = (0.0f64, 0.0f64);
                let mut min = f64::INFINITY;
                for j in 1..=n_max {
                    let v = f.eval_real(freq.phase(x, j)).norm().ln();
                    min = min.min(v);
                    let y = v - comp;
                    let t = s + y;
                    comp = (t - s) - y;
                    s = t;
                    let i = (j - 1) as usize;
                    let err = (s / j as f64 - mean).abs();
                    let zero = weight[i] * min.abs();
                    acc.err[i] = acc.err[i].max(err);
                    acc.zero[i] = acc.zero[i].max(zero);
                    acc.ratio[i] = acc.ratio[i].max(err / (zero + 1.0 / j as f64));
                }
                acc
            },
        )
        .reduce(|| Sup::new(len), Sup::merge);

    let half = len / 2;
    let calibration_max = sup.ratio[..half.max(1)].iter().copied().fold(0.0, f64::max);
    let fitted_constant = FIT_HEADROOM * calibration_max;
    let out_of_sample_ratio = sup.ratio[half.max(1)..].iter().copied().fold(0.0, f64::max);
    let rows = n_list
        .iter()
        .map(|&n| {
            let i = (n - 1) as usize;
            BirkhoffRow {
                n,
                sup_error: sup.err[i],
                zero_term: sup.zero[i],
                rate_term: 1.0 / n as f64,
                ratio: sup.ratio[i],
            }
        })
        .collect();
    let c3 = if zero_count == 0 { 0.0 } else { fitted_constant };
    Ok(BirkhoffTable { rows, zero_count, r, mean, calibration_max, fitted_constant, c3, c4: fitted_constant, out_of_sample_ratio })
}
