use std::f64::consts::LN_2;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use super::kernel;
use super::{AnalyticCocycle, CocycleMap, Mat2};
use crate::analytic::kahan_sum;
use crate::arithmetic::Frequency;
use crate::error::{Error, Result};

/// Phase shift applied after an exact singular hit.
pub(crate) const SINGULAR_SHIFT: f64 = 1e-9;
/// Phases iterated together by the grid drivers.
const LANES: usize = 4;

/// Single-phase walk.
fn walk1<C: CocycleMap>(coc: &C, x: f64, checkpoints: &[u64], mut at: impl FnMut(usize, &Mat2, i64)) -> Result<()> {
    let [r] = kernel::walk(coc, [x], checkpoints, |_, i, m, e2| at(i, m, e2));
    r
}

fn lognorm_of(m: &Mat2, e2: i64) -> f64 {
    m.norm().ln() + e2 as f64 * LN_2
}

/// `log ||D_n(x)||` and the normalized product `D_n(x) / ||D_n(x)||`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterateResult {
    pub lognorm: f64,
    pub frame: Mat2,
}

/// `D_n(x) = D(x + (n-1) beta) ... D(x)`.
pub fn iterate<C: CocycleMap>(coc: &C, x: f64, n: u64) -> Result<IterateResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut out = None;
    walk1(coc, x, &[n], |_, m, e2| {
        let norm = m.norm();
        out = Some(IterateResult {
            lognorm: norm.ln() + e2 as f64 * LN_2,
            frame: m.scale((1.0 / norm).into()),
        });
    })?;
    Ok(out.expect("checkpoint reached"))
}

/// `log ||D_n(x)||` for every `n` in `checkpoints` (strictly increasing), in
/// one pass over the orbit.
pub fn lognorms<C: CocycleMap>(coc: &C, x: f64, checkpoints: &[u64]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; checkpoints.len()];
    walk1(coc, x, checkpoints, |i, m, e2| out[i] = lognorm_of(m, e2))?;
    Ok(out)
}

/// Retries after exact singular hits with the phase shifted by `1e-9`.
fn robust<T>(x: f64, mut f: impl FnMut(f64) -> Result<T>) -> Result<T> {
    let mut y = x;
    for _ in 0..8 {
        match f(y) {
            Err(Error::ExactSingularHit(at)) => {
                warn!("exact singular product at phase {at}; shifting phase {y} by {SINGULAR_SHIFT}");
                y += SINGULAR_SHIFT;
            }
            other => return other,
        }
    }
    f(y)
}

pub(crate) fn lognorms_robust<C: CocycleMap>(coc: &C, x: f64, checkpoints: &[u64]) -> Result<Vec<f64>> {
    robust(x, |y| lognorms(coc, y, checkpoints))
}

/// Uniform phase grid `(m + 1/2) / grid`.
pub fn phase_grid(grid: usize) -> Vec<f64> {
    (0..grid).map(|m| (m as f64 + 0.5) / grid as f64).collect()
}

/// Mean and standard error (sample deviation over `sqrt(len)`), reduced in
/// index order.
pub(crate) fn mean_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = kahan_sum(v.iter().copied()) / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = kahan_sum(v.iter().map(|x| (x - mean).powi(2))) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// One step of a Lyapunov schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleStep {
    pub n: u64,
    /// `L_n`.
    pub l_n: f64,
    /// Grid mean of `(log||D_n|| - log||D_m||) / (n - m)`, `m = n / 2`.
    pub increment: f64,
    pub stderr: f64,
}

/// A Lyapunov exponent estimate, in nats per iterate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LEEstimate {
    pub value: f64,
    pub n: u64,
    pub grid: usize,
    pub stderr: f64,
    pub cutoff_a: f64,
    /// Empty for a single `L_n`.
    pub history: Vec<ScheduleStep>,
}

/// `A = max(1, -<log|d|>)`.
pub fn default_cutoff<C: CocycleMap>(coc: &C) -> Result<f64> {
    Ok(1f64.max(-coc.mean_log_det()?))
}

fn check_det<C: CocycleMap>(coc: &C) -> Result<()> {
    if coc.det_is_zero() {
        Err(Error::IdenticallyZeroDet)
    } else {
        Ok(())
    }
}

/// Per-phase values `f(lognorms at checkpoints)` over the grid, in grid order.
fn over_grid<C, T, F>(coc: &C, xs: &[f64], checkpoints: &[u64], f: F) -> Result<Vec<T>>
where
    C: CocycleMap,
    T: Send,
    F: Fn(&[f64]) -> T + Sync,
{
    let chunks: Vec<Vec<T>> = xs
        .par_chunks(LANES)
        .map(|chunk| {
            if chunk.len() < LANES {
                return chunk.iter().map(|&x| lognorms_robust(coc, x, checkpoints).map(|l| f(&l))).collect();
            }
            let lanes: [f64; LANES] = chunk.try_into().expect("full chunk");
            let mut out = vec![vec![0.0; checkpoints.len()]; LANES];
            let status = kernel::walk(coc, lanes, checkpoints, |l, i, m, e2| out[l][i] = lognorm_of(m, e2));
            status
                .into_iter()
                .zip(out)
                .zip(lanes)
                .map(|((st, row), x)| match st {
                    Ok(()) => Ok(f(&row)),
                    Err(Error::ExactSingularHit(_)) => lognorms_robust(coc, x, checkpoints).map(|l| f(&l)),
                    Err(e) => Err(e),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// `log ||D_n(x)||` at every checkpoint for every phase, in phase order.
pub fn lognorm_table<C: CocycleMap>(coc: &C, xs: &[f64], checkpoints: &[u64]) -> Result<Vec<Vec<f64>>> {
    over_grid(coc, xs, checkpoints, |l| l.to_vec())
}

/// `L_n = (1/n) integral log ||D_n(x)|| dx` on the grid `(m + 1/2)/grid`.
pub fn l_n<C: CocycleMap>(coc: &C, n: u64, grid: usize) -> Result<LEEstimate> {
    if n == 0 || grid < 2 {
        return Err(Error::InvalidArgument("need n >= 1 and grid >= 2".into()));
    }
    check_det(coc)?;
    let cutoff_a = default_cutoff(coc)?;
    let vals = over_grid(coc, &phase_grid(grid), &[n], |l| l[0] / n as f64)?;
    let (value, stderr) = mean_stderr(&vals);
    Ok(LEEstimate { value, n, grid, stderr, cutoff_a, history: Vec::new() })
}

/// Estimates `L = lim L_n` along an increasing schedule.
///
/// Each step records `L_n` and the increment average
/// `(log||D_n|| - log||D_{n/2}||) / (n - n/2)`, which cancels the `O(1/n)`
/// bias of `L_n` coming from the initial transient. The estimate is the last
/// increment average; its error bar is the sampling error plus the last
/// change along the schedule.
pub fn lyapunov<C: CocycleMap>(coc: &C, schedule: &[u64], grid: usize) -> Result<LEEstimate> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("schedule must be nonempty, positive and increasing".into()));
    }
    if grid < 2 {
        return Err(Error::InvalidArgument("grid must be at least 2".into()));
    }
    check_det(coc)?;
    let cutoff_a = default_cutoff(coc)?;
    let mut checkpoints: Vec<u64> = schedule.iter().flat_map(|&n| [n / 2, n]).filter(|&n| n > 0).collect();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let pos = |n: u64| checkpoints.binary_search(&n).ok();
    let rows = over_grid(coc, &phase_grid(grid), &checkpoints, |l| l.to_vec())?;

    let mut history = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let half = n / 2;
        let i = pos(n).unwrap();
        let lns: Vec<f64> = rows.iter().map(|r| r[i] / n as f64).collect();
        let incs: Vec<f64> = rows
            .iter()
            .map(|r| {
                let base = pos(half).map_or(0.0, |j| r[j]);
                (r[i] - base) / (n - half) as f64
            })
            .collect();
        let (l_n, _) = mean_stderr(&lns);
        let (increment, stderr) = mean_stderr(&incs);
        history.push(ScheduleStep { n, l_n, increment, stderr });
    }
    let last = *history.last().unwrap();
    let drift = if history.len() > 1 {
        (last.increment - history[history.len() - 2].increment).abs()
    } else {
        0.0
    };
    Ok(LEEstimate {
        value: last.increment,
        n: last.n,
        grid,
        stderr: last.stderr + drift,
        cutoff_a,
        history,
    })
}

/// `L' = L - <log|det D|> / 2`.
pub fn renorm_le(coc: &AnalyticCocycle, est: &LEEstimate) -> Result<f64> {
    Ok(est.value - 0.5 * coc.mean_log_det()?)
}

/// Lyapunov exponents at a rational frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RationalLe {
    pub l: f64,
    pub l_prime: f64,
}

/// `L(p/q, D) = (1/q) integral log rho(D_q(x)) dx`, integrated over one
/// period `[0, 1/q)` with `grid` midpoints; `L'` subtracts
/// `(1/2q) sum_{j<q} log|det D(x + j p/q)|` pointwise.
pub fn rational_le(coc: &AnalyticCocycle, grid: usize) -> Result<RationalLe> {
    let freq = coc.frequency();
    let Some((_, q)) = freq.as_rational() else {
        return Err(Error::IrrationalFrequency);
    };
    if grid < 1 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    check_det(coc)?;
    let det = coc.det();
    let xs: Vec<f64> = (0..grid).map(|m| (m as f64 + 0.5) / (grid as f64 * q as f64)).collect();
    let pairs: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            robust(x, |y| {
                let (m, e2) = {
                    let mut out = (Mat2::IDENTITY, 0);
                    walk1(coc, y, &[q], |_, m, e2| out = (*m, e2))?;
                    out
                };
                let rho = m.spectral_radius();
                if rho == 0.0 {
                    return Err(Error::ExactSingularHit(y));
                }
                let log_rho = rho.ln() + e2 as f64 * LN_2;
                let log_det = kahan_sum((0..q).map(|j| det.eval_real(freq.phase(y, j)).norm().ln()));
                if !log_det.is_finite() {
                    return Err(Error::ExactSingularHit(y));
                }
                Ok((log_rho / q as f64, (log_rho - 0.5 * log_det) / q as f64))
            })
        })
        .collect::<Result<_>>()?;
    let l = kahan_sum(pairs.iter().map(|p| p.0)) / grid as f64;
    let l_prime = kahan_sum(pairs.iter().map(|p| p.1)) / grid as f64;
    Ok(RationalLe { l, l_prime })
}

/// Fejer-weighted Birkhoff sum `sum_{|j| < R} (R - |j|)/R^2 v(x + j beta)`.
pub fn fejer_average(v: impl Fn(f64) -> f64, x: f64, r: u64, freq: &Frequency) -> f64 {
    if r == 0 {
        return f64::NAN;
    }
    let rr = (r as f64).powi(2);
    let terms = (0..r).flat_map(|j| {
        let w = (r - j) as f64 / rr;
        let fwd = w * v(freq.phase(x, j));
        let back = (j > 0).then(|| w * v((x - freq.rotation(j)).rem_euclid(1.0)));
        std::iter::once(fwd).chain(back)
    });
    kahan_sum(terms)
}

/// `max((1/n) log ||D_n(x)||, -A)`.
pub fn cutoff_un<C: CocycleMap>(coc: &C, x: f64, n: u64, a: f64) -> Result<f64> {
    Ok((iterate(coc, x, n)?.lognorm / n as f64).max(-a))
}
