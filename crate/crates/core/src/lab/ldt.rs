//! Large deviations of `(1/n) log ||D_n(x)||` from `L_n`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::TrigPoly;
use crate::cocycle::{lognorm_table, mean_stderr, AnalyticCocycle};
use crate::error::{Error, Result};

/// `n = ceil((c kappa^-2 q)^eta)`, capped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NPolicy {
    pub c: f64,
    pub eta: f64,
    pub cap: u64,
}

impl Default for NPolicy {
    fn default() -> Self {
        Self { c: 10.0, eta: 1.1, cap: 1_000_000 }
    }
}

impl NPolicy {
    pub fn n_for(&self, kappa: f64, q: u64) -> u64 {
        (self.c * q as f64 / (kappa * kappa)).powf(self.eta).ceil() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdtConfig {
    pub kappa: f64,
    /// Number of phase samples, at least 1000.
    pub grid: usize,
    pub seed: u64,
    #[serde(default)]
    pub policy: NPolicy,
    /// Denominators below this are reported but left out of the fit.
    #[serde(default)]
    pub q_min: u64,
}

/// Deviation statistics at one denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationReport {
    pub q: u64,
    pub kappa: f64,
    pub n: u64,
    pub l_n: f64,
    /// Fraction of phases with `|(1/n) log||D_n(x)|| - L_n| > kappa`.
    pub empirical_measure: f64,
    /// No phase deviated; the fit uses `1/grid` in place of 0.
    pub below_resolution: bool,
    pub max_deviation: f64,
    pub fitted_c: f64,
}

impl DeviationReport {
    /// The measure used in fits: at least `1/grid`.
    pub fn floored_measure(&self, grid: usize) -> f64 {
        self.empirical_measure.max(1.0 / grid as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LdtResult {
    pub reports: Vec<DeviationReport>,
    /// Decay rate `c` in `measure ~ e^{-c kappa q}`.
    pub fitted_c: f64,
    /// Denominators dropped because their `n` exceeded the cap.
    pub dropped_q: Vec<u64>,
    pub grid: usize,
    pub seed: u64,
    pub phase_offset: f64,
}

impl LdtResult {
    /// Whether every reported raw measure is at most `e^{-c kappa q}`.
    pub fn bounded_by(&self, c: f64) -> bool {
        self.reports.iter().all(|r| r.empirical_measure <= (-c * r.kappa * r.q as f64).exp())
    }

    /// Floored measures are non-increasing in `q`.
    pub fn non_increasing(&self) -> bool {
        self.reports
            .windows(2)
            .all(|w| w[1].floored_measure(self.grid) <= w[0].floored_measure(self.grid))
    }
}

/// Least-squares slope through the origin of `-log(measure)` against `kappa q`.
pub fn fit_decay(points: &[(f64, f64)]) -> f64 {
    let num: f64 = points.iter().map(|(kq, m)| kq * -m.ln()).sum();
    let den: f64 = points.iter().map(|(kq, _)| kq * kq).sum();
    num / den
}

/// Samples the deviation measure on `grid` phases `(m + offset)/grid`, the
/// offset drawn from the seed, for every denominator in `q_list`. All `n`
/// come from a single orbit pass per phase.
pub fn ldt_experiment(coc: &AnalyticCocycle, q_list: &[u64], cfg: &LdtConfig) -> Result<LdtResult> {
    if !(cfg.kappa > 0.0 && cfg.kappa < 1.0) {
        return Err(Error::InvalidArgument(format!("kappa must lie in (0, 1), got {}", cfg.kappa)));
    }
    if cfg.grid < 1000 {
        return Err(Error::InvalidArgument(format!("grid must be at least 1000, got {}", cfg.grid)));
    }
    if q_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("q_list must be strictly increasing".into()));
    }
    let mut kept = Vec::new();
    let mut dropped_q = Vec::new();
    for &q in q_list {
        let n = cfg.policy.n_for(cfg.kappa, q);
        if n > cfg.policy.cap {
            dropped_q.push(q);
        } else {
            kept.push((q, n));
        }
    }
    let usable = kept.iter().filter(|(q, _)| *q >= cfg.q_min).count();
    if usable < 4 {
        return Err(Error::InsufficientQ { needed: 4, have: usable });
    }

    let phase_offset: f64 = ChaCha8Rng::seed_from_u64(cfg.seed).random();
    let xs: Vec<f64> = (0..cfg.grid).map(|m| (m as f64 + phase_offset) / cfg.grid as f64).collect();
    let mut checkpoints: Vec<u64> = kept.iter().map(|k| k.1).collect();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let table = lognorm_table(coc, &xs, &checkpoints)?;

    let mut reports = Vec::with_capacity(kept.len());
    for &(q, n) in &kept {
        let i = checkpoints.binary_search(&n).expect("checkpoint present");
        let u: Vec<f64> = table.iter().map(|row| row[i] / n as f64).collect();
        let (l_n, _) = mean_stderr(&u);
        let devs: Vec<f64> = u.iter().map(|v| (v - l_n).abs()).collect();
        let count = devs.iter().filter(|&&d| d > cfg.kappa).count();
        reports.push(DeviationReport {
            q,
            kappa: cfg.kappa,
            n,
            l_n,
            empirical_measure: count as f64 / cfg.grid as f64,
            below_resolution: count == 0,
            max_deviation: devs.iter().copied().fold(0.0, f64::max),
            fitted_c: 0.0,
        });
    }
    let pts: Vec<(f64, f64)> = reports
        .iter()
        .filter(|r| r.q >= cfg.q_min)
        .map(|r| (r.kappa * r.q as f64, r.floored_measure(cfg.grid)))
        .collect();
    let fitted_c = fit_decay(&pts);
    for r in &mut reports {
        r.fitted_c = fitted_c;
    }
    Ok(LdtResult { reports, fitted_c, dropped_q, grid: cfg.grid, seed: cfg.seed, phase_offset })
}

/// `count` random perturbations `D + P` with `sup_{|Im z| <= delta} ||P(z)|| <= gamma`,
/// certified by the coefficient bound. Each entry of `P` has the degree of
/// the largest entry of `D` (at least 1).
pub fn perturbations(coc: &AnalyticCocycle, gamma: f64, count: usize, seed: u64) -> Vec<AnalyticCocycle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = coc.entries();
    let degree = entries.iter().flatten().map(TrigPoly::degree).max().unwrap_or(0).max(1) as i32;
    let delta = coc.domain().delta();
    (0..count)
        .map(|_| {
            let mut entry = || {
                TrigPoly::from_pairs((-degree..=degree).map(|k| {
                    let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    (k, z)
                }))
            };
            let p = [[entry(), entry()], [entry(), entry()]];
            let bound = p
                .iter()
                .flatten()
                .map(|e| e.coefficient_bound(delta).powi(2))
                .sum::<f64>()
                .sqrt();
            let s = gamma / bound;
            let p = p.map(|row| row.map(|e| e.scale(s)));
            coc.perturbed(&p)
        })
        .collect()
}
