//! Parameter and frequency sweeps of `(L, L')`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{count_zeros, AnnulusContour};
use crate::arithmetic::Frequency;
use crate::cocycle::{lyapunov, rational_le, renorm_le, AnalyticCocycle};
use crate::error::{Error, Result};

/// Numerical budget of one Lyapunov estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeConfig {
    pub schedule: Vec<u64>,
    pub grid: usize,
}

impl Default for LeConfig {
    fn default() -> Self {
        Self { schedule: vec![1000, 2000, 4000], grid: 128 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeValue {
    pub l: f64,
    pub l_prime: f64,
    pub stderr: f64,
}

/// Computes `(L, L')` for one cocycle.
pub fn le_value(coc: &AnalyticCocycle, cfg: &LeConfig) -> Result<LeValue> {
    let est = lyapunov(coc, &cfg.schedule, cfg.grid)?;
    Ok(LeValue { l: est.value, l_prime: renorm_le(coc, &est)?, stderr: est.stderr })
}

/// A pair of neighbouring path points whose `L'` difference exceeded five
/// combined standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpCandidate {
    /// Index of the left point in the path.
    pub index: usize,
    pub midpoint: f64,
    pub delta: f64,
    pub sigma: f64,
    /// Larger of the two half-step differences.
    pub half_delta: f64,
    pub half_sigma: f64,
    /// Signed share of `delta` carried by the larger half.
    pub share: f64,
    /// The jump survived the halving: the larger half-step difference is
    /// above five combined standard errors, and the change stays monotone
    /// across the midpoint with at least three quarters of it in one half.
    pub persistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityScan {
    pub parameter_path: Vec<f64>,
    pub le_values: Vec<LeValue>,
    /// Max of `|delta L'| / step` over adjacent pairs of the refined path.
    pub modulus: f64,
    pub candidates: Vec<JumpCandidate>,
}

impl ContinuityScan {
    /// Persistent JUMP flags.
    pub fn jumps(&self) -> Vec<JumpCandidate> {
        self.candidates.iter().copied().filter(|c| c.persistent).collect()
    }
}

fn sigma(a: &LeValue, b: &LeValue) -> f64 {
    a.stderr.hypot(b.stderr)
}

/// Sweeps `family` along `path` at a fixed budget. Each candidate pair is
/// refined once at its midpoint.
pub fn continuity_scan<F>(family: F, path: &[f64], cfg: &LeConfig) -> Result<ContinuityScan>
where
    F: Fn(f64) -> Result<AnalyticCocycle> + Sync,
{
    if path.len() < 2 {
        return Err(Error::InvalidArgument("path needs at least two points".into()));
    }
    if path.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("path must be strictly increasing".into()));
    }
    let eval = |t: f64| family(t).and_then(|c| le_value(&c, cfg));
    let le_values: Vec<LeValue> = path.par_iter().map(|&t| eval(t)).collect::<Result<_>>()?;

    let flagged: Vec<usize> = (0..path.len() - 1)
        .filter(|&i| {
            let (a, b) = (&le_values[i], &le_values[i + 1]);
            (b.l_prime - a.l_prime).abs() > 5.0 * sigma(a, b)
        })
        .collect();
    let mids: Vec<LeValue> = flagged
        .par_iter()
        .map(|&i| eval(0.5 * (path[i] + path[i + 1])))
        .collect::<Result<_>>()?;

    let mut candidates = Vec::with_capacity(flagged.len());
    let mut refined: Vec<(f64, f64)> = Vec::with_capacity(path.len() + mids.len());
    let mut k = 0;
    for i in 0..path.len() {
        refined.push((path[i], le_values[i].l_prime));
        if k < flagged.len() && flagged[k] == i {
            let (a, b, m) = (&le_values[i], &le_values[i + 1], &mids[k]);
            let t = 0.5 * (path[i] + path[i + 1]);
            let signed = b.l_prime - a.l_prime;
            let delta = signed.abs();
            let (left, right) = (m.l_prime - a.l_prime, b.l_prime - m.l_prime);
            let (big, half_sigma) = if left.abs() >= right.abs() { (left, sigma(a, m)) } else { (right, sigma(m, b)) };
            let half_delta = big.abs();
            let share = big / signed;
            let slack = 5.0 * half_sigma / delta;
            candidates.push(JumpCandidate {
                index: i,
                midpoint: t,
                delta,
                sigma: sigma(a, b),
                half_delta,
                half_sigma,
                share,
                persistent: half_delta > 5.0 * half_sigma && (0.75..=1.0 + slack).contains(&share),
            });
            refined.push((t, m.l_prime));
            k += 1;
        }
    }
    let modulus = refined
        .windows(2)
        .map(|w| (w[1].1 - w[0].1).abs() / (w[1].0 - w[0].0))
        .fold(0.0, f64::max);
    Ok(ContinuityScan { parameter_path: path.to_vec(), le_values, modulus, candidates })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Guarantee {
    /// The determinant has no zeros in the strip.
    Guaranteed,
    NonGuaranteed,
}

impl std::fmt::Display for Guarantee {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Guarantee::Guaranteed => "GUARANTEED",
            Guarantee::NonGuaranteed => "NON-GUARANTEED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyGap {
    pub p: u64,
    pub q: u64,
    pub gap: f64,
    pub gap_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyScan {
    /// `p/q` for every convergent, then the target `beta`.
    pub scan: ContinuityScan,
    pub gaps: Vec<FrequencyGap>,
    pub label: Guarantee,
}

/// Compares `rational_le` at the convergents `p/q` of `target` with the
/// requested denominators against `lyapunov` at `target`.
pub fn frequency_scan<F>(
    builder: F,
    target: &Frequency,
    denominators: &[u64],
    rational_grid: usize,
    cfg: &LeConfig,
) -> Result<FrequencyScan>
where
    F: Fn(&Frequency) -> Result<AnalyticCocycle> + Sync,
{
    let base = builder(target)?;
    let contour = AnnulusContour::from_strip(base.domain());
    let label = match count_zeros(base.det(), &contour) {
        Ok(0) => Guarantee::Guaranteed,
        _ => Guarantee::NonGuaranteed,
    };
    let mut picks = Vec::with_capacity(denominators.len());
    for &q in denominators {
        let c = target
            .convergents()
            .iter()
            .find(|c| c.q == q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a stored convergent denominator")))?;
        picks.push((c.p, c.q));
    }
    let target_le = le_value(&base, cfg)?;
    let rationals: Vec<LeValue> = picks
        .par_iter()
        .map(|&(p, q)| {
            let coc = builder(&Frequency::rational(p, q)?)?;
            let r = rational_le(&coc, rational_grid)?;
            Ok(LeValue { l: r.l, l_prime: r.l_prime, stderr: 0.0 })
        })
        .collect::<Result<_>>()?;

    let gaps = picks
        .iter()
        .zip(&rationals)
        .map(|(&(p, q), r)| FrequencyGap {
            p,
            q,
            gap: (r.l - target_le.l).abs(),
            gap_prime: (r.l_prime - target_le.l_prime).abs(),
        })
        .collect();
    let mut path: Vec<(f64, LeValue)> = picks.iter().map(|&(p, q)| p as f64 / q as f64).zip(rationals).collect();
    path.push((target.beta(), target_le));
    // Convergents alternate around beta; sort for an ordered path.
    path.sort_by(|a, b| a.0.total_cmp(&b.0));
    let modulus = path
        .windows(2)
        .map(|w| (w[1].1.l_prime - w[0].1.l_prime).abs() / (w[1].0 - w[0].0))
        .fold(0.0, f64::max);
    let scan = ContinuityScan {
        parameter_path: path.iter().map(|p| p.0).collect(),
        le_values: path.iter().map(|p| p.1).collect(),
        modulus,
        candidates: Vec::new(),
    };
    Ok(FrequencyScan { scan, gaps, label })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::StripDomain;
    use crate::cocycle::{build_harper, HarperParams, Mat2};

    fn dom() -> StripDomain {
        StripDomain::new(0.1).unwrap()
    }

    #[test]
    fn constant_path_is_linear() {
        let g = Frequency::golden(30);
        let path: Vec<f64> = (0..=10).map(|i| 1.0 + i as f64 / 10.0).collect();
        let cfg = LeConfig { schedule: vec![10, 20], grid: 4 };
        let s = continuity_scan(|t| Ok(AnalyticCocycle::constant(Mat2::real(t, 0.0, 0.0, 1.0), g.clone(), dom())), &path, &cfg)
            .unwrap();
        for (t, v) in path.iter().zip(&s.le_values) {
            assert!((v.l - t.ln()).abs() < 1e-14);
            assert!((v.l_prime - 0.5 * t.ln()).abs() < 1e-14);
        }
        assert!(s.jumps().is_empty());
        // Zero stderr makes every pair a candidate; none persists, and the
        // steepest refined slope of log(t)/2 is on [1, 1.05].
        assert_eq!(s.candidates.len(), 10);
        assert!((s.modulus - 10.0 * 1.05f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn step_is_flagged() {
        let g = Frequency::golden(30);
        let path: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
        let cfg = LeConfig { schedule: vec![10, 20], grid: 4 };
        let step = |t: f64| {
            let a = if t < 0.3 { 2.0 } else { 3.0 } + 0.1 * t;
            Ok(AnalyticCocycle::constant(Mat2::real(a, 0.0, 0.0, 1.0), g.clone(), dom()))
        };
        let s = continuity_scan(step, &path, &cfg).unwrap();
        let jumps = s.jumps();
        assert_eq!(jumps.len(), 1);
        assert_eq!(jumps[0].index, 2);
        assert!((jumps[0].midpoint - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn oscillation_is_not_a_jump() {
        let g = Frequency::golden(30);
        let cfg = LeConfig { schedule: vec![10, 20], grid: 4 };
        // exp(sin) overshoots between the path points.
        let f = |t: f64| Ok(AnalyticCocycle::constant(Mat2::real((20.0 * t).sin().exp() + 1.0, 0.0, 0.0, 1.0), g.clone(), dom()));
        let s = continuity_scan(f, &[0.0, 0.3], &cfg).unwrap();
        assert_eq!(s.candidates.len(), 1);
        assert!(s.candidates[0].share > 1.0);
        assert!(s.jumps().is_empty());
    }

    #[test]
    fn constant_frequency_gaps_vanish() {
        let g = Frequency::golden(30);
        let m = Mat2::real(3.0, 1.0, 0.0, 0.5);
        let cfg = LeConfig { schedule: vec![100, 200], grid: 4 };
        let s = frequency_scan(|f| Ok(AnalyticCocycle::constant(m, f.clone(), dom())), &g, &[5, 8, 13], 4, &cfg).unwrap();
        assert_eq!(s.label, Guarantee::Guaranteed);
        assert!(s.gaps.iter().all(|g| g.gap < 1e-12 && g.gap_prime < 1e-12));
        assert_eq!(s.scan.parameter_path.len(), 4);
    }

    #[test]
    fn singular_det_is_labelled() {
        let g = Frequency::golden(30);
        let p = HarperParams::new(1.0, 2.0, 1.0, 0.0);
        let cfg = LeConfig { schedule: vec![100, 200], grid: 8 };
        let s = frequency_scan(|f| build_harper(&p, f, dom()), &g, &[5, 8], 8, &cfg).unwrap();
        assert_eq!(s.label, Guarantee::NonGuaranteed);
        assert_eq!(s.label.to_string(), "NON-GUARANTEED");
    }

    #[test]
    fn rejects_unordered_paths() {
        let g = Frequency::golden(30);
        let f = |t: f64| Ok(AnalyticCocycle::constant(Mat2::real(t, 0.0, 0.0, 1.0), g.clone(), dom()));
        assert!(continuity_scan(f, &[1.0, 1.0], &LeConfig::default()).is_err());
        assert!(continuity_scan(f, &[1.0], &LeConfig::default()).is_err());
    }
}
