//! The `k_0`-excluded trigonometric product along a convergent denominator.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::kahan_sum;
use crate::arithmetic::Frequency;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigProduct {
    pub q: u64,
    pub k0: u64,
    /// `sum_{k=1, k != k0}^{q} log|e^{2 pi i (x + k beta)} - e^{2 pi i x0}|`.
    pub sum: f64,
    /// `C_5 log q`.
    pub bound: f64,
}

/// Evaluates the product sum at denominator `q = q_index`-th stored
/// convergent. `k0` minimizes `|sin(pi (x - x0 + k beta))|`, the chord
/// `|e^{2 pi i (x + k beta)} - e^{2 pi i x0}| = 2 |sin(pi (x + k beta - x0))|`.
pub fn trig_product(x: f64, x0: f64, freq: &Frequency, q_index: usize, c5: f64) -> Result<TrigProduct> {
    let conv = freq.convergents();
    let Some(c) = conv.get(q_index) else {
        return Err(Error::InsufficientDepth { n: q_index as u64, largest: conv.len() as u64 });
    };
    let q = c.q;
    let t = x - x0;
    let chord = |k: u64| 2.0 * (PI * freq.phase(t, k)).sin().abs();
    let k0 = (1..=q)
        .min_by(|&a, &b| chord(a).total_cmp(&chord(b)))
        .expect("q >= 1");
    let sum = kahan_sum((1..=q).filter(|&k| k != k0).map(|k| chord(k).ln()));
    Ok(TrigProduct { q, k0, sum, bound: c5 * (q as f64).ln() })
}

/// Seeded phase pairs `(x, x0)` uniform on the torus.
pub fn random_pairs(seed: u64, count: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (rng.random(), rng.random())).collect()
}

/// `C_5 = max |sum| / log q` over the given convergent indices (with `q >= 2`)
/// and phase pairs.
pub fn calibrate_c5(freq: &Frequency, q_indices: &[usize], pairs: &[(f64, f64)]) -> Result<f64> {
    let mut c5 = 0.0f64;
    for &i in q_indices {
        for &(x, x0) in pairs {
            let t = trig_product(x, x0, freq, i, 0.0)?;
            if t.q >= 2 {
                c5 = c5.max(t.sum.abs() / (t.q as f64).ln());
            }
        }
    }
    Ok(c5)
}
