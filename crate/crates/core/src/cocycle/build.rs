use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::AnalyticCocycle;
use crate::analytic::{mean_log, StripDomain, TrigPoly};
use crate::arithmetic::Frequency;
use crate::error::{Error, Result};

/// Parameters of the extended Harper model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarperParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    #[serde(rename = "energy")]
    pub e: f64,
}

impl HarperParams {
    pub fn new(lambda1: f64, lambda2: f64, lambda3: f64, e: f64) -> Self {
        Self { lambda1, lambda2, lambda3, e }
    }

    fn validate(&self) -> Result<()> {
        let l = [self.lambda1, self.lambda2, self.lambda3];
        if l.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidArgument(format!("couplings must be finite and non-negative, got {l:?}")));
        }
        if l.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidArgument("couplings are all zero".into()));
        }
        if !self.e.is_finite() {
            return Err(Error::InvalidArgument("energy must be finite".into()));
        }
        Ok(())
    }
}

/// Transfer cocycle `A^E` of a Jacobi operator together with the divisor `c`
/// of the normalized cocycle `B^E = A^E / c`. `B^E` is never formed.
#[derive(Debug, Clone)]
pub struct JacobiCocycle {
    pub transfer: AnalyticCocycle,
    pub divisor: TrigPoly,
}

impl JacobiCocycle {
    /// `L(beta, B^E) = L(beta, A^E) - <log|c|>`.
    pub fn le_b(&self, le_a: f64) -> Result<f64> {
        if self.divisor.is_zero() {
            return Err(Error::ZeroC);
        }
        Ok(le_a - mean_log(&self.divisor)?)
    }
}

/// `A^E(x) = [[E - v(x), -conj(c)(x - beta)], [c(x), 0]]`.
pub fn build_jacobi(
    v: &TrigPoly,
    c: &TrigPoly,
    e: f64,
    freq: &Frequency,
    dom: StripDomain,
) -> Result<JacobiCocycle> {
    let scale = v.terms().map(|(_, z)| z.norm()).fold(1.0, f64::max);
    let asym = v.real_asymmetry();
    if asym > 1e-12 * scale {
        return Err(Error::NotRealValued(asym));
    }
    if c.is_zero() {
        return Err(Error::ZeroC);
    }
    let upper_right = c.conj_reflect().shift(-freq.beta()).scale(-1.0);
    let transfer = AnalyticCocycle::new(
        freq.clone(),
        [
            [&TrigPoly::constant(e) - v, upper_right],
            [c.clone(), TrigPoly::zero()],
        ],
        dom,
    );
    Ok(JacobiCocycle { transfer, divisor: c.clone() })
}

/// `c(x) = lambda3 e^{-2 pi i (x + beta/2)} + lambda2 + lambda1 e^{2 pi i (x + beta/2)}`.
pub fn harper_c(p: &HarperParams, beta: f64) -> TrigPoly {
    let phase = Complex64::from_polar(1.0, PI * beta);
    TrigPoly::from_pairs([
        (-1, p.lambda3 * phase.conj()),
        (0, Complex64::new(p.lambda2, 0.0)),
        (1, p.lambda1 * phase),
    ])
}

/// Extended Harper transfer cocycle, `v = 2 cos(2 pi x)`.
pub fn build_harper(p: &HarperParams, freq: &Frequency, dom: StripDomain) -> Result<AnalyticCocycle> {
    p.validate()?;
    let c = harper_c(p, freq.beta());
    Ok(build_jacobi(&TrigPoly::cosine(2.0), &c, p.e, freq, dom)?.transfer)
}

/// Almost Mathieu transfer cocycle: `v = 2 lambda cos(2 pi x)`, `c = 1`.
pub fn build_almost_mathieu(lambda: f64, e: f64, freq: &Frequency, dom: StripDomain) -> Result<AnalyticCocycle> {
    if !(lambda.is_finite() && e.is_finite()) {
        return Err(Error::InvalidArgument("coupling and energy must be finite".into()));
    }
    let v = TrigPoly::cosine(2.0 * lambda);
    Ok(build_jacobi(&v, &TrigPoly::constant(1.0), e, freq, dom)?.transfer)
}
