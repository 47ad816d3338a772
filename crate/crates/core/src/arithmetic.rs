//! Continued fractions, Ostrowski expansions and Diophantine constants of a
//! rotation number.
//!
//! Every orbit point `x + j beta` used elsewhere in the crate goes through
//! [`Frequency::rotation`], which reduces `j beta mod 1` with integer
//! arithmetic on a deep convergent plus a small, accurately known remainder.
//! Plain `j as f64 * beta` would lose about `log10(j)` digits.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a frequency was specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FrequencySpec {
    /// `(sqrt 5 - 1)/2 = [0; 1, 1, 1, ...]`.
    Golden,
    /// `sqrt 2 - 1 = [0; 2, 2, 2, ...]`.
    Silver,
    /// A double, expanded exactly as the dyadic rational it is.
    Decimal { value: f64 },
    Rational { p: u64, q: u64 },
}

/// One row of the continued-fraction table: `p_n/q_n` with partial quotient `a_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub n: usize,
    pub a: u64,
    pub p: u64,
    pub q: u64,
}

/// Denominators above this are not used for phase reduction (keeps
/// `(j mod q) * p` inside `u128` for any `u64` index `j`).
const REFERENCE_Q_MAX: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Reference {
    p: u64,
    q: u64,
    /// `beta - p/q`, known to full relative precision.
    remainder: f64,
}

/// A rotation number `beta in (0, 1)` with its continued-fraction prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct Frequency {
    spec: FrequencySpec,
    beta: f64,
    convergents: Vec<Convergent>,
    /// The expansion terminated: `beta` is rational.
    terminated: bool,
    /// The requested depth was cut short by 64-bit overflow of `p_n, q_n`.
    capped: bool,
    reference: Reference,
}

/// Generates `(a_n)` for `n >= 1` of a number in `(0, 1)`; `None` once the
/// expansion terminates.
enum DigitSource {
    Periodic(u64),
    Euclid { num: u128, den: u128 },
}

impl DigitSource {
    fn next_digit(&mut self) -> Option<u64> {
        match self {
            DigitSource::Periodic(a) => Some(*a),
            DigitSource::Euclid { num, den } => {
                if *num == 0 {
                    return None;
                }
                let a = *den / *num;
                let r = *den % *num;
                *den = *num;
                *num = r;
                u64::try_from(a).ok()
            }
        }
    }
}

fn dyadic(value: f64) -> Result<(u128, u128)> {
    if !(value > 0.0 && value < 1.0) {
        return Err(Error::InvalidArgument(format!("beta must lie in (0, 1), got {value}")));
    }
    let bits = value.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let (mant, e) = if exp == 0 {
        (bits & ((1 << 52) - 1), -1074)
    } else {
        ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075)
    };
    // value = mant * 2^e with e < 0
    let shift = (-e) as u32;
    if shift >= 127 {
        return Err(Error::InvalidArgument(format!("beta = {value} is too small to expand")));
    }
    let (mut num, mut den) = (mant as u128, 1u128 << shift);
    let tz = num.trailing_zeros().min(shift);
    num >>= tz;
    den >>= tz;
    Ok((num, den))
}

/// Complete quotient of the periodic expansions: `[a; a, a, ...]`.
fn periodic_tail(a: u64) -> f64 {
    let a = a as f64;
    (a + (a * a + 4.0).sqrt()) / 2.0
}

impl Frequency {
    /// Expands `spec` to `depth` partial quotients (fewer if the expansion
    /// terminates or 64-bit denominators would overflow).
    ///
    /// The convergent list starts at `n = 1` when `a_1 = 1` and at `n = 0`
    /// (`0/1`) otherwise, so that denominators are strictly increasing.
    pub fn expand(spec: FrequencySpec, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        let (beta, mut source) = match spec {
            FrequencySpec::Golden => ((5f64.sqrt() - 1.0) / 2.0, DigitSource::Periodic(1)),
            FrequencySpec::Silver => (2f64.sqrt() - 1.0, DigitSource::Periodic(2)),
            FrequencySpec::Decimal { value } => {
                let (num, den) = dyadic(value)?;
                (value, DigitSource::Euclid { num, den })
            }
            FrequencySpec::Rational { p, q } => {
                if q == 0 || p == 0 || p >= q {
                    return Err(Error::InvalidArgument(format!("rational beta needs 0 < p < q, got {p}/{q}")));
                }
                let g = gcd(p, q);
                let (p, q) = (p / g, q / g);
                (p as f64 / q as f64, DigitSource::Euclid { num: p as u128, den: q as u128 })
            }
        };

        // Full expansion: requested prefix plus whatever the reference needs.
        let (mut p_prev, mut q_prev, mut p, mut q) = (1u64, 0u64, 0u64, 1u64);
        let mut all = vec![Convergent { n: 0, a: 0, p: 0, q: 1 }];
        let mut terminated = false;
        let mut capped = false;
        loop {
            let n = all.len();
            let Some(a) = source.next_digit() else {
                terminated = true;
                break;
            };
            let next = a
                .checked_mul(p)
                .and_then(|v| v.checked_add(p_prev))
                .zip(a.checked_mul(q).and_then(|v| v.checked_add(q_prev)));
            let Some((pn, qn)) = next else {
                capped = n <= depth;
                break;
            };
            (p_prev, q_prev, p, q) = (p, q, pn, qn);
            all.push(Convergent { n, a, p, q });
            if n >= depth && q > REFERENCE_Q_MAX {
                break;
            }
        }

        let reference = match spec {
            FrequencySpec::Rational { .. } => {
                let last = all.last().unwrap();
                Reference { p: last.p, q: last.q, remainder: 0.0 }
            }
            _ if terminated && all.last().unwrap().q <= REFERENCE_Q_MAX => {
                let last = all.last().unwrap();
                Reference { p: last.p, q: last.q, remainder: 0.0 }
            }
            _ => {
                let idx = all
                    .iter()
                    .rposition(|c| c.q <= REFERENCE_Q_MAX)
                    .expect("q_0 = 1 always qualifies");
                let c = all[idx];
                let remainder = match spec {
                    FrequencySpec::Golden | FrequencySpec::Silver => {
                        let a = if matches!(spec, FrequencySpec::Golden) { 1 } else { 2 };
                        let q_before = if idx == 0 { 0 } else { all[idx - 1].q };
                        let sign = if c.n % 2 == 0 { 1.0 } else { -1.0 };
                        sign / (c.q as f64 * (periodic_tail(a) * c.q as f64 + q_before as f64))
                    }
                    _ => beta.mul_add(c.q as f64, -(c.p as f64)) / c.q as f64,
                };
                Reference { p: c.p, q: c.q, remainder }
            }
        };

        let mut convergents: Vec<Convergent> = all.into_iter().take(depth + 1).collect();
        if convergents.len() > 1 && convergents[1].q == 1 {
            convergents.remove(0);
        }
        Ok(Self {
            spec,
            beta,
            convergents,
            terminated: terminated && matches!(spec, FrequencySpec::Rational { .. } | FrequencySpec::Decimal { .. })
                && reference.remainder == 0.0,
            capped,
            reference,
        })
    }

    pub fn golden(depth: usize) -> Self {
        Self::expand(FrequencySpec::Golden, depth).expect("golden mean expands")
    }

    pub fn silver(depth: usize) -> Self {
        Self::expand(FrequencySpec::Silver, depth).expect("silver mean expands")
    }

    pub fn rational(p: u64, q: u64) -> Result<Self> {
        Self::expand(FrequencySpec::Rational { p, q }, 64)
    }

    pub fn spec(&self) -> FrequencySpec {
        self.spec
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// True when `beta` was found to be rational (terminating expansion).
    pub fn is_rational(&self) -> bool {
        self.terminated || matches!(self.spec, FrequencySpec::Rational { .. })
    }

    /// `(p, q)` in lowest terms when rational.
    pub fn as_rational(&self) -> Option<(u64, u64)> {
        self.is_rational().then_some((self.reference.p, self.reference.q))
    }

    /// True when the requested depth was reduced to avoid 64-bit overflow.
    pub fn is_capped(&self) -> bool {
        self.capped
    }

    pub fn convergents(&self) -> &[Convergent] {
        &self.convergents
    }

    /// Partial quotients `a_1, a_2, ...` of the stored prefix.
    pub fn digits(&self) -> Vec<u64> {
        self.convergents.iter().filter(|c| c.n > 0).map(|c| c.a).collect()
    }

    pub fn denominators(&self) -> Vec<u64> {
        self.convergents.iter().map(|c| c.q).collect()
    }

    /// `j beta mod 1` in `[0, 1)`.
    pub fn rotation(&self, j: u64) -> f64 {
        let Reference { p, q, remainder } = self.reference;
        let r = ((j % q) as u128 * p as u128 % q as u128) as f64 / q as f64;
        let v = (r + j as f64 * remainder).rem_euclid(1.0);
        if v >= 1.0 {
            0.0
        } else {
            v
        }
    }

    /// `x + j beta mod 1` in `[0, 1)`.
    pub fn phase(&self, x: f64, j: u64) -> f64 {
        let v = (x.rem_euclid(1.0) + self.rotation(j)).rem_euclid(1.0);
        if v >= 1.0 {
            0.0
        } else {
            v
        }
    }

    /// Signed distance `j beta - round(j beta)` in `[-1/2, 1/2)`.
    pub fn signed_rotation(&self, j: u64) -> f64 {
        let r = self.rotation(j);
        if r >= 0.5 {
            r - 1.0
        } else {
            r
        }
    }

    /// `|beta - p_n/q_n| q_n^2` for a stored convergent.
    pub fn scaled_error(&self, c: &Convergent) -> f64 {
        if c.q == 0 {
            return f64::NAN;
        }
        match self.spec {
            FrequencySpec::Golden | FrequencySpec::Silver => {
                let a = if matches!(self.spec, FrequencySpec::Golden) { 1 } else { 2 };
                let q_before = self.previous_q(c);
                c.q as f64 / (periodic_tail(a) * c.q as f64 + q_before as f64)
            }
            _ if self.is_rational() => {
                let Reference { p, q, .. } = self.reference;
                let num = (p as i128 * c.q as i128 - c.p as i128 * q as i128).abs() as f64;
                num * c.q as f64 / q as f64
            }
            _ => self.beta.mul_add(c.q as f64, -(c.p as f64)).abs() * c.q as f64,
        }
    }

    fn previous_q(&self, c: &Convergent) -> u64 {
        if c.n == 0 {
            return 0;
        }
        if c.n == 1 {
            return 1;
        }
        self.convergents
            .iter()
            .find(|d| d.n + 1 == c.n)
            .map(|d| d.q)
            .unwrap_or(0)
    }

    /// Orbit of `x` on the unit circle: `w_j = e^{2 pi i (x + j beta)}`.
    pub fn unit_orbit(&self, x: f64) -> UnitOrbit<'_> {
        UnitOrbit {
            freq: self,
            x,
            j: 0,
            w: Complex64::from_polar(1.0, TAU * x),
            step: Complex64::from_polar(1.0, TAU * self.rotation(1)),
        }
    }
}

/// Resynchronize the rotated point from the exact phase this often.
const RESYNC: u64 = 64;

/// Iterator over `e^{2 pi i (x + j beta)}`, `j = 0, 1, ...`. Advances by
/// complex multiplication and recomputes the point from the reduced phase
/// every `RESYNC` steps, which bounds the drift to a few ulps.
#[derive(Debug, Clone)]
pub struct UnitOrbit<'a> {
    freq: &'a Frequency,
    x: f64,
    j: u64,
    w: Complex64,
    step: Complex64,
}

impl Iterator for UnitOrbit<'_> {
    type Item = Complex64;

    #[inline]
    fn next(&mut self) -> Option<Complex64> {
        let out = self.w;
        self.j += 1;
        self.w = if self.j % RESYNC == 0 {
            Complex64::from_polar(1.0, TAU * self.freq.phase(self.x, self.j))
        } else {
            self.w * self.step
        };
        Some(out)
    }
}

/// Free-function form of [`Frequency::expand`].
pub fn expand_cf(spec: FrequencySpec, depth: usize) -> Result<Frequency> {
    Frequency::expand(spec, depth)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Ostrowski expansion `n = sum_k l_k q_k` over the stored denominators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OstrowskiDigits {
    pub n: u64,
    /// `l_0, ..., l_s` with `q_s <= n < q_{s+1}`.
    pub digits: Vec<u64>,
}

impl OstrowskiDigits {
    pub fn value(&self, denominators: &[u64]) -> u64 {
        self.digits.iter().zip(denominators).map(|(l, q)| l * q).sum()
    }
}

/// Greedy division by the largest stored denominator not exceeding the remainder.
pub fn ostrowski(n: u64, freq: &Frequency) -> Result<OstrowskiDigits> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let qs = freq.denominators();
    let largest = *qs.last().unwrap();
    if n >= largest {
        return Err(Error::InsufficientDepth { n, largest });
    }
    let s = qs.iter().rposition(|&q| q <= n).expect("q_0 = 1 <= n");
    let mut digits = vec![0u64; s + 1];
    let mut rest = n;
    for k in (0..=s).rev() {
        digits[k] = rest / qs[k];
        rest %= qs[k];
    }
    Ok(OstrowskiDigits { n, digits })
}

/// Empirical Diophantine constants: `|sin(2 pi j beta)| > b / j^r` verified
/// for `1 <= j <= j_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiophantineParams {
    pub b: f64,
    pub r: f64,
    pub j_max: u64,
}

/// `b = min_{1 <= j <= j_max} |sin(2 pi j beta)| j^r`.
pub fn fit_diophantine(freq: &Frequency, r: f64, j_max: u64) -> Result<DiophantineParams> {
    if j_max == 0 {
        return Err(Error::InvalidArgument("j_max must be at least 1".into()));
    }
    if !(r > 1.0) {
        return Err(Error::InvalidArgument(format!("r must exceed 1, got {r}")));
    }
    let rational = freq.as_rational();
    let mut b = f64::INFINITY;
    for j in 1..=j_max {
        if let Some((p, q)) = rational {
            if (j as u128 * p as u128) % q as u128 == 0 {
                return Err(Error::DegenerateBeta(j));
            }
        }
        let s = (TAU * freq.signed_rotation(j)).sin().abs();
        if s == 0.0 {
            return Err(Error::DegenerateBeta(j));
        }
        b = b.min(s * (j as f64).powf(r));
    }
    Ok(DiophantineParams { b, r, j_max })
}

/// Checks `q_{k+1} <= (2 pi / b) q_k^r` for consecutive stored denominators
/// and `s <= 2 log q_s / log 2` for every stored index `s >= 1`.
pub fn growth_check(freq: &Frequency, params: &DiophantineParams) -> bool {
    let qs = freq.denominators();
    if qs.len() < 2 {
        return false;
    }
    let growth = qs
        .windows(2)
        .all(|w| (w[1] as f64) <= TAU / params.b * (w[0] as f64).powf(params.r));
    let index = qs
        .iter()
        .enumerate()
        .skip(1)
        .all(|(s, &q)| s as f64 <= 2.0 * (q as f64).ln() / 2f64.ln());
    growth && index
}
