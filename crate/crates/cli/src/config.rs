use std::path::PathBuf;

use qpcocycle::analytic::{StripDomain, TrigPoly};
use qpcocycle::arithmetic::{Frequency, FrequencySpec};
use qpcocycle::cocycle::{build_almost_mathieu, build_harper, build_jacobi, AnalyticCocycle, HarperParams};
use qpcocycle::lab::{LeConfig, NPolicy};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Le,
    Scan,
    Ldt,
    Zeros,
    Cf,
    Check,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "golden")]
    pub frequency: FrequencySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleSpec>,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ldt: Option<LdtSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<ZerosConfig>,
    #[serde(default)]
    pub cf: CfConfig,
    #[serde(default, skip_serializing)]
    pub output: OutputConfig,
}

fn golden() -> FrequencySpec {
    FrequencySpec::Golden
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CocycleSpec {
    Harper {
        lambda1: f64,
        lambda2: f64,
        lambda3: f64,
        energy: f64,
    },
    AlmostMathieu {
        lambda: f64,
        energy: f64,
    },
    Jacobi {
        v: TrigPoly,
        c: TrigPoly,
        energy: f64,
    },
    Raw {
        a11: TrigPoly,
        a12: TrigPoly,
        a21: TrigPoly,
        a22: TrigPoly,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    #[serde(default = "default_schedule")]
    pub schedule: Vec<u64>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Half-width of the strip `|Im z| <= delta`.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Continued-fraction depth of the frequency.
    #[serde(default = "default_depth")]
    pub depth: usize,
}

fn default_schedule() -> Vec<u64> {
    vec![1000, 2000, 4000]
}
fn default_grid() -> usize {
    128
}
fn default_delta() -> f64 {
    0.1
}
fn default_depth() -> usize {
    40
}

impl Default for Budget {
    fn default() -> Self {
        Self { schedule: default_schedule(), grid: default_grid(), delta: default_delta(), depth: default_depth() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    Lambda1,
    Lambda2,
    Lambda3,
    Lambda,
    Energy,
    Beta,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    /// Parameters set to the path value; several entries move together.
    pub set: Vec<Parameter>,
    #[serde(default)]
    pub start: f64,
    #[serde(default)]
    pub stop: f64,
    #[serde(default)]
    pub points: usize,
    /// For `set = ["beta"]`: convergent denominators compared with the target.
    #[serde(default)]
    pub denominators: Vec<u64>,
    #[serde(default = "default_rational_grid")]
    pub rational_grid: usize,
}

fn default_rational_grid() -> usize {
    64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdtSection {
    pub kappa: f64,
    pub q: Vec<u64>,
    #[serde(default = "default_ldt_grid")]
    pub grid: usize,
    #[serde(default)]
    pub policy: NPolicy,
    #[serde(default)]
    pub q_min: u64,
    #[serde(default)]
    pub perturbations: usize,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

fn default_ldt_grid() -> usize {
    1000
}
fn default_gamma() -> f64 {
    1e-2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroTarget {
    Det,
    C,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZerosConfig {
    /// Function to analyse: a cocycle-derived target or an explicit polynomial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ZeroTarget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<TrigPoly>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfConfig {
    #[serde(default = "default_cf_rows")]
    pub rows: usize,
    #[serde(default = "default_r")]
    pub r: f64,
    #[serde(default = "default_j_max")]
    pub j_max: u64,
}

fn default_cf_rows() -> usize {
    20
}
fn default_r() -> f64 {
    2.0
}
fn default_j_max() -> u64 {
    1000
}

impl Default for CfConfig {
    fn default() -> Self {
        Self { rows: default_cf_rows(), r: default_r(), j_max: default_j_max() }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

fn bad(key: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Config(format!("{key}: {msg}"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        toml::from_str(text).map_err(|e| Failure::Config(e.to_string()))
    }

    /// Checks every field the command uses, naming the offending key.
    pub fn validate(&self, cmd: Command) -> Result<(), Failure> {
        if let Some(c) = self.command {
            if c != cmd {
                return Err(bad("command", format!("config is for `{c:?}`, invoked as `{cmd:?}`").to_lowercase()));
            }
        }
        let b = &self.budget;
        if b.schedule.is_empty() || b.schedule[0] == 0 || b.schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("budget.schedule", "must be nonempty, positive and strictly increasing"));
        }
        if b.grid < 2 {
            return Err(bad("budget.grid", "must be at least 2"));
        }
        if !(b.delta > 0.0 && b.delta.is_finite()) {
            return Err(bad("budget.delta", "must be positive"));
        }
        if b.depth == 0 {
            return Err(bad("budget.depth", "must be positive"));
        }
        match self.frequency {
            FrequencySpec::Rational { q: 0, .. } => return Err(bad("frequency.q", "must be positive")),
            FrequencySpec::Decimal { value } if !value.is_finite() => {
                return Err(bad("frequency.value", "must be finite"))
            }
            _ => {}
        }
        let needs_cocycle = matches!(cmd, Command::Le | Command::Scan | Command::Ldt)
            || (cmd == Command::Zeros && self.zeros.as_ref().map_or(true, |z| z.f.is_none()));
        if needs_cocycle && self.cocycle.is_none() {
            return Err(bad("cocycle", "missing section"));
        }
        match cmd {
            Command::Scan => {
                let s = self.scan.as_ref().ok_or_else(|| bad("scan", "missing section"))?;
                if s.set.is_empty() {
                    return Err(bad("scan.set", "must name at least one parameter"));
                }
                if s.set.contains(&Parameter::Beta) {
                    if s.set.len() > 1 {
                        return Err(bad("scan.set", "beta cannot move together with other parameters"));
                    }
                    if s.denominators.is_empty() {
                        return Err(bad("scan.denominators", "must list convergent denominators"));
                    }
                    if s.rational_grid == 0 {
                        return Err(bad("scan.rational_grid", "must be positive"));
                    }
                } else {
                    if s.points < 2 {
                        return Err(bad("scan.points", "must be at least 2"));
                    }
                    if !(s.start < s.stop) {
                        return Err(bad("scan.stop", "must exceed scan.start"));
                    }
                    let kind = self.cocycle.as_ref().expect("checked");
                    for p in &s.set {
                        let ok = matches!(
                            (kind, p),
                            (CocycleSpec::Harper { .. }, Parameter::Lambda1 | Parameter::Lambda2 | Parameter::Lambda3)
                                | (CocycleSpec::AlmostMathieu { .. }, Parameter::Lambda)
                                | (CocycleSpec::Harper { .. } | CocycleSpec::AlmostMathieu { .. } | CocycleSpec::Jacobi { .. }, Parameter::Energy)
                        );
                        if !ok {
                            return Err(bad("scan.set", format!("{p:?} is not a parameter of this cocycle").to_lowercase()));
                        }
                    }
                }
            }
            Command::Ldt => {
                let l = self.ldt.as_ref().ok_or_else(|| bad("ldt", "missing section"))?;
                if !(l.kappa > 0.0 && l.kappa < 1.0) {
                    return Err(bad("ldt.kappa", "must lie in (0, 1)"));
                }
                if l.grid < 1000 {
                    return Err(bad("ldt.grid", "must be at least 1000"));
                }
                if l.q.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(bad("ldt.q", "must be strictly increasing"));
                }
                if !(l.policy.c > 0.0) || !(l.policy.eta > 0.0) || l.policy.cap == 0 {
                    return Err(bad("ldt.policy", "c, eta and cap must be positive"));
                }
                if !(l.gamma > 0.0) {
                    return Err(bad("ldt.gamma", "must be positive"));
                }
            }
            Command::Zeros => {
                if let Some(z) = &self.zeros {
                    if z.f.is_some() && z.target.is_some() {
                        return Err(bad("zeros.f", "give either zeros.f or zeros.target"));
                    }
                    if !(z.tol > 0.0) {
                        return Err(bad("zeros.tol", "must be positive"));
                    }
                    if z.target == Some(ZeroTarget::C)
                        && matches!(self.cocycle, Some(CocycleSpec::Raw { .. }))
                    {
                        return Err(bad("zeros.target", "a raw cocycle has no coefficient c"));
                    }
                }
            }
            Command::Cf => {
                if !(self.cf.r > 1.0) {
                    return Err(bad("cf.r", "must exceed 1"));
                }
                if self.cf.j_max == 0 {
                    return Err(bad("cf.j_max", "must be positive"));
                }
            }
            Command::Le | Command::Check => {}
        }
        Ok(())
    }

    pub fn frequency(&self) -> Result<Frequency, Failure> {
        Frequency::expand(self.frequency, self.budget.depth).map_err(|e| bad("frequency", e))
    }

    pub fn domain(&self) -> StripDomain {
        StripDomain::new(self.budget.delta).expect("validated")
    }

    pub fn le_config(&self) -> LeConfig {
        LeConfig { schedule: self.budget.schedule.clone(), grid: self.budget.grid }
    }

    /// SHA-256 of the canonical JSON echo; output paths and threads are not
    /// part of the config.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

impl CocycleSpec {
    pub fn build(&self, freq: &Frequency, dom: StripDomain) -> qpcocycle::Result<AnalyticCocycle> {
        match self {
            CocycleSpec::Harper { lambda1, lambda2, lambda3, energy } => {
                build_harper(&HarperParams::new(*lambda1, *lambda2, *lambda3, *energy), freq, dom)
            }
            CocycleSpec::AlmostMathieu { lambda, energy } => build_almost_mathieu(*lambda, *energy, freq, dom),
            CocycleSpec::Jacobi { v, c, energy } => build_jacobi(v, c, *energy, freq, dom).map(|j| j.transfer),
            CocycleSpec::Raw { a11, a12, a21, a22 } => {
                Ok(AnalyticCocycle::new(freq.clone(), [[a11.clone(), a12.clone()], [a21.clone(), a22.clone()]], dom))
            }
        }
    }

    /// The coefficient `c` of a Jacobi-type cocycle.
    pub fn coefficient_c(&self, beta: f64) -> Option<TrigPoly> {
        match self {
            CocycleSpec::Harper { lambda1, lambda2, lambda3, energy } => Some(qpcocycle::cocycle::harper_c(
                &HarperParams::new(*lambda1, *lambda2, *lambda3, *energy),
                beta,
            )),
            CocycleSpec::AlmostMathieu { .. } => Some(TrigPoly::constant(1.0)),
            CocycleSpec::Jacobi { c, .. } => Some(c.clone()),
            CocycleSpec::Raw { .. } => None,
        }
    }

    /// A copy with the listed parameters set to `t`.
    pub fn with(&self, set: &[Parameter], t: f64) -> CocycleSpec {
        let mut s = self.clone();
        for p in set {
            match (&mut s, p) {
                (CocycleSpec::Harper { lambda1, .. }, Parameter::Lambda1) => *lambda1 = t,
                (CocycleSpec::Harper { lambda2, .. }, Parameter::Lambda2) => *lambda2 = t,
                (CocycleSpec::Harper { lambda3, .. }, Parameter::Lambda3) => *lambda3 = t,
                (CocycleSpec::AlmostMathieu { lambda, .. }, Parameter::Lambda) => *lambda = t,
                (
                    CocycleSpec::Harper { energy, .. }
                    | CocycleSpec::AlmostMathieu { energy, .. }
                    | CocycleSpec::Jacobi { energy, .. },
                    Parameter::Energy,
                ) => *energy = t,
                _ => {}
            }
        }
        s
    }
}
