//! Self-check suite: small instances of every invariant the library relies
//! on, each with an independent oracle.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{
    count_zeros, default_eps_grid, fit_transversality, mean_log, polya_check, AnnulusContour, StripDomain, TrigPoly,
};
use crate::arithmetic::{ostrowski, Frequency};
use crate::cocycle::{
    build_almost_mathieu, build_harper, harper_c, l_n, lyapunov, rational_le, renorm_le, AnalyticCocycle, HarperParams,
    Mat2,
};
use crate::lab::{birkhoff_error, ldt_experiment, trig_product, LdtConfig, NPolicy};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type CheckFn = fn() -> Result<String, String>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("golden_convergents_are_fibonacci", golden_fibonacci),
    ("ostrowski_round_trip", ostrowski_round_trip),
    ("jensen_identity", jensen_identity),
    ("winding_additivity", winding_additivity),
    ("harper_zero_count", harper_zero_count),
    ("transversality_exponents", transversality_exponents),
    ("polya_bound", polya_bound),
    ("constant_cocycle_le", constant_le),
    ("free_schrodinger_le", free_schrodinger),
    ("unimodular_renormalization", unimodular_renormalization),
    ("renormalization_identity", renormalization_identity),
    ("rational_constant_le", rational_constant),
    ("ldt_constant_cocycle", ldt_constant),
    ("birkhoff_constant", birkhoff_constant),
    ("trig_product_empty", trig_product_empty),
    ("thread_determinism", thread_determinism),
];

pub fn names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs every check in order.
pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome { name, passed, detail }
        })
        .collect()
}

fn num<T>(r: crate::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dom() -> StripDomain {
    StripDomain::new(0.1).expect("positive width")
}

fn golden_fibonacci() -> Result<String, String> {
    let g = Frequency::golden(30);
    let qs = g.denominators();
    let ok = qs.windows(3).all(|w| w[2] == w[1] + w[0]) && qs[..3] == [1, 2, 3];
    ensure(ok, format!("{} denominators", qs.len()))
}

fn ostrowski_round_trip() -> Result<String, String> {
    let g = Frequency::golden(40);
    let qs = g.denominators();
    for n in 1..10_000 {
        let d = num(ostrowski(n, &g))?;
        if d.value(&qs) != n {
            return Err(format!("n = {n}"));
        }
    }
    Ok("1 <= n < 10000".into())
}

fn jensen_identity() -> Result<String, String> {
    let mut worst = 0.0f64;
    for x0 in [0.0, 0.137, 0.5, 0.9] {
        let f = &TrigPoly::monomial(1, 1.0) - &TrigPoly::constant(Complex64::from_polar(1.0, 2.0 * PI * x0));
        worst = worst.max(num(mean_log(&f))?.abs());
    }
    ensure(worst < 1e-6, format!("max |<log|f|>| = {worst:.2e}"))
}

fn winding_additivity() -> Result<String, String> {
    let c = AnnulusContour::from_strip(StripDomain::new(0.2).expect("positive"));
    let f = &TrigPoly::monomial(1, 1.0) - &TrigPoly::constant(Complex64::new(0.9, 0.1));
    let g = &(&TrigPoly::monomial(2, 1.0) - &TrigPoly::constant(0.5)) + &TrigPoly::monomial(-1, 0.3);
    let (nf, ng, nfg) = (num(count_zeros(&f, &c))?, num(count_zeros(&g, &c))?, num(count_zeros(&(&f * &g), &c))?);
    ensure(nfg == nf + ng, format!("{nfg} = {nf} + {ng}"))
}

/// Roots of `l1 e^{i pi b} w^2 + l2 w + l3 e^{-i pi b}` with `r^-1 < |w| < r`.
pub fn harper_root_count(p: &HarperParams, beta: f64, r: f64) -> usize {
    let a = Complex64::from_polar(p.lambda1, PI * beta);
    let b = Complex64::new(p.lambda2, 0.0);
    let c = Complex64::from_polar(p.lambda3, -PI * beta);
    let roots: Vec<Complex64> = if p.lambda1 == 0.0 {
        if p.lambda2 == 0.0 {
            vec![]
        } else {
            vec![-c / b]
        }
    } else {
        let s = (b * b - 4.0 * a * c).sqrt();
        vec![(-b + s) / (2.0 * a), (-b - s) / (2.0 * a)]
    };
    roots.iter().filter(|w| w.norm() > 1.0 / r && w.norm() < r).count()
}

fn harper_zero_count() -> Result<String, String> {
    let g = Frequency::golden(30);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let contour = AnnulusContour::from_strip(dom());
    for i in 0..20 {
        let l1: f64 = rng.random_range(0.0..2.0);
        let l3 = if i % 4 == 0 { l1 } else { rng.random_range(0.0..2.0) };
        let p = HarperParams::new(l1, rng.random_range(0.0..2.0), l3, 0.0);
        let got = num(count_zeros(&harper_c(&p, g.beta()), &contour))?;
        let want = harper_root_count(&p, g.beta(), contour.outer_radius());
        if got != want {
            return Err(format!("{p:?}: {got} != {want}"));
        }
    }
    Ok("20 triples".into())
}

fn transversality_exponents() -> Result<String, String> {
    let simple = &TrigPoly::monomial(1, 1.0) - &TrigPoly::constant(1.0);
    let double = &simple * &simple;
    let a1 = num(fit_transversality(&simple, &default_eps_grid()))?.alpha;
    let a2 = num(fit_transversality(&double, &default_eps_grid()))?.alpha;
    ensure((a1 - 1.0).abs() < 0.05 && (a2 - 0.5).abs() < 0.05, format!("alpha = {a1:.4}, {a2:.4}"))
}

fn polya_bound() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let deg = rng.random_range(1..=4);
        let mut p: Vec<Complex64> = (0..deg)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        p.push(Complex64::new(1.0, 0.0));
        for eps in [1e-1, 1e-2] {
            let r = num(polya_check(&p, 0.0, eps))?;
            if !r.ok {
                return Err(format!("{p:?} at eps {eps}: {} > bound", r.measure));
            }
        }
    }
    Ok("10 polynomials".into())
}

fn constant_le() -> Result<String, String> {
    let c = AnalyticCocycle::constant(Mat2::diag(2.0, 1.0), Frequency::golden(30), dom());
    let l = num(l_n(&c, 100, 8))?.value;
    ensure((l - LN_2).abs() < 1e-10, format!("L = {l}"))
}

fn free_schrodinger() -> Result<String, String> {
    let c = AnalyticCocycle::constant(Mat2::real(3.0, -1.0, 1.0, 0.0), Frequency::golden(30), dom());
    let l = num(lyapunov(&c, &[1000], 64))?.value;
    let want = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    ensure((l - want).abs() < 1e-6, format!("L = {l}, want {want}"))
}

fn unimodular_renormalization() -> Result<String, String> {
    let c = num(build_almost_mathieu(2.0, 0.5, &Frequency::golden(30), dom()))?;
    let e = num(lyapunov(&c, &[500, 1000], 32))?;
    let lp = num(renorm_le(&c, &e))?;
    ensure((lp - e.value).abs() < 1e-12 && e.value >= LN_2 - 1e-2, format!("L = {}, L' = {lp}", e.value))
}

fn renormalization_identity() -> Result<String, String> {
    let g = Frequency::golden(30);
    let e = |k, re: f64, im: f64| TrigPoly::monomial(k, Complex64::new(re, im));
    let coc = AnalyticCocycle::new(
        g,
        [[&e(0, 2.0, 0.0) + &e(1, 0.3, 0.1), e(-1, 0.4, 0.0)], [e(0, 0.2, -0.1), &e(0, 1.0, 0.0) + &e(-1, 0.2, 0.0)]],
        dom(),
    );
    let schedule = [500, 1000, 2000];
    let a = num(lyapunov(&coc, &schedule, 64))?;
    let lp = num(renorm_le(&coc, &a))?;
    let b = num(lyapunov(&crate::cocycle::PointwiseRenormalized(&coc), &schedule, 64))?;
    let tol = 3.0 * a.stderr.hypot(b.stderr);
    ensure((lp - b.value).abs() <= tol, format!("L' = {lp}, divided L = {}, tol {tol:.2e}", b.value))
}

fn rational_constant() -> Result<String, String> {
    let c = AnalyticCocycle::constant(Mat2::real(3.0, 1.0, 0.0, 0.5), num(Frequency::rational(3, 8))?, dom());
    let r = num(rational_le(&c, 16))?;
    ensure((r.l - 3f64.ln()).abs() < 1e-12, format!("L = {}", r.l))
}

fn ldt_constant() -> Result<String, String> {
    let c = AnalyticCocycle::constant(Mat2::diag(2.0, 1.0), Frequency::golden(30), dom());
    let cfg = LdtConfig { kappa: 0.1, grid: 1000, seed: 1, policy: NPolicy { c: 0.05, eta: 1.0, cap: 1000 }, q_min: 0 };
    let r = num(ldt_experiment(&c, &[3, 5, 8, 13], &cfg))?;
    ensure(r.reports.iter().all(|d| d.empirical_measure == 0.0), "measures all zero".into())
}

fn birkhoff_constant() -> Result<String, String> {
    let t = num(birkhoff_error(&TrigPoly::constant(2.0), &Frequency::golden(30), &[10, 100], 2.0, 8))?;
    ensure(t.rows.iter().all(|r| r.sup_error < 1e-15), "error 0".into())
}

fn trig_product_empty() -> Result<String, String> {
    let t = num(trig_product(0.1, 0.6, &Frequency::golden(30), 0, 1.0))?;
    ensure(t.q == 1 && t.sum == 0.0, format!("q = {}, sum = {}", t.q, t.sum))
}

fn thread_determinism() -> Result<String, String> {
    let c = num(build_harper(&HarperParams::new(1.0, 2.0, 1.0, 0.3), &Frequency::golden(30), dom()))?;
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        pool.install(|| num(lyapunov(&c, &[200, 400], 50)))
    };
    let (a, b) = (run(1)?, run(3)?);
    ensure(a.value.to_bits() == b.value.to_bits() && a.stderr.to_bits() == b.stderr.to_bits(), format!("L = {}", a.value))
}
