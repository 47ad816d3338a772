//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpcocycle::analytic::{
    count_zeros, default_eps_grid, fit_transversality, mean_log, polya_check, AnnulusContour, StripDomain, TrigPoly,
};
use qpcocycle::arithmetic::Frequency;
use qpcocycle::checks::harper_root_count;
use qpcocycle::cocycle::{
    build_almost_mathieu, build_harper, harper_c, l_n, lyapunov, rational_le, renorm_le, AnalyticCocycle, HarperParams,
    Mat2, PointwiseRenormalized,
};
use qpcocycle::lab::{
    calibrate_c5, continuity_scan, ldt_experiment, perturbations, random_pairs, trig_product, LdtConfig, LdtResult,
    LeConfig, NPolicy, Table,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn num<T>(r: qpcocycle::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn dom() -> StripDomain {
    StripDomain::new(0.1).unwrap()
}

fn golden() -> Frequency {
    Frequency::golden(40)
}

fn constant_exactness() -> Outcome {
    let c = AnalyticCocycle::constant(Mat2::diag(2.0, 1.0), golden(), dom());
    let l = num(l_n(&c, 1000, 64))?.value;
    let free = AnalyticCocycle::constant(Mat2::real(3.0, -1.0, 1.0, 0.0), golden(), dom());
    let lf = num(lyapunov(&free, &[1000], 64))?.value;
    let want = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    ensure(
        (l - LN_2).abs() < 1e-10 && (lf - want).abs() < 1e-6,
        format!("|L - log 2| = {:.1e}, |L_free - log((3+sqrt5)/2)| = {:.1e}", (l - LN_2).abs(), (lf - want).abs()),
    )
}

fn random_entry(rng: &mut ChaCha8Rng) -> TrigPoly {
    let deg: i32 = rng.random_range(0..=2);
    TrigPoly::from_pairs((-deg..=deg).map(|k| (k, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))))
}

fn renormalization_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let contour = AnnulusContour::from_strip(dom());
    let schedule = [1000, 2000, 4000];
    let (mut done, mut tried, mut worst) = (0, 0, 0.0f64);
    while done < 50 {
        tried += 1;
        let e = [[random_entry(&mut rng), random_entry(&mut rng)], [random_entry(&mut rng), random_entry(&mut rng)]];
        let coc = AnalyticCocycle::new(golden(), e, dom());
        if coc.det().is_zero() || count_zeros(coc.det(), &contour) != Ok(0) {
            continue;
        }
        done += 1;
        let a = num(lyapunov(&coc, &schedule, 256))?;
        let lp = num(renorm_le(&coc, &a))?;
        let b = num(lyapunov(&PointwiseRenormalized(&coc), &schedule, 256))?;
        // Constant draws have zero sampling error; allow rounding there.
        let ratio = ((lp - b.value).abs() - 1e-12).max(0.0) / (3.0 * a.stderr.hypot(b.stderr));
        worst = worst.max(if ratio.is_nan() { 0.0 } else { ratio });
    }
    ensure(worst <= 1.0, format!("50 cocycles ({tried} drawn), max (|dL'| - 1e-12)/(3 sigma) = {worst:.3}"))
}

fn jensen() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let x0: f64 = rng.random();
        let f = &TrigPoly::monomial(1, 1.0) - &TrigPoly::constant(Complex64::from_polar(1.0, 2.0 * PI * x0));
        worst = worst.max(num(mean_log(&f))?.abs());
    }
    ensure(worst < 1e-6, format!("max |<log|f|>| = {worst:.2e} over 10 x0"))
}

fn zero_counting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = golden();
    let contour = AnnulusContour::from_strip(dom());
    let mut by_count = [0usize; 3];
    for i in 0..100 {
        let l1: f64 = rng.random_range(0.0..2.0);
        let l2: f64 = rng.random_range(0.0..2.0);
        let l3 = if i % 4 == 0 { l1 } else { rng.random_range(0.0..2.0) };
        let p = HarperParams::new(l1, l2, l3, 0.0);
        let got = num(count_zeros(&harper_c(&p, g.beta()), &contour))?;
        let want = harper_root_count(&p, g.beta(), contour.outer_radius());
        if got != want {
            return Err(format!("lambda = ({l1}, {l2}, {l3}): counted {got}, oracle {want}"));
        }
        by_count[got] += 1;
    }
    ensure(true, format!("100 triples, counts 0/1/2 = {by_count:?}"))
}

fn lojasiewicz_polya() -> Outcome {
    let simple = &TrigPoly::monomial(1, 1.0) - &TrigPoly::constant(1.0);
    let double = &simple * &simple;
    let a1 = num(fit_transversality(&simple, &default_eps_grid()))?.alpha;
    let a2 = num(fit_transversality(&double, &default_eps_grid()))?.alpha;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let deg = rng.random_range(1..=4);
        let mut p: Vec<Complex64> =
            (0..deg).map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
        p.push(Complex64::new(1.0, 0.0));
        let y = rng.random_range(-1.0..1.0);
        for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
            let r = num(polya_check(&p, y, eps))?;
            if !r.ok {
                return Err(format!("Polya fails for {p:?} at y = {y}, eps = {eps}"));
            }
            worst = worst.max(r.measure / (4.0 * eps.powf(1.0 / deg as f64)));
        }
    }
    ensure(
        (a1 - 1.0).abs() < 0.05 && (a2 - 0.5).abs() < 0.05,
        format!("alpha = {a1:.4} (simple), {a2:.4} (double); Polya max measure/bound = {worst:.3}"),
    )
}

fn herman() -> Outcome {
    let mut lows = Vec::new();
    for e in [-4.0, -2.0, 0.0, 2.0, 4.0] {
        let c = num(build_almost_mathieu(2.0, e, &golden(), dom()))?;
        lows.push(num(lyapunov(&c, &[2500, 5000, 10_000], 200))?.value);
    }
    let min = lows.iter().copied().fold(f64::INFINITY, f64::min);
    ensure(min >= LN_2 - 1e-2, format!("min L = {min:.6} (log 2 = {LN_2:.6}), L = {lows:.5?}"))
}

const LDT_Q: [u64; 4] = [34, 55, 89, 144];

fn ldt_cfg() -> LdtConfig {
    LdtConfig { kappa: 0.1, grid: 1000, seed: 17, policy: NPolicy::default(), q_min: 0 }
}

fn ldt_families() -> Result<Vec<(&'static str, AnalyticCocycle)>, String> {
    Ok(vec![
        ("almost_mathieu", num(build_almost_mathieu(2.0, 0.0, &golden(), dom()))?),
        ("harper_121", num(build_harper(&HarperParams::new(1.0, 2.0, 1.0, 0.0), &golden(), dom()))?),
    ])
}

/// Base and perturbed runs for both families, in a fixed order.
fn ldt_runs() -> Result<Vec<(String, LdtResult)>, String> {
    let cfg = ldt_cfg();
    let mut out = Vec::new();
    for (name, coc) in ldt_families()? {
        out.push((name.to_string(), num(ldt_experiment(&coc, &LDT_Q, &cfg))?));
        for (i, p) in perturbations(&coc, 1e-2, 5, cfg.seed).iter().enumerate() {
            out.push((format!("{name}_perturbed_{i}"), num(ldt_experiment(p, &LDT_Q, &cfg))?));
        }
    }
    Ok(out)
}

fn ldt_csv(runs: &[(String, LdtResult)]) -> String {
    runs.iter().map(|(name, r)| format!("{name}\n{}", Table::from(r).to_csv())).collect()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn uldb(runs: &[(String, LdtResult)]) -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for chunk in runs.chunks(6) {
        let (name, base) = &chunk[0];
        let c = base.fitted_c;
        let perturbed_ok = chunk[1..].iter().all(|(_, r)| r.bounded_by(c) && r.non_increasing());
        let measures: Vec<f64> = base.reports.iter().map(|r| r.empirical_measure).collect();
        let max_dev = chunk.iter().flat_map(|(_, r)| &r.reports).map(|r| r.max_deviation).fold(0.0, f64::max);
        ok &= base.non_increasing() && c > 0.0 && base.bounded_by(c) && perturbed_ok;
        lines.push(format!(
            "{name}: measures {measures:?}, c = {c:.4}, perturbed bounded {perturbed_ok}, max deviation {max_dev:.2e}"
        ));
    }
    ensure(ok, lines.join("; "))
}

fn lambda1_sweep() -> Outcome {
    let g = golden();
    let path: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
    let cfg = LeConfig { schedule: vec![2000, 4000, 8000], grid: 128 };
    let s = num(continuity_scan(|l| build_harper(&HarperParams::new(l, 1.0, l, 0.0), &g, dom()), &path, &cfg))?;
    let jumps = s.jumps();
    ensure(
        jumps.is_empty() && s.le_values.len() == 41,
        format!("{} candidates refined, {} persistent, modulus {:.3}", s.candidates.len(), jumps.len(), s.modulus),
    )
}

fn frequency_continuity() -> Outcome {
    let g = golden();
    let target = num(build_almost_mathieu(2.0, 1.0, &g, dom()))?;
    let reference = num(lyapunov(&target, &[25_000, 50_000, 100_000], 256))?;
    let mut gaps = Vec::new();
    for q in LDT_Q {
        let c = g.convergents().iter().find(|c| c.q == q).unwrap();
        let coc = num(build_almost_mathieu(2.0, 1.0, &num(Frequency::rational(c.p, c.q))?, dom()))?;
        gaps.push((num(rational_le(&coc, 64))?.l - reference.value).abs());
    }
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    ensure(
        decreasing && gaps[3] < 1e-2,
        format!("E = 1, L = {:.8} (stderr {:.1e}), gaps {}", reference.value, reference.stderr, gaps.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>().join(", ")),
    )
}

fn trig_product_bound() -> Outcome {
    let g = golden();
    let index = |q: u64| g.convergents().iter().position(|c| c.q == q).unwrap();
    let calib: Vec<usize> = g.convergents().iter().enumerate().filter(|(_, c)| c.q <= 21).map(|(i, _)| i).collect();
    let c5 = num(calibrate_c5(&g, &calib, &random_pairs(10, 100)))?;
    let mut worst = 0.0f64;
    for q in [34, 55, 89, 144, 233] {
        for (x, x0) in random_pairs(20, 100) {
            let t = num(trig_product(x, x0, &g, index(q), c5))?;
            worst = worst.max(t.sum.abs() / t.bound);
        }
    }
    ensure(worst <= 1.0, format!("C5 = {c5:.4} from q <= 21; max |sum|/(C5 log q) on q = 34..233 is {worst:.3}"))
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, title: &str, budget: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut r = f();
        let took = start.elapsed();
        if let Some(b) = budget {
            if took > b && r.is_ok() {
                r = Err(format!("{} but took {took:.1?} (budget {b:?})", r.unwrap()));
            }
        }
        let (tag, detail) = match &r {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if r.is_err() {
            failed += 1;
        }
        println!("criterion {n:>2} {tag} {title} [{took:.1?}]: {detail}");
    };
    let secs = |s| Some(Duration::from_secs(s));
    report(1, "constant-cocycle exactness", secs(1), &mut constant_exactness);
    report(2, "renormalization identity", secs(120), &mut renormalization_identity);
    report(3, "Jensen identity", secs(1), &mut jensen);
    report(4, "zero counting", secs(10), &mut zero_counting);
    report(5, "Lojasiewicz and Polya", secs(30), &mut lojasiewicz_polya);
    report(6, "Herman bound", secs(120), &mut herman);
    let mut single = None;
    report(7, "uniform large deviation decay", secs(900), &mut || {
        let runs = in_pool(1, ldt_runs)?;
        let r = uldb(&runs);
        single = Some(runs);
        r
    });
    report(8, "continuity along the lambda1 sweep", secs(900), &mut lambda1_sweep);
    report(9, "frequency continuity", secs(300), &mut frequency_continuity);
    report(10, "trigonometric product bound", secs(60), &mut trig_product_bound);
    report(11, "determinism across thread counts", None, &mut || {
        let one = match &single {
            Some(r) => ldt_csv(r),
            None => ldt_csv(&in_pool(1, ldt_runs)?),
        };
        let eight = ldt_csv(&in_pool(8, ldt_runs)?);
        ensure(one == eight, format!("{} bytes of CSV, identical: {}", one.len(), one == eight))
    });
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
