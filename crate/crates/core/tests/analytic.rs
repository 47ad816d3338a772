use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use qpcocycle::analytic::{
    count_zeros, fit_transversality, geometric, mean_log, polya_check, sublevel_measure, taylor_coeff,
    taylor_coeff_direct, taylor_scale, AnnulusContour, StripDomain, TrigPoly,
};

const DELTA: f64 = 0.1;

fn contour() -> AnnulusContour {
    AnnulusContour::from_strip(StripDomain::new(DELTA).unwrap())
}

/// `w - r e^{2 pi i theta}`, with the zero at `Im z = -log(r) / 2 pi`.
fn factor(r: f64, theta: f64) -> TrigPoly {
    &TrigPoly::monomial(1, 1.0) - &TrigPoly::constant(Complex64::from_polar(r, TAU * theta))
}

fn product(roots: &[(f64, f64)]) -> TrigPoly {
    roots.iter().fold(TrigPoly::constant(1.0), |acc, &(r, t)| &acc * &factor(r, t))
}

/// `|log r| / 2 pi` either well inside `DELTA` or well outside it.
fn root() -> impl Strategy<Value = (f64, f64, bool)> {
    (prop::bool::ANY, prop::bool::ANY, 0.0..1.0f64, 0.0..1.0f64).prop_map(|(inside, up, s, theta)| {
        let height = if inside { 0.08 * s } else { 0.13 + 0.2 * s };
        let height = if up { height } else { -height };
        ((-TAU * height).exp(), theta, inside)
    })
}

fn torus_min(f: &TrigPoly) -> f64 {
    (0..4096).map(|m| f.eval_real(m as f64 / 4096.0).norm()).fold(f64::INFINITY, f64::min)
}

fn contour_min(f: &TrigPoly, c: &AnnulusContour) -> f64 {
    let mut m = f64::INFINITY;
    for r in [c.inner_radius(), c.outer_radius()] {
        for k in 0..4096 {
            m = m.min(f.eval_w(Complex64::from_polar(r, TAU * k as f64 / 4096.0)).norm());
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn count_matches_planted_roots(roots in prop::collection::vec(root(), 1..6)) {
        let f = product(&roots.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>());
        let inside = roots.iter().filter(|r| r.2).count();
        prop_assert_eq!(count_zeros(&f, &contour()).unwrap(), inside);
    }

    #[test]
    fn winding_is_additive(a in prop::collection::vec(root(), 1..4), b in prop::collection::vec(root(), 1..4)) {
        let f = product(&a.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>());
        let g = product(&b.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>());
        let c = contour();
        let sum = count_zeros(&f, &c).unwrap() + count_zeros(&g, &c).unwrap();
        prop_assert_eq!(count_zeros(&(&f * &g), &c).unwrap(), sum);
    }

    #[test]
    fn count_is_stable_under_small_perturbations(
        roots in prop::collection::vec(root(), 1..5),
        pert in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 5),
    ) {
        let f = product(&roots.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>());
        let c = contour();
        let g = TrigPoly::from_pairs(pert.iter().enumerate().map(|(i, &(re, im))| (i as i32 - 2, Complex64::new(re, im))));
        let size: f64 = g.terms().map(|(k, z)| z.norm() * (TAU * DELTA * k.abs() as f64).exp()).sum();
        // Rouche: |h| < |f| on the contour keeps the count.
        let h = g.scale(0.5 * contour_min(&f, &c) / size);
        prop_assert_eq!(count_zeros(&(&f + &h), &c).unwrap(), count_zeros(&f, &c).unwrap());
    }

    #[test]
    fn jensen_sums_outer_roots(roots in prop::collection::vec((0.2..5.0f64, 0.0..1.0f64), 1..6)) {
        let roots: Vec<_> = roots.into_iter().filter(|r| (r.0 - 1.0).abs() > 1e-3).collect();
        prop_assume!(!roots.is_empty());
        let f = product(&roots);
        let expected: f64 = roots.iter().map(|r| r.0.ln().max(0.0)).sum();
        prop_assert!((mean_log(&f).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn mean_log_of_product_is_sum(
        a in prop::collection::vec((0.2..5.0f64, 0.0..1.0f64), 1..4),
        b in prop::collection::vec((0.2..5.0f64, 0.0..1.0f64), 1..4),
        scale in 0.1..10.0f64,
    ) {
        let f = product(&a).scale(scale);
        let g = product(&b);
        let lhs = mean_log(&(&f * &g)).unwrap();
        prop_assert!((lhs - mean_log(&f).unwrap() - mean_log(&g).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn mean_log_matches_quadrature_off_the_torus(roots in prop::collection::vec(root(), 1..4)) {
        let f = product(&roots.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>());
        prop_assume!(torus_min(&f) > 1e-2);
        let n = 8192;
        let quad = (0..n).map(|m| f.eval_real(m as f64 / n as f64).norm().ln()).sum::<f64>() / n as f64;
        prop_assert!((mean_log(&f).unwrap() - quad).abs() < 1e-8);
    }

    #[test]
    fn mean_log_is_continuous_across_the_torus(theta in 0.0..1.0f64, h in 1e-6..1e-3f64) {
        let on = mean_log(&factor(1.0, theta)).unwrap();
        let off = mean_log(&factor((TAU * h).exp(), theta)).unwrap();
        prop_assert!(on.abs() < 1e-10);
        prop_assert!((off - on - TAU * h).abs() < 1e-10);
    }

    #[test]
    fn transversality_exponent_is_inverse_multiplicity(theta in 0.0..1.0f64, m in 1usize..=2) {
        let f = (0..m).fold(TrigPoly::constant(1.0), |acc, _| &acc * &factor(1.0, theta));
        let p = fit_transversality(&f, &geometric(1e-4, 1e-2, 9)).unwrap();
        prop_assert_eq!(p.max_multiplicity, m);
        prop_assert!((p.alpha - 1.0 / m as f64).abs() < 0.05, "alpha {}", p.alpha);
    }

    #[test]
    fn sublevel_measure_is_monotone(roots in prop::collection::vec(root(), 1..4), e1 in 1e-3..1.0f64, e2 in 1e-3..1.0f64) {
        let f = product(&roots.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>());
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let a = sublevel_measure(&f, lo).unwrap();
        let b = sublevel_measure(&f, hi).unwrap();
        prop_assert!(a <= b);
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
    }

    #[test]
    fn polya_bound_holds(
        coeffs in prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..4),
        y in -1.0..1.0f64,
        eps_exp in 1.0..4.0f64,
    ) {
        let mut p: Vec<Complex64> = coeffs.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        p.push(Complex64::new(1.0, 0.0));
        let eps = 10f64.powf(-eps_exp);
        let r = polya_check(&p, y, eps).unwrap();
        prop_assert!(r.ok, "measure {} bound {}", r.measure, r.bound);
    }

    #[test]
    fn taylor_coefficients_agree(
        coeffs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 5),
        x in 0.0..1.0f64,
        y in -0.05..0.05f64,
        j in 0usize..6,
    ) {
        let f = TrigPoly::from_pairs(coeffs.iter().enumerate().map(|(i, &(re, im))| (i as i32 - 2, Complex64::new(re, im))));
        let z0 = Complex64::new(x, y);
        let a = taylor_coeff(&f, z0, j, &contour()).unwrap();
        let b = taylor_coeff_direct(&f, z0, j);
        prop_assert!((a - b).norm() <= 1e-9 * taylor_scale(&f, z0, j).max(1.0));
    }
}
