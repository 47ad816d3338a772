use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use qpcocycle::analytic::{count_zeros, AnnulusContour, StripDomain, TrigPoly};
use qpcocycle::arithmetic::Frequency;
use qpcocycle::cocycle::{
    build_almost_mathieu, build_harper, build_jacobi, harper_c, lognorm_table, lyapunov, rational_le,
    renorm_le, AnalyticCocycle, HarperParams, Mat2, PointwiseRenormalized,
};
use qpcocycle::Error;

fn dom() -> StripDomain {
    StripDomain::new(0.1).unwrap()
}

fn harper() -> impl Strategy<Value = HarperParams> {
    (0.0..2.0f64, 0.1..2.0f64, 0.0..2.0f64, -3.0..3.0f64).prop_map(|(a, b, c, e)| HarperParams::new(a, b, c, e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn scalar_multiples_shift_l_but_not_l_prime(lambda in 0.2..3.0f64, e in -2.0..2.0f64, s in 0.1..10.0f64) {
        let coc = build_almost_mathieu(lambda, e, &Frequency::golden(30), dom()).unwrap();
        let t = TrigPoly::constant(s);
        let entries = coc.entries().map(|row| row.map(|f| &f * &t));
        let scaled = AnalyticCocycle::new(Frequency::golden(30), entries, dom());
        let a = lyapunov(&coc, &[200, 400], 16).unwrap();
        let b = lyapunov(&scaled, &[200, 400], 16).unwrap();
        prop_assert!((b.value - a.value - s.ln()).abs() < 1e-10);
        prop_assert!((renorm_le(&scaled, &b).unwrap() - renorm_le(&coc, &a).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn norm_dominates_root_det_along_orbits(p in harper(), x in 0.0..1.0f64) {
        let g = Frequency::golden(30);
        let coc = build_harper(&p, &g, dom()).unwrap();
        let n = 64u64;
        let log_norm = lognorm_table(&coc, &[x], &[n]).unwrap()[0][0];
        let half_det: f64 = (0..n).map(|j| 0.5 * coc.det().eval_real(g.phase(x, j)).norm().ln()).sum();
        prop_assert!(log_norm >= half_det - 1e-9 * n as f64, "{log_norm} < {half_det}");
    }

    #[test]
    fn herman_bound(lambda in 1.0..4.0f64, e in -3.0..3.0f64) {
        let coc = build_almost_mathieu(lambda, e, &Frequency::golden(40), dom()).unwrap();
        let est = lyapunov(&coc, &[500, 1000], 32).unwrap();
        prop_assert!(est.value >= lambda.ln() - 2.0 * est.stderr - 1e-3, "L = {} < log {lambda}", est.value);
    }

    #[test]
    fn rational_constant_is_log_spectral_radius(
        a in 0.1..5.0f64, b in -3.0..3.0f64, d in 0.1..5.0f64, p in 1u64..8, q in 8u64..13,
    ) {
        prop_assume!(qpcocycle::arithmetic::gcd(p, q) == 1);
        let freq = Frequency::rational(p, q).unwrap();
        let coc = AnalyticCocycle::constant(Mat2::real(a, b, 0.0, d), freq, dom());
        let r = rational_le(&coc, 8).unwrap();
        prop_assert!((r.l - a.max(d).ln()).abs() < 1e-10);
        prop_assert!((r.l_prime - (a.max(d).ln() - 0.5 * (a * d).ln())).abs() < 1e-10);
    }

    #[test]
    fn harper_c_zeros_match_quadratic_roots(p in harper()) {
        let g = Frequency::golden(30);
        let c = AnnulusContour::from_strip(dom());
        let r = c.outer_radius();
        // Keep roots clear of the contour circles.
        let roots = [0.99, 1.01].map(|s| qpcocycle::checks::harper_root_count(&p, g.beta(), r * s));
        prop_assume!(roots[0] == roots[1]);
        let roots_in = [0.99, 1.01].map(|s| qpcocycle::checks::harper_root_count(&p, g.beta(), r / s));
        prop_assume!(roots_in[0] == roots_in[1]);
        prop_assert_eq!(count_zeros(&harper_c(&p, g.beta()), &c).unwrap(), roots[0]);
    }

    #[test]
    fn telescoped_renormalization_matches_pointwise(lambda1 in 0.0..0.5f64, lambda3 in 0.0..0.5f64, e in -1.0..1.0f64) {
        // lambda2 = 2 keeps c away from zero on the torus.
        let p = HarperParams::new(lambda1, 2.0, lambda3, e);
        let coc = build_harper(&p, &Frequency::golden(40), dom()).unwrap();
        let a = lyapunov(&coc, &[1000, 2000], 32).unwrap();
        let b = lyapunov(&PointwiseRenormalized(&coc), &[1000, 2000], 32).unwrap();
        let tol = 4.0 * (a.stderr + b.stderr) + 1e-3;
        prop_assert!((renorm_le(&coc, &a).unwrap() - b.value).abs() < tol);
    }

    #[test]
    fn estimates_ignore_the_thread_count(p in harper()) {
        let coc = build_harper(&p, &Frequency::golden(30), dom()).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
                .install(|| lyapunov(&coc, &[100, 200], 37).unwrap())
        };
        let (a, b) = (run(1), run(4));
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }
}

#[test]
fn jacobi_transfer_determinant() {
    let g = Frequency::golden(30);
    let c = TrigPoly::from_pairs([(0, Complex64::new(1.5, 0.0)), (1, Complex64::new(0.0, 0.5))]);
    let j = build_jacobi(&TrigPoly::cosine(2.0), &c, 0.4, &g, dom()).unwrap();
    for x in [0.0, 0.17, 0.5, 0.83] {
        let cx = c.eval_real(x);
        let cb = c.eval_real(x - g.beta()).conj();
        let det = j.transfer.at_real(x).det();
        assert!((det - cx * cb).norm() < 1e-12);
    }
}

#[test]
fn jacobi_rejects_complex_potentials_and_zero_c() {
    let g = Frequency::golden(30);
    let v = TrigPoly::monomial(1, 1.0);
    let c = TrigPoly::constant(1.0);
    assert!(matches!(build_jacobi(&v, &c, 0.0, &g, dom()), Err(Error::NotRealValued(_))));
    assert!(matches!(build_jacobi(&TrigPoly::cosine(1.0), &TrigPoly::zero(), 0.0, &g, dom()), Err(Error::ZeroC)));
}

#[test]
fn vanishing_determinant_is_rejected() {
    let g = Frequency::golden(30);
    let coc = AnalyticCocycle::constant(Mat2::real(1.0, 2.0, 0.5, 1.0), g, dom());
    assert_eq!(lyapunov(&coc, &[10], 4).unwrap_err(), Error::IdenticallyZeroDet);
}

#[test]
fn free_operator_has_zero_exponent_in_the_spectrum() {
    // E = 2 cos(2 pi t): elliptic, L = 0.
    let coc = build_almost_mathieu(0.0, 2.0 * (TAU * 0.2).cos(), &Frequency::golden(30), dom()).unwrap();
    let est = lyapunov(&coc, &[1000, 2000], 16).unwrap();
    assert!(est.value.abs() < 1e-3);
}
