use std::f64::consts::PI;

use gspin6::arch_quadrature::{
    fourier_closed_form, fourier_unipotent_integral, fourier_unipotent_integral_levi, gamma_c, gamma_r,
    gamma_triple_closed, gamma_triple_integral, gamma_triple_separated, jinfty_assembly, levi, levi_for, random_hermitian,
    random_pd, random_real_gu, section_norm_identity, QuadratureSpec,
};
use gspin6::exact_rings::CMat;
use gspin6::herm_modform::random_k_infinity;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn random_t(rng: &mut ChaCha8Rng) -> CMat {
    let t = random_pd(rng);
    // keep tr(T Y) moderate so the closed form is not vanishingly small
    t.scale(&c(1.0 / t.trace().re))
}

fn random_m(rng: &mut ChaCha8Rng) -> CMat {
    loop {
        let m = CMat::from_fn(2, 2, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let d = m.det().norm();
        if d > 0.3 && d < 3.0 {
            return m;
        }
    }
}

/// `tr(T Y)` for `Y = Im(M i)`, read back off the closed form's modulus.
fn tau(t: &CMat, m: &CMat, nu: f64, r: u32) -> f64 {
    let cf = fourier_closed_form(t, m, nu, r).unwrap();
    let scale = (2.0 * PI).powi(r as i32) / factorial(r - 1) * (nu / m.det().norm()).powi(r as i32);
    -(cf.norm() / scale).ln() / (2.0 * PI)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn section_norm_is_right_k_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_real_gu(&mut rng);
        let k = random_k_infinity(&mut rng);
        let f = [Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(0.1..1.0))];
        let a = section_norm_identity(&g, f).unwrap();
        let b = section_norm_identity(&(&g * &k), f).unwrap();
        prop_assert!(a.rel_err() <= 1e-10);
        prop_assert!(rel(b.lhs, a.lhs) <= 1e-9 && rel(b.rhs, a.rhs) <= 1e-9, "{a:?} {b:?}");
    }

    #[test]
    fn gamma_factor_duplication(s in 0.3f64..6.0) {
        // Gamma_R(s) Gamma_R(s + 1) = Gamma_C(s)
        prop_assert!(rel(gamma_r(s) * gamma_r(s + 1.0), gamma_c(s)) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn fourier_integral_matches_closed_form(seed in any::<u64>(), r in 7u32..=11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_t(&mut rng);
        let (m, nu) = loop {
            let m = random_m(&mut rng);
            let nu = rng.gen_range(0.5..2.0);
            if tau(&t, &m, nu, r) <= 2.0 {
                break (m, nu);
            }
        };
        // n in N_T: remove the tr(T X) component along T^{-1}/2
        let x = random_hermitian(&mut rng);
        let dir = t.inverse().unwrap().scale(&c(0.5));
        let n = &x - &dir.scale(&(&t * &x).trace());
        let spec = QuadratureSpec::default();
        let cf = fourier_closed_form(&t, &m, nu, r).unwrap();
        let zero = CMat::zeros(2, 2, &c(0.0));
        let v0 = fourier_unipotent_integral_levi(&t, &m, nu, r, &zero, &spec).unwrap();
        let vn = fourier_unipotent_integral_levi(&t, &m, nu, r, &n, &spec).unwrap();
        prop_assert!((v0.value - cf).norm() <= 1e-2 * cf.norm(), "{} vs {cf}", v0.value);
        prop_assert!((v0.value - cf).norm() <= v0.error + 1e-9 * cf.norm(), "error estimate {:e} too small", v0.error);
        prop_assert!((vn.value - v0.value).norm() <= v0.error + vn.error + 1e-9 * cf.norm());
    }

    #[test]
    fn gamma_triple_matches_closed_form(seed in any::<u64>(), r in 7u32..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = rng.gen_range(0.8..2.5);
        let det_t = rng.gen_range(0.5..3.0);
        let spec = QuadratureSpec::default();
        let closed = gamma_triple_closed(s, r, det_t);
        let v = gamma_triple_integral(s, r, det_t, &spec).unwrap();
        prop_assert!(rel(v.value, closed) <= 1e-6, "s = {s}, r = {r}: {} vs {closed}", v.value);
        let sep = gamma_triple_separated(s, r, det_t, &spec.refined().refined()).unwrap();
        prop_assert!(rel(sep, closed) <= 1e-6);
    }
}

#[test]
fn tiny_fourier_values_keep_an_honest_error() {
    // tr(T Y) = 6: the closed form sits at the roundoff floor of the integrand
    let t = CMat::identity(2, &c(0.5));
    let y = CMat::identity(2, &c(6.0));
    let v = fourier_unipotent_integral(&t, &y, 8, &QuadratureSpec::default()).unwrap();
    let cf = fourier_closed_form(&t, &levi_for(&y, 1.0), 1.0, 8).unwrap();
    assert!((v.value - cf).norm() <= v.error, "{v:?} {cf}");
}

#[test]
fn refinement_stays_within_reported_error() {
    let spec = QuadratureSpec::default();
    let fine = spec.refined();
    // one case: the triple integral costs about 8x per refinement
    for (s, r) in [(1.0, 8)] {
        let a = gamma_triple_integral(s, r, 1.0, &spec).unwrap();
        let b = gamma_triple_integral(s, r, 1.0, &fine).unwrap();
        assert!((a.value - b.value).abs() <= a.error + b.error + 1e-14 * a.value.abs(), "s = {s}: {a:?} {b:?}");
    }
    let t = CMat::identity(2, &c(1.0));
    for y in [1.0, 1.5, 2.0] {
        let yy = CMat::identity(2, &c(y));
        let a = fourier_unipotent_integral(&t, &yy, 8, &spec).unwrap();
        let b = fourier_unipotent_integral(&t, &yy, 8, &fine).unwrap();
        assert!((a.value - b.value).norm() <= a.error + b.error + 1e-14 * a.value.norm(), "y = {y}");
    }
}

#[test]
fn closed_forms_at_known_points() {
    assert!(rel(gamma_r(2.0), 1.0 / PI) < 1e-14);
    assert!(rel(gamma_c(1.0), 1.0 / PI) < 1e-14);
    assert!(rel(gamma_r(1.0), 1.0) < 1e-14);
    // Y = I, T = I, r = 8: (2 pi i)^8 / 7! e^{-4 pi}
    let id = CMat::identity(2, &c(1.0));
    let cf = fourier_closed_form(&id, &id, 1.0, 8).unwrap();
    let expect = (2.0 * PI).powi(8) / 5040.0 * (-4.0 * PI).exp();
    assert!((cf - c(expect)).norm() <= 1e-12 * expect);
    assert!(fourier_unipotent_integral(&id, &id, 6, &QuadratureSpec::default()).is_err());
    let lv = levi(&id, 2.0);
    assert!(gspin6::arch_quadrature::similitude(&lv).unwrap() - 2.0 < 1e-12);
}

#[test]
fn assembly_is_proportional_on_a_grid() {
    let rep = jinfty_assembly(&[1.0, 1.5, 2.0, 2.5], 8, 1.0, &QuadratureSpec::default()).unwrap();
    assert!(rep.spread <= 1e-3, "spread {}", rep.spread);
    assert!(jinfty_assembly(&[1.0, 2.0], 8, 1.0, &QuadratureSpec::default()).is_err());
}
