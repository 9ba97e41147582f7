//! Archimedean checks: the section norm identity, the unipotent Fourier integral of
//! `alpha_infty`, and the Gamma-factor chain for the holomorphic archimedean integral.

mod quad;

pub use quad::{converge, QuadValue, QuadratureSpec, Scheme};

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::exact_rings::{j2, prime, CMat};
use crate::herm_modform::{act_z, r_star, random_k_infinity, CV6, ModFormError, UpperHalfPoint};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArchError {
    #[error("quadrature did not converge (last refinement change {0:e})")]
    QuadratureNotConverged(f64),
    #[error("bad input: {0}")]
    BadInput(&'static str),
    #[error("g is not a similitude with positive real factor")]
    NotSimilitude,
    #[error(transparent)]
    ModForm(#[from] ModFormError),
}

const MAX_REFINEMENTS: usize = 4;
const FOURIER_REFINEMENTS: usize = 6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn j4() -> CMat {
    let one = c(1.0, 0.0);
    let i2 = CMat::identity(2, &one);
    let z = CMat::zeros(2, 2, &one);
    CMat::from_blocks(&z, &i2, &-&i2, &z)
}

/// `nu` from `g J4 g* = nu J4`, checked to relative `1e-10`.
pub fn similitude(g: &CMat) -> Result<f64, ArchError> {
    if g.rows() != 4 || g.cols() != 4 {
        return Err(ArchError::BadInput("expected a 4x4 matrix"));
    }
    let p = &(g * &j4()) * &g.star();
    let nu = *p.get(0, 2);
    let scale = g.entries().iter().map(|x| x.norm_sqr()).sum::<f64>();
    if nu.re <= 0.0 || p.max_abs_diff(&j4().scale(&nu)) > 1e-10 * scale.max(1.0) {
        return Err(ArchError::NotSimilitude);
    }
    Ok(nu.re)
}

pub fn levi(m: &CMat, nu: f64) -> CMat {
    let z = CMat::zeros(2, 2, &c(0.0, 0.0));
    let top = m.star().inverse().expect("invertible m").scale(&c(nu, 0.0));
    CMat::from_blocks(&top, &z, &z, m)
}

pub fn upper_unipotent(x: &CMat) -> CMat {
    let one = c(1.0, 0.0);
    let i2 = CMat::identity(2, &one);
    CMat::from_blocks(&i2, x, &CMat::zeros(2, 2, &one), &i2)
}

/// Hermitian square root of a positive definite 2x2 matrix.
pub fn sqrt_pd(y: &CMat) -> CMat {
    let sd = y.det().re.sqrt();
    let i2 = CMat::identity(2, &c(1.0, 0.0));
    (y + &i2.scale(&c(sd, 0.0))).scale(&c(1.0 / (y.trace().re + 2.0 * sd).sqrt(), 0.0))
}

/// `m` with `diag(nu *m^{-1}, m) i = iY`, namely `sqrt(nu) Y^{-1/2}`.
pub fn levi_for(y: &CMat, nu: f64) -> CMat {
    sqrt_pd(y).inverse().expect("positive definite Y").scale(&c(nu.sqrt(), 0.0))
}

fn check_pd(y: &CMat) -> Result<(), ArchError> {
    let herm = y.max_abs_diff(&y.star()) <= 1e-12 * (1.0 + y.trace().norm());
    if y.rows() != 2 || !herm || y.get(0, 0).re <= 0.0 || y.det().re <= 0.0 {
        return Err(ArchError::BadInput("expected a 2x2 positive definite Hermitian matrix"));
    }
    Ok(())
}

/// `L_f = J2 tf conj(f) J2^{-1}` for `f = u f1 + v f2`.
pub fn l_f(f: [Complex64; 2]) -> CMat {
    let one = c(1.0, 0.0);
    let j = j2(&one);
    let col = CMat::from_rows(vec![vec![f[0]], vec![f[1]]]);
    let row = CMat::from_rows(vec![vec![f[0].conj(), f[1].conj()]]);
    &(&(&j * &col) * &row) * &j.inverse().unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormIdentity {
    /// `|nu(g)| ||f g||^{-2}`, with `e1, e2, f1, f2` orthonormal.
    pub lhs: f64,
    /// `det Y / tr(L_f Y)` where `g i = X + iY`.
    pub rhs: f64,
}

impl NormIdentity {
    pub fn rel_err(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs()
    }
}

pub fn section_norm_identity(g: &CMat, f: [Complex64; 2]) -> Result<NormIdentity, ArchError> {
    let nu = similitude(g)?;
    if f[0].norm() + f[1].norm() == 0.0 {
        return Err(ArchError::BadInput("f must be nonzero"));
    }
    let zero = c(0.0, 0.0);
    let fg = CMat::row_mul(&[zero, zero, f[0], f[1]], g);
    let norm2: f64 = fg.iter().map(|x| x.norm_sqr()).sum();
    let y = act_z(g, &UpperHalfPoint::base())?.y();
    let rhs = y.det().re / (&l_f(f) * &y).trace().re;
    Ok(NormIdentity { lhs: nu / norm2, rhs })
}

fn rand_c<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_hermitian<R: Rng>(rng: &mut R) -> CMat {
    let w = rand_c(rng);
    CMat::from_rows(vec![
        vec![c(rng.gen_range(-1.0..1.0), 0.0), w],
        vec![w.conj(), c(rng.gen_range(-1.0..1.0), 0.0)],
    ])
}

pub fn random_pd<R: Rng>(rng: &mut R) -> CMat {
    let a = CMat::from_fn(2, 2, |_, _| rand_c(rng));
    &(&a * &a.star()) + &CMat::identity(2, &c(0.2, 0.0))
}

/// Random complex Levi with `nu` in `[0.5, 2)` and `|det m|` bounded below.
pub fn random_levi<R: Rng>(rng: &mut R) -> CMat {
    loop {
        let m = CMat::from_fn(2, 2, |_, _| rand_c(rng));
        if m.det().norm() > 0.2 {
            return levi(&m, rng.gen_range(0.5..2.0));
        }
    }
}

/// Product of random Levis, real unipotents and elements of `K_infinity`.
pub fn random_real_gu<R: Rng>(rng: &mut R) -> CMat {
    let mut g = random_levi(rng);
    for _ in 0..2 {
        g = &(&g * &upper_unipotent(&random_hermitian(rng))) * &random_k_infinity(rng);
        g = &g * &random_levi(rng);
    }
    g
}

/// `alpha_infty(v_T u(X) M) = (r_*, v_T u(X) M)^{-r}` with `M = diag(nu *m^{-1}, m)`,
/// computed through the action on `V6 (x) C`.
pub fn alpha_infty(t: &CMat, x: &CMat, m: &CMat, nu: f64, r: u32) -> Complex64 {
    let v_t = CV6 { alpha: c(0.0, 0.0), h: prime(t), delta: c(0.0, 0.0) };
    let g = &upper_unipotent(x) * &levi(m, nu);
    r_star().bform(&v_t.act(&g, &c(nu, 0.0))).powi(-(r as i32))
}

/// `(2 pi i)^r / (r-1)! nu^r j(M,i)^{-r} e^{-2 pi tr(TY)}`, with `Y` read off `M i`.
pub fn fourier_closed_form(t: &CMat, m: &CMat, nu: f64, r: u32) -> Result<Complex64, ArchError> {
    let y = act_z(&levi(m, nu), &UpperHalfPoint::base())?.y();
    let ri = r as i32;
    let pre = c(0.0, 2.0 * PI).powi(ri) / gamma(r as f64) * nu.powi(ri) * m.det().powi(-ri);
    Ok(pre * (-2.0 * PI * (t * &y).trace().re).exp())
}

/// `int_{N_T \ U_P} e^{-2 pi i tr(TX)} alpha_infty(v_T u(X) M) dX`.
///
/// `N_T = {tr(TX) = 0}` and the integrand is constant along it, so the quotient is the
/// line `X = c T^{-1}/2 + n`, `c = tr(TX)`, with measure `dc`. `n` is any point of `N_T`
/// and only moves the evaluation points.
///
/// The line is cut at `|c| = R`. Since `|(r_*, .)| >= |c| |det m| / nu`, integrating by
/// parts bounds each cut tail by `K^r R^{-r} / (2 pi)` times 2, `K = nu / |det m|`.
/// Refinement doubles the panels and grows `R`. A step is accepted once the change is
/// within `tol |I|`, the previous tail bound or roundoff (`1e-13 int |f|`), and the
/// new tail bound is below `1e-6 |I|` or roundoff. The reported error is the last
/// change plus the tail bound.
pub fn fourier_unipotent_integral_levi(
    t: &CMat,
    m: &CMat,
    nu: f64,
    r: u32,
    n: &CMat,
    spec: &QuadratureSpec,
) -> Result<QuadValue<Complex64>, ArchError> {
    check_pd(t)?;
    if r < 7 {
        return Err(ArchError::BadInput("weight must be at least 7"));
    }
    if nu <= 0.0 || m.det().norm() == 0.0 {
        return Err(ArchError::BadInput("M needs nu > 0 and det m != 0"));
    }
    if (t * n).trace().norm() > 1e-12 * (1.0 + n.trace().norm()) {
        return Err(ArchError::BadInput("n must satisfy tr(T n) = 0"));
    }
    let y = act_z(&levi(m, nu), &UpperHalfPoint::base())?.y();
    let tau = (t * &y).trace().re;
    let x0 = t.inverse().unwrap().scale(&c(0.5, 0.0));
    let k = nu / m.det().norm();
    let run = |sp: &QuadratureSpec| {
        let big_r = sp.radius * tau.max(1.0);
        let per = (big_r / tau.min(1.0)).ceil() as usize;
        let rule = QuadratureSpec { panels: sp.panels * per, ..*sp }.interval(-big_r, big_r);
        let mut acc = crate::sum::Neumaier::default();
        let mut mass = 0.0;
        for (cc, w) in rule {
            let x = &x0.scale(&c(cc, 0.0)) + n;
            let term = Complex64::from_polar(w, -2.0 * PI * cc) * alpha_infty(t, &x, m, nu, r);
            acc.add(term);
            mass += term.norm();
        }
        let tail = (k / big_r).powi(r as i32) / PI;
        (acc.total(), mass, tail)
    };
    let mut cur = *spec;
    let mut prev = run(&cur);
    let mut change = f64::INFINITY;
    for _ in 0..FOURIER_REFINEMENTS {
        cur = cur.refined();
        let next = run(&cur);
        change = (next.0 - prev.0).norm();
        let noise = 1e-13 * next.1;
        let settled = change <= (spec.tol * next.0.norm()).max(prev.2 + noise);
        if settled && next.2 <= (1e-6 * next.0.norm()).max(noise) {
            return Ok(QuadValue { value: next.0, error: change + next.2 });
        }
        prev = next;
    }
    Err(ArchError::QuadratureNotConverged(change))
}

/// As [`fourier_unipotent_integral_levi`] with `nu = 1`, `m = Y^{-1/2}` and `n = 0`.
pub fn fourier_unipotent_integral(
    t: &CMat,
    y: &CMat,
    r: u32,
    spec: &QuadratureSpec,
) -> Result<QuadValue<Complex64>, ArchError> {
    check_pd(y)?;
    let zero = CMat::zeros(2, 2, &c(0.0, 0.0));
    fourier_unipotent_integral_levi(t, &levi_for(y, 1.0), 1.0, r, &zero, spec)
}

/// `pi^{-s/2} Gamma(s/2)`.
pub fn gamma_r(s: f64) -> f64 {
    PI.powf(-s / 2.0) * gamma(s / 2.0)
}

/// `2 (2 pi)^{-s} Gamma(s)`.
pub fn gamma_c(s: f64) -> f64 {
    2.0 * (2.0 * PI).powf(-s) * gamma(s)
}

fn check_triple(s: f64, r: u32, det_t: f64) -> Result<(), ArchError> {
    if s <= 2.0 / 3.0 {
        return Err(ArchError::BadInput("s must exceed 2/3"));
    }
    if r < 5 {
        return Err(ArchError::BadInput("r must be at least 5"));
    }
    if det_t <= 0.0 {
        return Err(ArchError::BadInput("det T must be positive"));
    }
    Ok(())
}

/// `Gamma(a) (4 pi)^{-a} Gamma(r-2) / (4 (4 pi det T)^{r-2})`, `a = 3s + r - 3`.
pub fn gamma_triple_closed(s: f64, r: u32, det_t: f64) -> f64 {
    let a = 3.0 * s + r as f64 - 3.0;
    let k = r as f64 - 2.0;
    gamma(a) * (4.0 * PI).powf(-a) * gamma(k) / (4.0 * (4.0 * PI * det_t).powf(k))
}

struct TripleAxes {
    a: f64,
    t: Vec<(f64, f64)>,
    y: Vec<(f64, f64)>,
}

fn triple_axes(s: f64, r: u32, det_t: f64, sp: &QuadratureSpec) -> TripleAxes {
    let a = 3.0 * s + r as f64 - 3.0;
    // decay lengths: the means of the Gamma densities in t and y22
    let t = sp.half_line(a / (4.0 * PI));
    let y = sp.half_line((r as f64 - 2.0) / (4.0 * PI * det_t));
    TripleAxes { a, t, y }
}

/// `int y22^{r-4} t^{3s+r-3} e^{-4 pi (t + |y12|^2 / y22 + det T y22)} dt/t dy22 dy12`
/// over `t, y22 > 0`, `y12 in C`, as a tensor rule in `(t, y22, |y12|)`; the angle of
/// `y12` contributes `2 pi`.
pub fn gamma_triple_integral(s: f64, r: u32, det_t: f64, spec: &QuadratureSpec) -> Result<QuadValue<f64>, ArchError> {
    check_triple(s, r, det_t)?;
    let run = |sp: &QuadratureSpec| {
        let ax = triple_axes(s, r, det_t, sp);
        let y_max = ax.y.iter().map(|p| p.0).fold(0.0, f64::max);
        let rho = sp.interval(0.0, (sp.radius * y_max).sqrt());
        let mut total = 0.0;
        for &(t, wt) in &ax.t {
            let ft = wt * t.powf(ax.a - 1.0) * (-4.0 * PI * t).exp();
            let mut inner = 0.0;
            for &(y, wy) in &ax.y {
                let fy = wy * y.powi(r as i32 - 4) * (-4.0 * PI * det_t * y).exp();
                let mut ring = 0.0;
                for &(p, wp) in &rho {
                    ring += wp * 2.0 * PI * p * (-4.0 * PI * p * p / y).exp();
                }
                inner += fy * ring;
            }
            total += ft * inner;
        }
        total
    };
    let (v, _) = converge(spec, MAX_REFINEMENTS, f64::abs, |_| 0.0, |a, b| (a - b).abs(), run)
        .map_err(ArchError::QuadratureNotConverged)?;
    Ok(v)
}

/// The same integral after `y12 = sqrt(y22) sigma`, as a product of three 1-D rules.
pub fn gamma_triple_separated(s: f64, r: u32, det_t: f64, spec: &QuadratureSpec) -> Result<f64, ArchError> {
    check_triple(s, r, det_t)?;
    let ax = triple_axes(s, r, det_t, spec);
    let it: f64 = ax.t.iter().map(|&(t, w)| w * t.powf(ax.a - 1.0) * (-4.0 * PI * t).exp()).sum();
    let iy: f64 = ax.y.iter().map(|&(y, w)| w * y.powi(r as i32 - 3) * (-4.0 * PI * det_t * y).exp()).sum();
    let is: f64 = spec
        .interval(0.0, spec.radius.sqrt())
        .iter()
        .map(|&(p, w)| w * 2.0 * PI * p * (-4.0 * PI * p * p).exp())
        .sum();
    Ok(it * iy * is)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssemblyRow {
    pub s: f64,
    pub triple: f64,
    pub triple_error: f64,
    /// `Gamma_R(6s-2) Gamma_C(3s)` times the triple integral.
    pub value: f64,
    /// `(2 pi)^{-9s} Gamma(3s-1) Gamma(3s) Gamma(3s+r-3)`.
    pub reference: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssemblyReport {
    pub r: u32,
    pub det_t: f64,
    pub rows: Vec<AssemblyRow>,
    /// `(max ratio - min ratio) / mean ratio`.
    pub spread: f64,
}

pub fn jinfty_reference(s: f64, r: u32) -> f64 {
    (2.0 * PI).powf(-9.0 * s) * gamma(3.0 * s - 1.0) * gamma(3.0 * s) * gamma(3.0 * s + r as f64 - 3.0)
}

/// Ratio spread of the assembled archimedean integral to the reference over `s_grid`.
pub fn jinfty_assembly(s_grid: &[f64], r: u32, det_t: f64, spec: &QuadratureSpec) -> Result<AssemblyReport, ArchError> {
    if s_grid.len() < 3 {
        return Err(ArchError::BadInput("need at least three s values"));
    }
    let mut rows = Vec::new();
    for &s in s_grid {
        let tr = gamma_triple_integral(s, r, det_t, spec)?;
        let value = gamma_r(6.0 * s - 2.0) * gamma_c(3.0 * s) * tr.value;
        let reference = jinfty_reference(s, r);
        rows.push(AssemblyRow { s, triple: tr.value, triple_error: tr.error, value, reference, ratio: value / reference });
    }
    Ok(AssemblyReport { r, det_t, spread: spread(rows.iter().map(|x| x.ratio)), rows })
}

/// `(max - min) / mean`.
pub fn spread(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
    (hi - lo) / mean.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn id2() -> CMat {
        CMat::identity(2, &c(1.0, 0.0))
    }

    #[test]
    fn gamma_factor_definitions() {
        assert!((gamma_r(2.0) - 1.0 / PI).abs() < 1e-15);
        assert!((gamma_c(2.0) - 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
        assert!((gamma_r(1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn section_norm_trivial_and_levi() {
        let f1 = [c(1.0, 0.0), c(0.0, 0.0)];
        let id = CMat::identity(4, &c(1.0, 0.0));
        let n = section_norm_identity(&id, f1).unwrap();
        assert_eq!((n.lhs, n.rhs), (1.0, 1.0));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let g = random_real_gu(&mut rng);
            let f = [rand_c(&mut rng), rand_c(&mut rng)];
            let n = section_norm_identity(&g, f).unwrap();
            assert!(n.rel_err() < 1e-10, "{n:?}");
        }
    }

    #[test]
    fn similitude_rejects_non_members() {
        let mut g = CMat::identity(4, &c(1.0, 0.0));
        g.set(0, 0, c(2.0, 0.0));
        assert_eq!(similitude(&g), Err(ArchError::NotSimilitude));
    }

    #[test]
    fn fourier_at_identity() {
        let spec = QuadratureSpec::default();
        let v = fourier_unipotent_integral(&id2(), &id2(), 8, &spec).unwrap();
        let cf = fourier_closed_form(&id2(), &id2(), 1.0, 8).unwrap();
        assert!((v.value - cf).norm() <= 1e-2 * cf.norm(), "{v:?} {cf}");
        assert!((v.value - cf).norm() <= v.error, "{v:?} {cf}");
    }

    #[test]
    fn triple_matches_closed_form() {
        let spec = QuadratureSpec::default();
        for (s, r) in [(1.0, 8), (1.5, 10)] {
            let q = gamma_triple_integral(s, r, 1.0, &spec).unwrap();
            let cf = gamma_triple_closed(s, r, 1.0);
            assert!((q.value - cf).abs() < 1e-6 * cf, "{s} {r} {} {cf}", q.value);
        }
    }
}
