//! Brute-force checks of the unramified p-adic lemmas on finite quotients
//! `p^{-a} H2(O_E) / p^b H2(O_E)`.

mod kernel;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::exact_rings::rational::{q, qpow, reconstruct_rational, val_p, Q};
use crate::exact_rings::{sharp, EElem, HermMat2, MatE, QuadAlgebra};
use crate::gu_groups::sample;
use crate::gu_groups::f_t_vector;

pub use kernel::{charsum_naive, ResidueRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("window (a={a}, b={b}) is too small: {reason}")]
    WindowTooSmall { a: u32, b: u32, reason: String },
    #[error("T must be p-integral with p^-1 T not integral")]
    BadT,
    #[error("m must be invertible with rational determinant")]
    BadM,
    #[error("f must be integral with <f,f>_T a p-adic unit")]
    BadF,
    #[error("unknown splitting {0:?}; use inert or split")]
    BadSplitting(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Inert,
    Split,
}

impl FromStr for Splitting {
    type Err = PadicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inert" => Ok(Splitting::Inert),
            "split" => Ok(Splitting::Split),
            _ => Err(PadicError::BadSplitting(s.to_string())),
        }
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Splitting::Inert => "inert",
            Splitting::Split => "split",
        })
    }
}

/// An unramified place: `E_p` is the unramified quadratic field or `Q_p x Q_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalPlace {
    pub p: u64,
    pub splitting: Splitting,
    alg: QuadAlgebra,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// Smallest imaginary quadratic field in which `p` is inert.
fn inert_field(p: u64) -> QuadAlgebra {
    for d in 1u64.. {
        let Ok(alg) = QuadAlgebra::field(d) else { continue };
        let disc = alg.discriminant();
        let inert = if p == 2 {
            disc.rem_euclid(8) == 5
        } else {
            let r = disc.rem_euclid(p as i64) as u64;
            r != 0 && (0..p).all(|x| (x * x) % p != r)
        };
        if inert {
            return alg;
        }
    }
    unreachable!()
}

impl LocalPlace {
    pub fn new(p: u64, splitting: Splitting) -> Result<Self, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        let alg = match splitting {
            Splitting::Inert => inert_field(p),
            Splitting::Split => QuadAlgebra::split(),
        };
        Ok(LocalPlace { p, splitting, alg })
    }

    /// Global model whose completion at `p` is `E_p`.
    pub fn algebra(&self) -> QuadAlgebra {
        self.alg
    }

    fn abs_inv(&self, x: &Q) -> Q {
        qpow(self.p, val_p(x, self.p).expect("nonzero"))
    }
}

impl fmt::Display for LocalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} {} ({})", self.p, self.splitting, self.alg)
    }
}

/// Denominator exponent `a` and modulus exponent `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionWindow {
    pub a: u32,
    pub b: u32,
}

impl PrecisionWindow {
    pub fn new(a: u32, b: u32) -> Self {
        PrecisionWindow { a, b: b.max(1) }
    }

    /// Componentwise maximum.
    pub fn join(&self, o: &Self) -> Self {
        PrecisionWindow { a: self.a.max(o.a), b: self.b.max(o.b) }
    }

    pub fn enlarged(&self) -> Self {
        PrecisionWindow { a: self.a + 1, b: self.b + 1 }
    }

    fn too_small(&self, reason: impl Into<String>) -> PadicError {
        PadicError::WindowTooSmall { a: self.a, b: self.b, reason: reason.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharSumValue {
    pub value: Complex64,
    pub tol: f64,
}

pub const TOL: f64 = 1e-9;

impl CharSumValue {
    pub fn matches(&self, exact: &Q) -> bool {
        (self.value - Complex64::new(crate::exact_rings::rational::to_f64(exact), 0.0)).norm() <= self.tol
    }

    /// Nearest rational with small denominator, if the value is real and close to one.
    pub fn reconstruct(&self) -> Option<Q> {
        if self.value.im.abs() > self.tol {
            return None;
        }
        let r = reconstruct_rational(self.value.re, 1 << 20)?;
        ((crate::exact_rings::rational::to_f64(&r) - self.value.re).abs() <= self.tol).then_some(r)
    }
}

/// Minimal p-adic valuation over the entries, `val_p(m)`.
pub fn mat_val(m: &MatE, p: u64) -> Option<i64> {
    m.entries().iter().filter_map(|x| x.val_p(p)).min()
}

fn check_t(t: &HermMat2, p: u64) -> Result<(), PadicError> {
    let tm = t.to_mat();
    if !tm.is_integral_at(p) || mat_val(&tm, p) != Some(0) {
        return Err(PadicError::BadT);
    }
    Ok(())
}

fn check_m(m: &MatE) -> Result<Q, PadicError> {
    let d = m.det();
    match d.as_rational() {
        Some(x) if !x.is_zero() => Ok(x.clone()),
        _ => Err(PadicError::BadM),
    }
}

/// `Xi_T(m)`: `m^{-1} T m^#` is integral at `p`.
pub fn xi_t(m: &MatE, t: &HermMat2, p: u64) -> Result<bool, PadicError> {
    check_m(m)?;
    let minv = m.inverse().ok_or(PadicError::BadM)?;
    Ok((&(&minv * &t.to_mat()) * &sharp(m)).is_integral_at(p))
}

/// Smallest window for which the enumeration of `U_m` is exact.
pub fn required_window(m: &MatE, p: u64) -> Result<PrecisionWindow, PadicError> {
    check_m(m)?;
    let minv = m.inverse().ok_or(PadicError::BadM)?;
    let a = (-mat_val(&minv, p).unwrap_or(0)).max(0) as u32;
    let b = (-mat_val(m, p).unwrap_or(0)).max(0) as u32;
    Ok(PrecisionWindow::new(a, b))
}

fn check_window(m: &MatE, p: u64, w: PrecisionWindow) -> Result<(), PadicError> {
    let need = required_window(m, p)?;
    if w.a < need.a {
        return Err(w.too_small(format!("U_m has denominators p^{}", need.a)));
    }
    if w.b < need.b {
        return Err(w.too_small(format!("m has denominators p^{}", need.b)));
    }
    Ok(())
}

/// Left side of the unipotent identity: `int psi(tr(Tu)) 1[um integral] du`, with
/// `meas(H2(O_E)) = 1`. Checked against the enlarged window.
pub fn charsum_im(
    t: &HermMat2,
    m: &MatE,
    place: &LocalPlace,
    window: PrecisionWindow,
) -> Result<CharSumValue, PadicError> {
    let (v, v2) = charsum_im_pair(t, m, place, window)?;
    if (v - v2).norm() > TOL {
        return Err(window.too_small(format!("value moved by {:e} on enlarging", (v - v2).norm())));
    }
    Ok(CharSumValue { value: v, tol: TOL })
}

/// Raw sums at `window` and at `window.enlarged()`, without comparing them.
pub fn charsum_im_pair(
    t: &HermMat2,
    m: &MatE,
    place: &LocalPlace,
    window: PrecisionWindow,
) -> Result<(Complex64, Complex64), PadicError> {
    check_t(t, place.p)?;
    check_window(m, place.p, window)?;
    Ok((kernel::charsum(t, m, place.p, window), kernel::charsum(t, m, place.p, window.enlarged())))
}

/// Right side `|det m|^{-1} 1[val_p(m) = 0] Xi_T(m)`. The identity is for integral `m`;
/// below that the left side is `meas(U_m)`, not zero.
pub fn im_rhs(t: &HermMat2, m: &MatE, place: &LocalPlace) -> Result<Q, PadicError> {
    let d = check_m(m)?;
    if mat_val(m, place.p) != Some(0) || !xi_t(m, t, place.p)? {
        return Ok(Q::zero());
    }
    Ok(place.abs_inv(&d))
}

/// `meas(U_m)` by counting lattice points, exact.
pub fn measure_um(m: &MatE, place: &LocalPlace, window: PrecisionWindow) -> Result<Q, PadicError> {
    check_window(m, place.p, window)?;
    let c = kernel::count(m, place.p, window);
    let c2 = kernel::count(m, place.p, window.enlarged());
    let meas = Q::from_integer(c.into()) / qpow(place.p, 4 * window.b as i64);
    let meas2 = Q::from_integer(c2.into()) / qpow(place.p, 4 * (window.b as i64 + 1));
    if meas != meas2 {
        return Err(window.too_small("measure changed on enlarging"));
    }
    Ok(meas)
}

/// `|det m|^{-1}`.
pub fn measure_rhs(m: &MatE, place: &LocalPlace) -> Result<Q, PadicError> {
    Ok(place.abs_inv(&check_m(m)?))
}

/// `alpha_chi(v_T M)` for `M = diag(lambda m^#, m)`. The integrand sees `u` only through
/// `c = tr(Th)`, so the quotient integral is `int psi(c) 1[c / lambda integral] dc` over
/// `Q_p` with `meas(Z_p) = 1`, times `Xi_T(m)`. The `c`-sum runs over
/// `p^{-a} Z_p / p^b Z_p`; `window = None` picks the smallest exact one.
pub fn alpha_chi_local(
    t: &HermMat2,
    lambda: &Q,
    m: &MatE,
    place: &LocalPlace,
    window: Option<PrecisionWindow>,
) -> Result<CharSumValue, PadicError> {
    check_t(t, place.p)?;
    let k = val_p(lambda, place.p).ok_or(PadicError::BadM)?;
    let w = window.unwrap_or(PrecisionWindow::new((-k).max(0) as u32, k.max(0) as u32));
    if (w.a as i64) < -k || (w.b as i64) < k {
        return Err(w.too_small(format!("lambda has valuation {k}")));
    }
    if !xi_t(m, t, place.p)? {
        return Ok(CharSumValue { value: Complex64::zero(), tol: TOL });
    }
    let v = kernel::line_sum(place.p, k, w);
    let v2 = kernel::line_sum(place.p, k, w.enlarged());
    if (v - v2).norm() > TOL {
        return Err(w.too_small("value moved on enlarging"));
    }
    Ok(CharSumValue { value: v, tol: TOL })
}

/// `Y(M) |lambda| Xi_T(m)`.
pub fn alpha_chi_rhs(t: &HermMat2, lambda: &Q, m: &MatE, place: &LocalPlace) -> Result<Q, PadicError> {
    let k = val_p(lambda, place.p).ok_or(PadicError::BadM)?;
    if k < 0 || !xi_t(m, t, place.p)? {
        return Ok(Q::zero());
    }
    Ok(qpow(place.p, -k))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FmReport {
    pub checked: usize,
    pub hypotheses_met: usize,
    pub counterexamples: Vec<MatE>,
}

impl FmReport {
    pub fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "hypotheses_met": self.hypotheses_met,
            "counterexamples": self.counterexamples.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn herm_pair_t(f: &[EElem], t: &HermMat2) -> Q {
    let ft = MatE::row_mul(f, &t.to_mat());
    let s = ft[0].clone() * f[0].conj() + ft[1].clone() * f[1].conj();
    s.as_rational().cloned().expect("<f,f>_T is rational")
}

/// Units of `M2(O_E (x) Z_p)` with rational `p`-unit determinant used for the grids:
/// products of elementary matrices, a swap and `diag(z, conj z)`.
pub fn unit_list(place: &LocalPlace) -> Vec<MatE> {
    let e = place.algebra();
    let (o, z) = (e.one(), e.zero());
    let mk = |r: [[EElem; 2]; 2]| MatE::from_rows(r.into_iter().map(Vec::from).collect());
    let mut units = vec![
        MatE::identity(2, &o),
        mk([[z.clone(), o.clone()], [o.clone(), z.clone()]]),
        mk([[o.clone(), e.omega()], [z.clone(), o.clone()]]),
        mk([[o.clone(), z.clone()], [e.int(1, 1), o.clone()]]),
        mk([[e.int(1, 1), e.int(2, 0)], [e.int(1, 0), e.int(1, 0)]]),
    ];
    if let Some(zeta) = [e.int(1, 1), e.int(2, 1), e.int(1, 2)]
        .into_iter()
        .find(|x| val_p(&x.norm(), place.p) == Some(0))
    {
        units.push(MatE::diag(&[zeta.clone(), zeta.conj()]));
    }
    units.retain(|k| {
        k.det().as_rational().is_some_and(|d| val_p(d, place.p) == Some(0)) && k.is_integral_at(place.p)
    });
    units
}

/// Random unit as in [`unit_list`], with small random elementary entries.
pub fn random_unit<R: Rng>(rng: &mut R, place: &LocalPlace) -> MatE {
    let e = place.algebra();
    let (o, z) = (e.one(), e.zero());
    let list = unit_list(place);
    let u1 = MatE::from_rows(vec![vec![o.clone(), sample::eelem(rng, e, 3)], vec![z.clone(), o.clone()]]);
    let u2 = MatE::from_rows(vec![vec![o.clone(), z], vec![sample::eelem(rng, e, 3), o]]);
    let k = &list[rng.gen_range(0..list.len())];
    &(&u1 * k) * &u2
}

/// Implication `Xi_T(m) and fm integral => m integral` over
/// `k diag(p^i, p^j) k'` for `k, k'` in [`unit_list`] and `|i|, |j| <= range`.
pub fn check_fm_lemma(t: &HermMat2, f: &[EElem], place: &LocalPlace, range: i64) -> Result<FmReport, PadicError> {
    let p = place.p;
    check_t(t, p)?;
    if !f.iter().all(|x| x.is_integral_at(p)) || val_p(&herm_pair_t(f, t), p) != Some(0) {
        return Err(PadicError::BadF);
    }
    let e = place.algebra();
    let units = unit_list(place);
    let mut rep = FmReport { checked: 0, hypotheses_met: 0, counterexamples: vec![] };
    for i in -range..=range {
        for j in -range..=range {
            let d = MatE::diag(&[e.rational(qpow(p, i)), e.rational(qpow(p, j))]);
            for k in &units {
                for k2 in &units {
                    let m = &(k * &d) * k2;
                    rep.checked += 1;
                    let fm = MatE::row_mul(f, &m);
                    if xi_t(&m, t, p)? && fm.iter().all(|x| x.is_integral_at(p)) {
                        rep.hypotheses_met += 1;
                        if !m.is_integral_at(p) {
                            rep.counterexamples.push(m);
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// The `f_T` step of the proof: `conj(f_T m) = f m (m^{-1} T m^#) J2`.
pub fn f_t_step_holds(f: &[EElem], t: &HermMat2, m: &MatE) -> bool {
    let ft = f_t_vector(f, &t.to_mat());
    let lhs: Vec<EElem> = MatE::row_mul(&ft, m).iter().map(EElem::conj).collect();
    let Some(minv) = m.inverse() else { return false };
    let inner = &(&minv * &t.to_mat()) * &sharp(m);
    let j = crate::exact_rings::j2(&t.algebra().one());
    let rhs = MatE::row_mul(&MatE::row_mul(&MatE::row_mul(f, m), &inner), &j);
    lhs == rhs
}

/// Test grid of `m`: `I, diag(1,p), diag(p,1), pI, diag(1,p^2)` and `k diag(1,p) k'`.
pub fn default_m_grid(place: &LocalPlace, seed: u64, random: usize) -> Vec<(String, MatE)> {
    use rand::SeedableRng;
    let e = place.algebra();
    let p = q(place.p as i64);
    let d = |x: Q, y: Q| MatE::diag(&[e.rational(x), e.rational(y)]);
    let mut out = vec![
        ("I".to_string(), d(q(1), q(1))),
        ("diag(1,p)".to_string(), d(q(1), p.clone())),
        ("diag(p,1)".to_string(), d(p.clone(), q(1))),
        ("diag(p,p)".to_string(), d(p.clone(), p.clone())),
        ("diag(1,p^2)".to_string(), d(q(1), &p * &p)),
    ];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ place.p);
    for i in 0..random {
        let k = random_unit(&mut rng, place);
        let k2 = random_unit(&mut rng, place);
        out.push((format!("k{i} diag(1,p) k{i}'"), &(&k * &d(q(1), p.clone())) * &k2));
    }
    out
}

/// `I, diag(1,p), [[1, 1+w], [conj(1+w), 1]]`.
pub fn default_t_grid(place: &LocalPlace) -> Vec<(String, HermMat2)> {
    let e = place.algebra();
    vec![
        ("I".to_string(), HermMat2::identity(e)),
        ("diag(1,p)".to_string(), HermMat2::diag(e, q(1), q(place.p as i64))),
        ("[[1,1+w],[.,1]]".to_string(), HermMat2::new(q(1), q(1), e.int(1, 1))),
    ]
}

/// Every unipotent-identity and measure check on the grid for one place, as JSON rows.
pub fn run_grid(place: &LocalPlace, seed: u64) -> Result<Vec<Value>, PadicError> {
    let mut rows = Vec::new();
    for (mn, m) in default_m_grid(place, seed, 5) {
        let w = required_window(&m, place.p)?;
        for (tn, t) in default_t_grid(place) {
            let lhs = charsum_im(&t, &m, place, w)?;
            let rhs = im_rhs(&t, &m, place)?;
            rows.push(json!({
                "check": "unipotent_identity", "place": place.to_string(), "m": mn, "T": tn,
                "lhs": [lhs.value.re, lhs.value.im], "rhs": rhs.to_string(),
                "pass": lhs.matches(&rhs) && lhs.value.im.abs() < TOL,
            }));
            for lambda in [qpow(place.p, -1), q(1), qpow(place.p, 1), qpow(place.p, 2)] {
                let lhs = alpha_chi_local(&t, &lambda, &m, place, None)?;
                let rhs = alpha_chi_rhs(&t, &lambda, &m, place)?;
                rows.push(json!({
                    "check": "alpha_chi", "place": place.to_string(), "m": mn, "T": tn,
                    "lambda": lambda.to_string(), "lhs": [lhs.value.re, lhs.value.im],
                    "rhs": rhs.to_string(), "pass": lhs.reconstruct().as_ref() == Some(&rhs),
                }));
            }
        }
        if mat_val(&m, place.p) == Some(0) {
            let lhs = measure_um(&m, place, w)?;
            let rhs = measure_rhs(&m, place)?;
            rows.push(json!({
                "check": "measure_Um", "place": place.to_string(), "m": mn,
                "lhs": lhs.to_string(), "rhs": rhs.to_string(), "pass": lhs == rhs,
            }));
        }
    }
    Ok(rows)
}
