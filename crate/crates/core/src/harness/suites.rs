//! The check suites. Each returns records in a fixed order for a given seed.

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{ArchWhich, HarnessError, Record, Rep, RunConfig};
use crate::ait_quaternion::{self as ait, HermitianData, Integrality};
use crate::arch_quadrature::{self as arch, QuadratureSpec};
use crate::dual_lfactors::{self as lf, RecipPoly, SatakeGU, SatakeSpin6};
use crate::exact_rings::rational::{q, qpow, to_f64, val_p, Q};
use crate::exact_rings::text::parse_herm;
use crate::exact_rings::{j2, CMat, EElem, HermMat2, MatE, QuadAlgebra};
use crate::gu_groups::{self as gu, sample, GUElem, Generator, V6Vec};
use crate::herm_modform::{self as hm, UpperHalfPoint};
use crate::padic_verify::{self as pv, LocalPlace, PadicError, PrecisionWindow};

pub mod anchors {
    pub const WEDGE2: &str = "exterior square factor = GSp4 spin factor x (1 - a0^2 a1 a2 Z^2)";
    pub const WEDGE2_NEG: &str = "negative-trace intertwiner breaks the exterior square factorization";
    pub const STD: &str = "(1 - Z^2) standard factor = GSp4 standard factor at Z^2";
    pub const IM: &str = "unipotent character sum = |det m|^-1 1[val m = 0] Xi_T(m)";
    pub const WINDOW: &str = "character sum stable under enlarging the precision window";
    pub const MEASURE: &str = "meas(U_m) = |det m|^-1";
    pub const ALPHA_CHI: &str = "alpha_chi(v_T M) = Y(M) |lambda| Xi_T(m)";
    pub const FM: &str = "Xi_T(m) and f m integral imply m integral";
    pub const Q_INV: &str = "q(v g) = q(v) on V6";
    pub const IOTA: &str = "iota(v) v0 = -R_v0(v)";
    pub const D_E: &str = "line stabilizer element scales f by lambda and f_T by conj(lambda)";
    pub const S_SQUARED: &str = "S^2 = -N(Pf J) det T";
    pub const QUAT_NORM: &str = "quaternion norm is multiplicative";
    pub const QUAT_CONJ: &str = "a conj(a) = N(a)";
    pub const LATTICE: &str = "m^-1 T m^# integral iff V(m) is S-stable";
    pub const GRAM: &str = "Gram matrix of f, f_T is diag(<f,f>, <f,f> det T)";
    pub const F_T_PAIRING: &str = "<f_T, delta> = -conj(<f, S delta>)";
    pub const RSTAR_1: &str = "|(r_*, v)|^2 = ||v||^2 - (v, v)";
    pub const RSTAR_2: &str = "r_* k = j(k, i)^-1 r_* on K_infinity";
    pub const RSTAR_3: &str = "j(g, i)^-1 nu(g) r_* g^-1 = (-1, Z, -det Z) at Z = g i";
    pub const RSTAR_4: &str = "j(g, i)^-1 nu(g) (r_*, v g) = Q_v(g i)";
    pub const PERMUTATION: &str = "translations permute the solutions of q(v) = -2 det T";
    pub const MODULARITY: &str = "P_T(gamma Z) = j(gamma, Z)^r P_T(Z)";
    pub const EQUIVARIANCE: &str = "Q_{v gamma}(Z) = nu^-1 j(gamma, Z) Q_v(gamma Z)";
    pub const CONVERGENCE: &str = "P_T truncations converge within the tail estimate";
    pub const SECTION_NORM: &str = "|nu(g)| ||f g||^-2 = det Y / tr(L_f Y)";
    pub const FOURIER: &str = "archimedean Fourier integral of alpha_infty in closed form";
    pub const GAMMA_TRIPLE: &str = "archimedean triple integral in closed form";
    pub const ASSEMBLY: &str = "assembled J_infinity proportional to (2 pi)^-9s G(3s-1) G(3s) G(3s+r-3)";
}

/// Independent stream per suite and seed.
fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

fn strs(xs: &[Q]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn coeffs(p: &RecipPoly) -> Vec<String> {
    strs(p.coeffs())
}

fn cq(x: &Q) -> Complex64 {
    Complex64::new(to_f64(x), 0.0)
}

fn field(d: u64) -> Result<QuadAlgebra, HarnessError> {
    Ok(QuadAlgebra::field(d)?)
}

/// Counting record: `lhs` samples out of `rhs` satisfied the identity.
fn tally(name: &str, anchor: &'static str, inputs: Value, ok: usize, n: usize, first_bad: Option<String>) -> Record {
    let r = Record::exact(name, anchor, inputs, ok, n);
    match first_bad {
        Some(b) => r.with_detail(json!({ "first_failure": b })),
        None => r,
    }
}

struct Tally {
    ok: usize,
    n: usize,
    first_bad: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { ok: 0, n: 0, first_bad: None }
    }

    fn push(&mut self, pass: bool, what: impl FnOnce() -> String) {
        self.n += 1;
        if pass {
            self.ok += 1;
        } else if self.first_bad.is_none() {
            self.first_bad = Some(what());
        }
    }

    fn record(self, name: &str, anchor: &'static str, inputs: Value) -> Record {
        tally(name, anchor, inputs, self.ok, self.n, self.first_bad)
    }
}

// ---- Euler factors ----

pub fn euler(cfg: &RunConfig) -> Result<Value, HarnessError> {
    let p = &cfg.params;
    let three = || -> Result<(&Q, &Q, &Q), HarnessError> {
        match p.as_slice() {
            [a, b, c] => Ok((a, b, c)),
            _ => Err(lf::LFactorError::Arity { expected: 3, got: p.len() }.into()),
        }
    };
    let mut warnings = Vec::new();
    let poly = match cfg.rep {
        Rep::Wedge2 => lf::wedge2_factor_gu_inert(&SatakeGU::from_slice(p)?)?,
        Rep::Std => lf::std_factor_gu_inert(&SatakeGU::from_slice(p)?)?,
        Rep::Spin6 => {
            let s = SatakeSpin6::from_slice(p)?;
            warnings = s.warnings();
            lf::spin6_factor(&s)
        }
        Rep::Gsp4Spin => {
            let (a, b, c) = three()?;
            lf::gsp4_spin_recip(a, b, c)?
        }
        Rep::Gsp4Std => {
            let (a, b, c) = three()?;
            lf::gsp4_std_recip(a, b, c)?
        }
    };
    Ok(json!({
        "rep": cfg.rep.as_str(), "params": strs(p), "coefficients": coeffs(&poly), "warnings": warnings,
    }))
}

/// Random triple with entries `n/d`, `0 < |n|, d <= 9`, and `a1, a2 != -1`. On
/// `a1 = -1` or `a2 = -1` the spin factor is even in `Z`, so replacing `A` by `-A`
/// cannot change the exterior square factor and the negative control says nothing.
pub fn random_satake<R: Rng>(rng: &mut R) -> SatakeGU {
    let minus_one = -Q::from_integer(1.into());
    let mut draw = || loop {
        let x = sample::nonzero_rational(rng, 9);
        if x != minus_one {
            return x;
        }
    };
    let a0 = draw();
    let (a1, a2) = (draw(), draw());
    SatakeGU::new(a0, a1, a2).expect("nonzero")
}

/// Both sides of the exterior square factorization for `s`.
pub fn wedge2_sides(s: &SatakeGU, a: &crate::exact_rings::QMat) -> Result<(RecipPoly, RecipPoly), HarnessError> {
    let lhs = lf::wedge2_factor_with(s, a);
    let rhs = lf::gsp4_spin_recip(&s.a0, &s.a1, &s.a2)?.mul(&RecipPoly::new(vec![q(1), q(0), -s.central()]));
    Ok((lhs, rhs))
}

/// The two factorization identities on `n` seeded triples each, and the negative
/// control with `-A`.
pub fn euler_identities(seed: u64, n: usize) -> Result<Vec<Record>, HarnessError> {
    let a = lf::intertwiner_a()?;
    let neg = -&a;
    let mut rng = rng(seed, 1);
    let mut out = Vec::new();
    let mut broken = 0;
    for i in 0..n {
        let s = random_satake(&mut rng);
        let inputs = json!({ "a": strs(&[s.a0.clone(), s.a1.clone(), s.a2.clone()]) });
        let (lhs, rhs) = wedge2_sides(&s, &a)?;
        out.push(Record::exact(format!("euler.wedge2.{i:02}"), anchors::WEDGE2, inputs, coeffs(&lhs), coeffs(&rhs)));
        if wedge2_sides(&s, &neg)?.0 != rhs {
            broken += 1;
        }
    }
    out.push(Record::exact(
        "euler.wedge2.negative-control",
        anchors::WEDGE2_NEG,
        json!({ "seed": seed, "samples": n, "trace_A": (-a.trace()).to_string() }),
        broken,
        n,
    ));
    for i in 0..n {
        // a1 = r^2, a2 = t^2, a0 = 1/(r t)
        let r = sample::nonzero_rational(&mut rng, 9);
        let t = sample::nonzero_rational(&mut rng, 9);
        let s = SatakeGU::new((&r * &t).recip(), &r * &r, &t * &t)?;
        let lhs = RecipPoly::new(vec![q(1), q(0), q(-1)]).mul(&lf::std_factor_gu_inert(&s)?);
        let rhs = lf::gsp4_std_recip(&s.a0, &s.a1, &s.a2)?.in_z_squared();
        let inputs = json!({ "a": strs(&[s.a0.clone(), s.a1.clone(), s.a2.clone()]) });
        out.push(Record::exact(format!("euler.std.{i:02}"), anchors::STD, inputs, coeffs(&lhs), coeffs(&rhs)));
    }
    Ok(out)
}

// ---- GU(2,2) and V6 ----

fn random_product<R: Rng>(rng: &mut R, alg: QuadAlgebra) -> Result<GUElem, HarnessError> {
    let len = rng.gen_range(1..=4);
    let mut g = GUElem::identity(alg);
    for _ in 0..len {
        g = g.mul(&sample::generator(rng, alg, 3).to_gu()?);
    }
    Ok(g)
}

/// Integral positive definite `T` with entries bounded by `b`.
pub fn random_pd_herm<R: Rng>(rng: &mut R, alg: QuadAlgebra, b: i64) -> HermMat2 {
    loop {
        let t = HermMat2::new(q(rng.gen_range(1..=b)), q(rng.gen_range(1..=b)), sample::eelem(rng, alg, b));
        if t.is_positive_definite() {
            return t;
        }
    }
}

pub fn group(seed: u64, d: u64) -> Result<Vec<Record>, HarnessError> {
    let alg = field(d)?;
    let mut rng = rng(seed, 2);
    let inputs = |n: usize| json!({ "seed": seed, "algebra": alg.to_string(), "samples": n });
    let mut out = Vec::new();

    let mut t = Tally::new();
    for _ in 0..1000 {
        let v = sample::v6(&mut rng, alg, 5);
        let g = random_product(&mut rng, alg)?;
        let vg = v.act(&g)?;
        t.push(vg.qform() == v.qform(), || format!("v = {v}, g = {}", g.to_json()));
    }
    out.push(t.record("group.q-invariance", anchors::Q_INV, inputs(1000)));

    let mut t = Tally::new();
    while t.n < 100 {
        let v = sample::v6(&mut rng, alg, 5);
        let v0 = sample::v6(&mut rng, alg, 3);
        if v0.qform().is_zero() {
            continue;
        }
        let g0 = gu::v6_as_group_element(&v0)?;
        let lhs = v.iota().act(&g0)?;
        let rhs = v.reflect(&v0)?.neg();
        t.push(lhs == rhs, || format!("v = {v}, v0 = {v0}"));
    }
    out.push(t.record("group.iota-reflection", anchors::IOTA, inputs(100)));

    let mut t = Tally::new();
    for _ in 0..50 {
        let tt = random_pd_herm(&mut rng, alg, 4);
        let f = loop {
            let f = [sample::eelem(&mut rng, alg, 3), sample::eelem(&mut rng, alg, 3)];
            if !(f[0].is_zero() && f[1].is_zero()) {
                break f;
            }
        };
        let lambda = sample::unit_free_eelem(&mut rng, alg, 3);
        let us = [sample::traceless_against(&mut rng, &tt, 3), sample::traceless_against(&mut rng, &tt, 3)];
        let g = gu::d_e_sample(&tt, &f, &lambda, &us)?;
        let ft = gu::f_t_vector(&f, &tt.to_mat());
        let scaled = |v: &[EElem], l: &EElem| v.iter().map(|x| l * x).collect::<Vec<_>>();
        let ok = gu::stabilizes(&g, &tt)?.by_action
            && gu::act_on_f_plane(&f, &g) == Some(scaled(&f, &lambda))
            && gu::act_on_f_plane(&ft, &g) == Some(scaled(&ft, &lambda.conj()));
        t.push(ok, || format!("T = {tt}, f = [{}, {}], lambda = {lambda}", f[0], f[1]));
    }
    out.push(t.record("group.line-stabilizer", anchors::D_E, inputs(50)));
    Ok(out)
}

fn rational_v6<R: Rng>(rng: &mut R, alg: QuadAlgebra) -> V6Vec {
    let h = HermMat2::new(sample::rational(rng, 5), sample::rational(rng, 5), sample::rational_eelem(rng, alg, 5));
    V6Vec::new(sample::rational(rng, 5), h, sample::rational(rng, 5))
}

/// The four `r_*` identities over `Q(i)`; 3 and 4 are checked exactly.
pub fn rstar(seed: u64) -> Result<Vec<Record>, HarnessError> {
    let e = QuadAlgebra::gaussian();
    let mut rng = rng(seed, 3);
    let inputs = |n: usize| json!({ "seed": seed, "algebra": e.to_string(), "samples": n });
    let mut out = Vec::new();

    let mut t = Tally::new();
    for _ in 0..1000 {
        let v = rational_v6(&mut rng, e);
        let (l, r) = hm::rstar_part1(&v)?;
        t.push(l == r, || v.to_string());
    }
    out.push(t.record("rstar.1", anchors::RSTAR_1, inputs(1000)));

    let worst = (0..100)
        .map(|_| hm::rstar_part2_defect(&hm::random_k_infinity(&mut rng)))
        .fold(0.0, f64::max);
    out.push(Record::close("rstar.2", anchors::RSTAR_2, inputs(100), worst, 0.0, 1e-10));

    let (mut t3, mut t4) = (Tally::new(), Tally::new());
    for _ in 0..100 {
        let g = hm::random_positive_gu(&mut rng, e, 3);
        let (l, r) = hm::rstar_part3(&g)?;
        t3.push(l == r, || g.to_json().to_string());
        let v = rational_v6(&mut rng, e);
        let (l, r) = hm::rstar_part4(&v, &g)?;
        t4.push(l == r, || format!("v = {v}, g = {}", g.to_json()));
    }
    out.push(t3.record("rstar.3", anchors::RSTAR_3, inputs(100)));
    out.push(t4.record("rstar.4", anchors::RSTAR_4, inputs(100)));
    Ok(out)
}

/// Translations used for the permutation checks, over `Q(i)`.
fn translations(e: QuadAlgebra) -> Vec<(&'static str, HermMat2)> {
    vec![
        ("diag(1,0)", HermMat2::int(e, 1, 0, (0, 0))),
        ("diag(0,1)", HermMat2::int(e, 0, 1, (0, 0))),
        ("offdiag(1)", HermMat2::int(e, 0, 0, (1, 0))),
        ("offdiag(i)", HermMat2::int(e, 0, 0, (0, 1))),
        ("[[1,1+i],[.,-1]]", HermMat2::int(e, 1, -1, (1, 1))),
    ]
}

/// Height bound for the permutation checks; images reach several times this.
pub const PERMUTATION_BOUND: i64 = 4;

pub fn generic_z() -> UpperHalfPoint {
    let c = Complex64::new;
    let x = CMat::from_rows(vec![vec![c(0.1, 0.0), c(0.2, 0.1)], vec![c(0.2, -0.1), c(-0.3, 0.0)]]);
    let y = CMat::from_rows(vec![vec![c(1.2, 0.0), c(0.3, -0.2)], vec![c(0.3, 0.2), c(0.9, 0.0)]]);
    UpperHalfPoint::from_xy(&x, &y).expect("Y is positive definite")
}

/// `P_T` for `E = Q(i)`, `T = I`, `r = 10` at `iI` and a generic point.
pub fn modularity(bound: i64) -> Result<Vec<Record>, HarnessError> {
    let e = QuadAlgebra::gaussian();
    let t = HermMat2::identity(e);
    let r = 10;
    let mut out = Vec::new();
    for (name, u) in translations(e) {
        let g = Generator::UpperUnipotent(u).to_gu()?;
        let ok = hm::permutation_check(&t, &g, PERMUTATION_BOUND)?;
        let inputs = json!({ "T": "I", "translation": name, "bound": PERMUTATION_BOUND });
        out.push(Record::exact(format!("modularity.permutation.{name}"), anchors::PERMUTATION, inputs, ok, true));
    }
    let unit_levi = MatE::from_rows(vec![vec![e.one(), e.int(0, 1)], vec![e.zero(), e.one()]]);
    let gammas = [
        ("inversion", gu::inversion(e)),
        ("levi[[1,i],[0,1]]", Generator::Levi { m: unit_levi, nu: q(1) }.to_gu()?),
        ("levi diag(i,-i)", Generator::Levi { m: MatE::diag(&[e.int(0, 1), e.int(0, -1)]), nu: q(1) }.to_gu()?),
    ];
    for (zn, z) in [("iI", UpperHalfPoint::base()), ("generic", generic_z())] {
        for (gn, g) in &gammas {
            let rep = hm::modularity_check(&t, r, &z, g, bound)?;
            let inputs = json!({ "T": "I", "r": r, "Z": zn, "gamma": gn, "bound": bound });
            out.push(Record::close_c(
                format!("modularity.{gn}.{zn}"),
                anchors::MODULARITY,
                inputs.clone(),
                rep.lhs,
                rep.rhs,
                rep.tolerance,
            ));
            let defect = hm::equivariance_defect(&t, g, &z, PERMUTATION_BOUND)?;
            out.push(Record::close(format!("modularity.equivariance.{gn}.{zn}"), anchors::EQUIVARIANCE, inputs, defect, 0.0, 1e-10));
        }
        let v8 = hm::eval_pt(&t, r, &z, 8)?;
        let v12 = hm::eval_pt(&t, r, &z, 12)?;
        let inputs = json!({ "T": "I", "r": r, "Z": zn, "bounds": [8, 12] });
        out.push(
            Record::close_c(format!("modularity.self-convergence.{zn}"), anchors::CONVERGENCE, inputs, v8.value, v12.value, v8.error)
                .with_detail(json!({ "terms": [v8.terms, v12.terms] })),
        );
    }
    Ok(out)
}

// ---- appendix: quaternion ring and lattices ----

fn nonsingular_herm<R: Rng>(rng: &mut R, alg: QuadAlgebra, b: i64) -> HermMat2 {
    loop {
        let t = sample::herm(rng, alg, b);
        if !t.det().is_zero() {
            return t;
        }
    }
}

fn nonzero_pair<R: Rng>(rng: &mut R, alg: QuadAlgebra, b: i64) -> [EElem; 2] {
    loop {
        let f = [sample::eelem(rng, alg, b), sample::eelem(rng, alg, b)];
        if !(f[0].is_zero() && f[1].is_zero()) {
            return f;
        }
    }
}

/// Forms for the lattice grid: a few fixed ones plus `extra`.
fn lattice_forms(alg: QuadAlgebra, extra: Option<HermMat2>) -> Vec<(String, HermMat2)> {
    let mut ts = vec![
        ("I".to_string(), HermMat2::identity(alg)),
        ("diag(1,2)".to_string(), HermMat2::int(alg, 1, 2, (0, 0))),
        ("diag(1,3)".to_string(), HermMat2::int(alg, 1, 3, (0, 0))),
        ("[[2,1+w],[.,3]]".to_string(), HermMat2::int(alg, 2, 3, (1, 1))),
    ];
    if let Some(t) = extra {
        ts.push((t.to_string(), t));
    }
    ts
}

/// Every `m` with entries `a + b w`, `a, b` in `{-1, 0, 1}`, and nonzero rational det.
pub fn small_m_grid(alg: QuadAlgebra) -> Vec<MatE> {
    let vals: Vec<EElem> = (-1..=1).flat_map(|a| (-1..=1).map(move |b| alg.int(a, b))).collect();
    let mut out = Vec::new();
    for x in &vals {
        for y in &vals {
            for z in &vals {
                for w in &vals {
                    let m = MatE::from_rows(vec![vec![x.clone(), y.clone()], vec![z.clone(), w.clone()]]);
                    if m.det().as_rational().is_some_and(|d| !d.is_zero()) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

pub fn ait(seed: u64, d: u64, t_text: Option<&str>) -> Result<Vec<Record>, HarnessError> {
    let alg = field(d)?;
    let user_t = t_text.map(|s| parse_herm(s, alg)).transpose()?;
    let mut rng = rng(seed, 4);
    let inputs = |n: usize| json!({ "seed": seed, "algebra": alg.to_string(), "samples": n });
    let mut out = Vec::new();

    let mut t = Tally::new();
    for _ in 0..50 {
        let tt = nonsingular_herm(&mut rng, alg, 5);
        let j = j2(&alg.one()).scale(&sample::unit_free_eelem(&mut rng, alg, 3));
        let data = HermitianData::new(tt, j)?;
        let got = data.s_squared()?;
        t.push(got == data.predicted_s_squared(), || format!("T = {}, Pf = {}", data.t, data.pfaffian()));
    }
    out.push(t.record("ait.s-squared", anchors::S_SQUARED, inputs(50)));
    if let Some(tt) = &user_t {
        let data = HermitianData::standard(tt.clone())?;
        let inputs = json!({ "T": tt.to_string(), "J": "J2" });
        out.push(Record::exact("ait.s-squared.given-T", anchors::S_SQUARED, inputs, data.s_squared()?.to_string(), data.predicted_s_squared().to_string()));
    }

    let (mut tn, mut tc) = (Tally::new(), Tally::new());
    for _ in 0..10 {
        let data = HermitianData::standard(nonsingular_herm(&mut rng, alg, 4))?;
        let ring = data.ring()?;
        for _ in 0..100 {
            let a = ring.elem(sample::eelem(&mut rng, alg, 5), sample::eelem(&mut rng, alg, 5));
            let b = ring.elem(sample::eelem(&mut rng, alg, 5), sample::eelem(&mut rng, alg, 5));
            let ok = ring.norm(&ring.mul(&a, &b)) == ring.norm(&a) * ring.norm(&b);
            tn.push(ok, || format!("S^2 = {}, a = {} + {} S, b = {} + {} S", ring.s, a.x, a.y, b.x, b.y));
            let ok = ring.norm_by_product(&a) == ring.elem(alg.rational(ring.norm(&a)), alg.zero());
            tc.push(ok, || format!("S^2 = {}, a = {} + {} S", ring.s, a.x, a.y));
        }
    }
    out.push(tn.record("ait.quaternion-norm", anchors::QUAT_NORM, inputs(1000)));
    out.push(tc.record("ait.quaternion-conjugate", anchors::QUAT_CONJ, inputs(1000)));

    let grid = small_m_grid(alg);
    for (name, tt) in lattice_forms(alg, user_t.clone()) {
        let data = HermitianData::standard(tt)?;
        for at in [Integrality::Global, Integrality::At(2)] {
            let mut t = Tally::new();
            let mut stable = 0;
            for m in &grid {
                let crit = ait::lattice_stable(m, &data, at)?;
                let direct = ait::lattice_stable_direct(m, &data, at)?;
                stable += usize::from(direct);
                t.push(crit == direct, || m.to_string());
            }
            let where_ = match at {
                Integrality::Global => "global".to_string(),
                Integrality::At(p) => format!("p={p}"),
            };
            let inputs = json!({ "T": name, "J": "J2", "integrality": where_, "grid": "entries a+b*w, |a|,|b| <= 1" });
            out.push(t.record(&format!("ait.lattice.{name}.{where_}"), anchors::LATTICE, inputs).with_detail(json!({ "stable": stable, "grid_size": grid.len() })));
        }
    }

    let (mut tg, mut tp) = (Tally::new(), Tally::new());
    for _ in 0..100 {
        let tt = nonsingular_herm(&mut rng, alg, 5);
        let f = nonzero_pair(&mut rng, alg, 4);
        let tm = tt.to_mat();
        let ff = ait::herm_pairing(&f, &f, &tm);
        let want = MatE::diag(&[ff.clone(), &ff * &alg.rational(tt.det())]);
        tg.push(ait::f_t_gram(&f, &tt) == want, || format!("T = {tt}, f = [{}, {}]", f[0], f[1]));
        let data = HermitianData::standard(tt.clone())?;
        let ft = ait::f_t_vector(&f, &tm);
        let ok = [[alg.one(), alg.zero()], [alg.zero(), alg.one()]]
            .iter()
            .all(|delta| ait::canonical_pairing(&ft, delta) == -ait::canonical_pairing(&f, &data.s_act(delta)).conj());
        tp.push(ok, || format!("T = {tt}, f = [{}, {}]", f[0], f[1]));
    }
    out.push(tg.record("ait.f_T-gram", anchors::GRAM, inputs(100)));
    out.push(tp.record("ait.f_T-pairing", anchors::F_T_PAIRING, inputs(100)));
    Ok(out)
}

// ---- p-adic ----

fn window_json(w: &PrecisionWindow) -> Value {
    json!([w.a, w.b])
}

fn place_name(place: &LocalPlace) -> String {
    format!("p{}-{}", place.p, place.splitting)
}

fn lower_bounds(windows: &[PrecisionWindow]) -> Vec<PrecisionWindow> {
    if windows.is_empty() {
        vec![PrecisionWindow::new(0, 1)]
    } else {
        windows.to_vec()
    }
}

/// Unipotent identity, window stability, `alpha_chi` and the `f m` lemma at one place.
/// `windows` are lower bounds joined with each case's own minimum; an empty list means
/// the minimum alone.
pub fn padic(place: &LocalPlace, windows: &[PrecisionWindow], seed: u64) -> Result<Vec<Record>, HarnessError> {
    let mut out = padic_im(place, windows, seed)?;
    out.extend(padic_alpha_chi(place, windows, seed)?);
    out.extend(padic_fm(place)?);
    Ok(out)
}

/// Unipotent identity and window stability on the default `(m, T)` grid, plus the
/// measure of `U_m` where `val(m) = 0`.
pub fn padic_im(place: &LocalPlace, windows: &[PrecisionWindow], seed: u64) -> Result<Vec<Record>, HarnessError> {
    let p = place.p;
    let pn = place_name(place);
    let ts = pv::default_t_grid(place);
    let mut out = Vec::new();
    for (mn, m) in pv::default_m_grid(place, seed, 5) {
        let need = pv::required_window(&m, p)?;
        for low in &lower_bounds(windows) {
            let w = need.join(low);
            let wn = format!("w{},{}", w.a, w.b);
            for (tn, t) in &ts {
                let (v, v2) = pv::charsum_im_pair(t, &m, place, w)?;
                let rhs = pv::im_rhs(t, &m, place)?;
                let inputs = json!({ "place": place.to_string(), "m": mn, "T": tn, "window": window_json(&w) });
                out.push(
                    Record::close_c(format!("padic.{pn}.Im.{mn}.{tn}.{wn}"), anchors::IM, inputs.clone(), v, cq(&rhs), pv::TOL)
                        .with_detail(json!({ "rhs_exact": rhs.to_string() })),
                );
                out.push(Record::close_c(format!("padic.{pn}.window.{mn}.{tn}.{wn}"), anchors::WINDOW, inputs, v, v2, pv::TOL));
            }
            if pv::mat_val(&m, p) == Some(0) {
                let lhs = pv::measure_um(&m, place, w)?;
                let rhs = pv::measure_rhs(&m, place)?;
                let inputs = json!({ "place": place.to_string(), "m": mn, "window": window_json(&w) });
                out.push(Record::exact(format!("padic.{pn}.measure.{mn}.{wn}"), anchors::MEASURE, inputs, lhs.to_string(), rhs.to_string()));
            }
        }
    }
    Ok(out)
}

/// `alpha_chi` on the default grid for `lambda` in `p^-1, 1, p, p^2`, using the first
/// lower bound in `windows`.
pub fn padic_alpha_chi(place: &LocalPlace, windows: &[PrecisionWindow], seed: u64) -> Result<Vec<Record>, HarnessError> {
    let p = place.p;
    let pn = place_name(place);
    let low = lower_bounds(windows)[0];
    let mut out = Vec::new();
    for (mn, m) in pv::default_m_grid(place, seed, 5) {
        for (tn, t) in &pv::default_t_grid(place) {
            for (ln, lambda) in [("p^-1", qpow(p, -1)), ("1", q(1)), ("p", qpow(p, 1)), ("p^2", qpow(p, 2))] {
                let k = val_p(&lambda, p).expect("nonzero");
                let w = PrecisionWindow::new((-k).max(0) as u32, k.max(0) as u32).join(&low);
                let lhs = pv::alpha_chi_local(t, &lambda, &m, place, Some(w))?;
                let rhs = pv::alpha_chi_rhs(t, &lambda, &m, place)?;
                let inputs = json!({ "place": place.to_string(), "m": mn, "T": tn, "lambda": ln, "window": window_json(&w) });
                let rec = Record::close_c(format!("padic.{pn}.alpha_chi.{mn}.{tn}.{ln}"), anchors::ALPHA_CHI, inputs, lhs.value, cq(&rhs), pv::TOL);
                let reconstructed = lhs.reconstruct().map(|x| x.to_string());
                out.push(rec.with_detail(json!({ "rhs_exact": rhs.to_string(), "lhs_reconstructed": reconstructed })));
            }
        }
    }
    Ok(out)
}

/// The `f m` lemma over `k diag(p^i, p^j) k'`, `|i|, |j| <= 2`, for each default `T`
/// and each `f` in `(1,0), (0,1), (1,1)` meeting its hypothesis.
pub fn padic_fm(place: &LocalPlace) -> Result<Vec<Record>, HarnessError> {
    let pn = place_name(place);
    let e = place.algebra();
    let mut out = Vec::new();
    for (tn, t) in &pv::default_t_grid(place) {
        for (fname, f) in [("(1,0)", [e.one(), e.zero()]), ("(0,1)", [e.zero(), e.one()]), ("(1,1)", [e.one(), e.one()])] {
            let rep = match pv::check_fm_lemma(t, &f, place, 2) {
                Err(PadicError::BadF) => continue,
                r => r?,
            };
            let inputs = json!({ "place": place.to_string(), "T": tn, "f": fname, "exponents": "|i|,|j| <= 2" });
            out.push(
                Record::exact(format!("padic.{pn}.fm.{tn}.{fname}"), anchors::FM, inputs, rep.counterexamples.len(), 0)
                    .with_detail(json!({ "checked": rep.checked, "hypotheses_met": rep.hypotheses_met })),
            );
        }
    }
    Ok(out)
}

// ---- archimedean ----

fn rel_detail(value: f64, reference: f64, quad_error: Option<f64>) -> Value {
    json!({ "value": value, "reference": reference, "rel_err": (value - reference).abs() / reference.abs(), "quad_error": quad_error })
}

/// `which` selects the checks; `grid` is the `s` grid for `gamma`/`assembly` and the
/// scalings `Y = y I` for `fourier`.
pub fn arch(which: ArchWhich, r: u32, grid: &[f64], spec: &QuadratureSpec, seed: u64) -> Result<Vec<Record>, HarnessError> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut out = Vec::new();
    match which {
        ArchWhich::Norm => {
            let mut rng = rng(seed, 5);
            let mut worst = 0.0f64;
            for _ in 0..100 {
                let g = arch::random_real_gu(&mut rng);
                let f = [c(rng.gen_range(-1.0..1.0)) + Complex64::i() * rng.gen_range(-1.0..1.0), c(rng.gen_range(-1.0..1.0))];
                worst = worst.max(arch::section_norm_identity(&g, f)?.rel_err());
            }
            out.push(Record::close("arch.norm", anchors::SECTION_NORM, json!({ "seed": seed, "samples": 100 }), worst, 0.0, 1e-10));
        }
        ArchWhich::Fourier => {
            let t = CMat::identity(2, &c(1.0));
            for &y in grid {
                let ym = CMat::identity(2, &c(y));
                let v = arch::fourier_unipotent_integral(&t, &ym, r, spec)?;
                let cf = arch::fourier_closed_form(&t, &arch::levi_for(&ym, 1.0), 1.0, r)?;
                let inputs = json!({ "T": "I", "Y": format!("{y} I"), "r": r });
                let rel = (v.value - cf).norm() / cf.norm();
                out.push(
                    Record::close_c(format!("arch.fourier.y={y}"), anchors::FOURIER, inputs, v.value, cf, 1e-2 * cf.norm())
                        .with_detail(json!({ "value": [v.value.re, v.value.im], "reference": [cf.re, cf.im], "rel_err": rel, "quad_error": v.error })),
                );
            }
        }
        ArchWhich::Gamma | ArchWhich::Assembly => {
            let mut rows = Vec::new();
            for &s in grid {
                let tr = arch::gamma_triple_integral(s, r, 1.0, spec)?;
                let cf = arch::gamma_triple_closed(s, r, 1.0);
                let value = arch::gamma_r(6.0 * s - 2.0) * arch::gamma_c(3.0 * s) * tr.value;
                rows.push((s, tr, cf, value, arch::jinfty_reference(s, r)));
            }
            let ratios = rows.iter().map(|x| x.3 / x.4);
            let spread = if rows.len() >= 2 { arch::spread(ratios.clone()) } else { 0.0 };
            let mean = ratios.clone().sum::<f64>() / rows.len().max(1) as f64;
            for (s, tr, cf, value, reference) in &rows {
                let inputs = json!({ "s": s, "r": r, "det_T": 1.0 });
                out.push(if which == ArchWhich::Gamma {
                    Record::close(format!("arch.gamma.s={s}"), anchors::GAMMA_TRIPLE, inputs, tr.value, *cf, 1e-6 * cf.abs())
                        .with_detail(rel_detail(tr.value, *cf, Some(tr.error)))
                } else {
                    let ratio = value / reference;
                    Record::close(format!("arch.assembly.s={s}"), anchors::ASSEMBLY, inputs, ratio, mean, 1e-3 * mean.abs())
                        .with_detail(json!({ "value": value, "reference": reference, "rel_err": (ratio - mean).abs() / mean.abs() }))
                });
            }
            let inputs = json!({ "s_grid": grid, "r": r, "det_T": 1.0 });
            out.push(
                Record::close(format!("arch.{which}.ratio-spread"), anchors::ASSEMBLY, inputs, spread, 0.0, 1e-3)
                    .with_detail(json!({ "mean_ratio": mean })),
            );
        }
    }
    Ok(out)
}

// ---- data subcommands ----

pub fn reps(cfg: &RunConfig) -> Result<Value, HarnessError> {
    let alg = field(cfg.d)?;
    let t = parse_herm(&cfg.t, alg)?;
    let bound = cfg.bound.unwrap_or(3);
    let sols = hm::enumerate_reps(&t, bound)?;
    Ok(json!({
        "algebra": alg.to_string(), "T": t.to_string(), "bound": bound, "count": sols.len(),
        "reps": sols.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
    }))
}

pub fn upper_half_point(z: &Option<[[[f64; 2]; 2]; 2]>) -> Result<UpperHalfPoint, HarnessError> {
    let Some(z) = z else { return Ok(UpperHalfPoint::base()) };
    let m = CMat::from_fn(2, 2, |i, j| Complex64::new(z[i][j][0], z[i][j][1]));
    Ok(UpperHalfPoint::new(m)?)
}

pub fn eval_pt(cfg: &RunConfig) -> Result<Value, HarnessError> {
    let alg = field(cfg.d)?;
    let t = parse_herm(&cfg.t, alg)?;
    let r = cfg.r.unwrap_or(10);
    let bound = cfg.bound.unwrap_or(8);
    let z = upper_half_point(&cfg.z)?;
    let v = hm::eval_pt(&t, r, &z, bound)?;
    let mut out = v.to_json();
    out["inputs"] = json!({ "algebra": alg.to_string(), "T": t.to_string(), "r": r, "bound": bound, "Z": cfg.z });
    Ok(out)
}
