//! Finite-quotient kernels. `u = p^{-a} U` with `U` in `H2(O_E) / p^{a+b}`, and
//! `u m` integral iff `U (p^e m) = 0 mod p^{a+e}` where `p^e m` is integral.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{mat_val, PrecisionWindow};
use crate::sum::Neumaier;
use crate::exact_rings::rational::{qpow, residue, Q};
use crate::exact_rings::{EElem, HermMat2, MatE};

/// `O_E / p^k` in the basis `{1, w}`, `w^2 = t w - n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueRing {
    pub modulus: i64,
    t: i64,
    n: i64,
}

type Res = (i64, i64);

impl ResidueRing {
    pub fn new(modulus: i64, e: &EElem) -> Self {
        let alg = e.algebra();
        ResidueRing { modulus, t: alg.omega_trace(), n: alg.omega_norm() }
    }

    fn red(&self, x: i64) -> i64 {
        x.rem_euclid(self.modulus)
    }

    pub fn reduce(&self, x: &EElem) -> Res {
        let r = |c: &Q| residue(c, self.modulus).expect("p-integral entry");
        (r(x.a()), r(x.b()))
    }

    pub fn mul(&self, x: Res, y: Res) -> Res {
        let bb = self.red(x.1 * y.1);
        (
            self.red(x.0 * y.0 - self.n * bb),
            self.red(x.0 * y.1 + x.1 * y.0 + self.t * bb),
        )
    }

    pub fn scalar(&self, k: i64, x: Res) -> Res {
        (self.red(k * x.0), self.red(k * x.1))
    }

    pub fn add(&self, x: Res, y: Res) -> Res {
        (self.red(x.0 + y.0), self.red(x.1 + y.1))
    }

    pub fn neg(&self, x: Res) -> Res {
        (self.red(-x.0), self.red(-x.1))
    }

    pub fn conj(&self, x: Res) -> Res {
        (self.red(x.0 + x.1 * self.t), self.red(-x.1))
    }

    pub fn trace(&self, x: Res) -> i64 {
        self.red(2 * x.0 + self.t * x.1)
    }
}

fn ipow(p: u64, k: u32) -> i64 {
    (p as i64).pow(k)
}

struct Setup {
    mod_k: i64,
    cond: ResidueRing,
    chr: ResidueRing,
    m: [Res; 4],
    roots: Vec<Complex64>,
    t00: i64,
    t11: i64,
    t01: Res,
}

fn setup(t: Option<&HermMat2>, m: &MatE, p: u64, w: PrecisionWindow) -> Setup {
    let e = (-mat_val(m, p).unwrap_or(0)).max(0) as u32;
    assert!(e <= w.b, "window b below the denominators of m");
    let mod_k = ipow(p, w.a + w.b);
    let mod_n = ipow(p, w.a + e);
    let mod_a = ipow(p, w.a);
    let one = m.get(0, 0).algebra().one();
    let cond = ResidueRing::new(mod_n, &one);
    let chr = ResidueRing::new(mod_a, &one);
    let scaled = m.scale(&one.scale(&qpow(p, e as i64)));
    let mr = std::array::from_fn(|i| cond.reduce(scaled.get(i / 2, i % 2)));
    let roots = (0..mod_a)
        .map(|c| Complex64::from_polar(1.0, TAU * c as f64 / mod_a as f64))
        .collect();
    let (t00, t11, t01) = match t {
        Some(t) => (
            residue(t.x(), mod_a).expect("integral T"),
            residue(t.y(), mod_a).expect("integral T"),
            chr.reduce(t.w()),
        ),
        None => (0, 0, (0, 0)),
    };
    Setup { mod_k, cond, chr, m: mr, roots, t00, t11, t01 }
}

impl Setup {
    /// `k * (r0, r1)` as a map key.
    fn key_scalar(&self, k: i64, r0: Res, r1: Res) -> [i64; 4] {
        let c = &self.cond;
        let (a, b) = (c.scalar(k, r0), c.scalar(k, r1));
        [a.0, a.1, b.0, b.1]
    }

    fn key_elem(&self, w: Res, r0: Res, r1: Res) -> [i64; 4] {
        let c = &self.cond;
        let (a, b) = (c.neg(c.mul(w, r0)), c.neg(c.mul(w, r1)));
        [a.0, a.1, b.0, b.1]
    }
}

fn build_maps<V: Copy + Default + std::ops::AddAssign>(
    s: &Setup,
    wx: impl Fn(i64) -> V,
    wy: impl Fn(i64) -> V,
) -> (HashMap<[i64; 4], V>, HashMap<[i64; 4], V>) {
    let (mut xm, mut ym) = (HashMap::new(), HashMap::new());
    for x in 0..s.mod_k {
        *xm.entry(s.key_scalar(x, s.m[0], s.m[1])).or_default() += wx(x);
        *ym.entry(s.key_scalar(x, s.m[2], s.m[3])).or_default() += wy(x);
    }
    (xm, ym)
}

/// Outer loop over `W`, lexicographic.
fn for_each_w(s: &Setup, mut f: impl FnMut(Res, [i64; 4], [i64; 4])) {
    let c = &s.cond;
    for wa in 0..s.mod_k {
        for wb in 0..s.mod_k {
            let w = (c.red(wa), c.red(wb));
            let wbar = c.conj(w);
            f((wa, wb), s.key_elem(w, s.m[2], s.m[3]), s.key_elem(wbar, s.m[0], s.m[1]));
        }
    }
}

pub(super) fn charsum(t: &HermMat2, m: &MatE, p: u64, w: PrecisionWindow) -> Complex64 {
    let s = setup(Some(t), m, p, w);
    let ma = s.roots.len() as i64;
    let (xm, ym) = build_maps(&s, |x| s.roots[(s.t00 * x).rem_euclid(ma) as usize], |y| {
        s.roots[(s.t11 * y).rem_euclid(ma) as usize]
    });
    let mut acc = Neumaier::default();
    for_each_w(&s, |w, kx, ky| {
        let (Some(xv), Some(yv)) = (xm.get(&kx), ym.get(&ky)) else { return };
        let wr = (w.0.rem_euclid(ma), w.1.rem_euclid(ma));
        let ph = s.chr.trace(s.chr.mul(s.t01, s.chr.conj(wr)));
        acc.add(s.roots[ph as usize] * xv * yv);
    });
    acc.total() * (p as f64).powi(-4 * w.b as i32)
}

/// Number of `U` in `H2(O_E) / p^{a+b}` with `U M = 0 mod p^{a+e}`.
pub(super) fn count(m: &MatE, p: u64, w: PrecisionWindow) -> u128 {
    let s = setup(None, m, p, w);
    let (xm, ym) = build_maps(&s, |_| 1u64, |_| 1u64);
    let mut total = 0u128;
    for_each_w(&s, |_, kx, ky| {
        if let (Some(a), Some(b)) = (xm.get(&kx), ym.get(&ky)) {
            total += *a as u128 * *b as u128;
        }
    });
    total
}

/// `sum_{c in p^{-a} Z_p / p^b Z_p} psi(c) 1[val(c) >= k] p^{-b}`.
pub(super) fn line_sum(p: u64, k: i64, w: PrecisionWindow) -> Complex64 {
    let ma = ipow(p, w.a);
    let total = ipow(p, w.a + w.b);
    let step = ipow(p, (w.a as i64 + k).max(0) as u32);
    let mut acc = Neumaier::default();
    for c in (0..total).step_by(step as usize) {
        acc.add(Complex64::from_polar(1.0, TAU * (c % ma) as f64 / ma as f64));
    }
    acc.total() * (p as f64).powi(-(w.b as i32))
}

/// Direct four-fold enumeration, for cross-checking the joined kernel on small windows.
pub fn charsum_naive(t: &HermMat2, m: &MatE, p: u64, w: PrecisionWindow) -> Complex64 {
    let s = setup(Some(t), m, p, w);
    let c = &s.cond;
    let ch = &s.chr;
    let ma = s.roots.len() as i64;
    let mut acc = Neumaier::default();
    for x in 0..s.mod_k {
        for y in 0..s.mod_k {
            for wa in 0..s.mod_k {
                for wb in 0..s.mod_k {
                    let wv = (c.red(wa), c.red(wb));
                    let wbar = c.conj(wv);
                    let row0 = [
                        c.add(c.scalar(x, s.m[0]), c.mul(wv, s.m[2])),
                        c.add(c.scalar(x, s.m[1]), c.mul(wv, s.m[3])),
                    ];
                    let row1 = [
                        c.add(c.mul(wbar, s.m[0]), c.scalar(y, s.m[2])),
                        c.add(c.mul(wbar, s.m[1]), c.scalar(y, s.m[3])),
                    ];
                    if row0.iter().chain(&row1).any(|r| *r != (0, 0)) {
                        continue;
                    }
                    let wr = (wa.rem_euclid(ma), wb.rem_euclid(ma));
                    let ph = (s.t00 * x + s.t11 * y + ch.trace(ch.mul(s.t01, ch.conj(wr)))).rem_euclid(ma);
                    acc.add(s.roots[ph as usize]);
                }
            }
        }
    }
    acc.total() * (p as f64).powi(-4 * w.b as i32)
}
