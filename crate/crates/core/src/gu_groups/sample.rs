//! Seeded random samples of ring elements, V6 vectors and GSpin6 generators.

use num_traits::Zero;
use rand::Rng;

use super::group::Generator;
use super::v6::V6Vec;
use crate::exact_rings::rational::{q, Q};
use crate::exact_rings::{EElem, HermMat2, MatE, QuadAlgebra};

pub fn small_int<R: Rng>(rng: &mut R, b: i64) -> i64 {
    rng.gen_range(-b..=b)
}

pub fn nonzero_int<R: Rng>(rng: &mut R, b: i64) -> i64 {
    loop {
        let x = small_int(rng, b);
        if x != 0 {
            return x;
        }
    }
}

/// `n / d` with `|n| <= b`, `1 <= d <= b`.
pub fn rational<R: Rng>(rng: &mut R, b: i64) -> Q {
    Q::new(small_int(rng, b).into(), rng.gen_range(1..=b).into())
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, b: i64) -> Q {
    Q::new(nonzero_int(rng, b).into(), rng.gen_range(1..=b).into())
}

pub fn eelem<R: Rng>(rng: &mut R, alg: QuadAlgebra, b: i64) -> EElem {
    alg.int(small_int(rng, b), small_int(rng, b))
}

pub fn rational_eelem<R: Rng>(rng: &mut R, alg: QuadAlgebra, b: i64) -> EElem {
    alg.elem(rational(rng, b), rational(rng, b))
}

/// Nonzero element with nonzero norm.
pub fn unit_free_eelem<R: Rng>(rng: &mut R, alg: QuadAlgebra, b: i64) -> EElem {
    loop {
        let x = eelem(rng, alg, b);
        if !x.norm().is_zero() {
            return x;
        }
    }
}

pub fn herm<R: Rng>(rng: &mut R, alg: QuadAlgebra, b: i64) -> HermMat2 {
    HermMat2::new(q(small_int(rng, b)), q(small_int(rng, b)), eelem(rng, alg, b))
}

pub fn v6<R: Rng>(rng: &mut R, alg: QuadAlgebra, b: i64) -> V6Vec {
    V6Vec::new(q(small_int(rng, b)), herm(rng, alg, b), q(small_int(rng, b)))
}

/// Integral `m` with rational determinant: elementary matrices around
/// `diag(z, conj(z) r)`.
pub fn levi_block<R: Rng>(rng: &mut R, alg: QuadAlgebra, b: i64) -> MatE {
    let one = alg.one();
    let zero = alg.zero();
    let x = eelem(rng, alg, b);
    let y = eelem(rng, alg, b);
    let e1 = MatE::from_rows(vec![vec![one.clone(), x], vec![zero.clone(), one.clone()]]);
    let e2 = MatE::from_rows(vec![vec![one.clone(), zero], vec![y, one]]);
    let z = unit_free_eelem(rng, alg, 2);
    let r = alg.int(nonzero_int(rng, 2), 0);
    let d = MatE::diag(&[z.clone(), &z.conj() * &r]);
    &(&e1 * &d) * &e2
}

pub fn generator<R: Rng>(rng: &mut R, alg: QuadAlgebra, b: i64) -> Generator {
    match rng.gen_range(0..3) {
        0 => Generator::UpperUnipotent(herm(rng, alg, b)),
        1 => Generator::LowerUnipotent(herm(rng, alg, b)),
        _ => Generator::Levi {
            m: levi_block(rng, alg, b),
            nu: q(nonzero_int(rng, 3)),
        },
    }
}

/// Hermitian `u` with `tr(T u) = 0`; needs `T[0][0] != 0`.
pub fn traceless_against<R: Rng>(rng: &mut R, t: &HermMat2, b: i64) -> HermMat2 {
    let alg = t.algebra();
    let y = q(small_int(rng, b));
    let w = eelem(rng, alg, b);
    let partial = HermMat2::new(Q::zero(), y.clone(), w.clone());
    let x = -t.trace_pairing(&partial) / t.x();
    HermMat2::new(x, y, w)
}
