//! Representations of the dual group `(GL1 x GL4) x| Gal(E/F)`.

use num_traits::{Signed, Zero};

use super::LFactorError;
use crate::exact_rings::rational::{q, Q};
use crate::exact_rings::QMat;

/// Lexicographic basis `e_i ^ e_j`, `i < j`, of the exterior square of a 4-space.
pub const WEDGE2_BASIS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Antidiagonal `J4 = [[0,0,0,1],[0,0,1,0],[0,-1,0,0],[-1,0,0,0]]` of the dual-group side.
pub fn j4_antidiagonal() -> QMat {
    QMat::from_fn(4, 4, |i, j| match (i, j) {
        (0, 3) | (1, 2) => q(1),
        (2, 1) | (3, 0) => q(-1),
        _ => q(0),
    })
}

/// Matrix of `lambda * wedge^2(g)` in [`WEDGE2_BASIS`] (second compound matrix).
pub fn wedge2_rep(lambda: &Q, g: &QMat) -> QMat {
    assert!(g.rows() == 4 && g.cols() == 4, "wedge2_rep needs a 4x4 matrix");
    QMat::from_fn(6, 6, |r, c| {
        let (i, j) = WEDGE2_BASIS[r];
        let (k, l) = WEDGE2_BASIS[c];
        let minor = g.get(i, k).clone() * g.get(j, l).clone() - g.get(i, l).clone() * g.get(j, k).clone();
        lambda * minor
    })
}

/// The Galois action `(lambda, g) -> (lambda det g, J tg^{-1} J^{-1})`.
pub fn theta(lambda: &Q, g: &QMat) -> Result<(Q, QMat), LFactorError> {
    let j = j4_antidiagonal();
    let ginv = g.inverse().ok_or(LFactorError::Singular)?;
    let jinv = j.inverse().expect("J4 is invertible");
    Ok((lambda * g.det(), &(&j * &ginv.transpose()) * &jinv))
}

fn elementary(i: usize, j: usize, t: i64) -> QMat {
    let mut m = QMat::identity(4, &q(1));
    m.set(i, j, q(t));
    m
}

/// Generating set of `GL1 x GL4` used to pin down the intertwiner.
fn generators() -> Vec<(Q, QMat)> {
    let mut out = vec![
        (q(2), QMat::identity(4, &q(1))),
        (q(1), QMat::diag(&[q(2), q(3), q(5), q(7)])),
    ];
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                out.push((q(1), elementary(i, j, 1)));
            }
        }
    }
    out
}

/// `rho(x) A - A rho(theta x)`.
pub fn intertwiner_residual(a: &QMat, lambda: &Q, g: &QMat) -> Result<QMat, LFactorError> {
    let (l2, g2) = theta(lambda, g)?;
    Ok(&(&wedge2_rep(lambda, g) * a) - &(a * &wedge2_rep(&l2, &g2)))
}

fn rational_sqrt(c: &Q) -> Option<Q> {
    if !c.is_positive() {
        return None;
    }
    let (n, d) = (c.numer().sqrt(), c.denom().sqrt());
    (&n * &n == *c.numer() && &d * &d == *c.denom()).then(|| Q::new(n, d))
}

/// The involution `A` with `rho(x) A = A rho(theta x)`, normalized by `A^2 = I` and
/// `tr A > 0`. Solved as a 36-unknown linear system over the generators.
pub fn intertwiner_a() -> Result<QMat, LFactorError> {
    let gens = generators();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (lambda, g) in &gens {
        let rho = wedge2_rep(lambda, g);
        let (l2, g2) = theta(lambda, g)?;
        let rho2 = wedge2_rep(&l2, &g2);
        for i in 0..6 {
            for j in 0..6 {
                let mut eq = vec![q(0); 36];
                for k in 0..6 {
                    eq[k * 6 + j] += rho.get(i, k);
                    eq[i * 6 + k] -= rho2.get(k, j);
                }
                rows.push(eq);
            }
        }
    }
    let sys = QMat::from_rows(rows);
    let ns = sys.nullspace();
    if ns.len() != 1 {
        return Err(LFactorError::IntertwinerNotUnique(ns.len()));
    }
    let a0 = QMat::new(6, 6, ns[0].clone());
    let c = (&a0 * &a0).as_scalar().ok_or(LFactorError::IntertwinerNotInvolution)?;
    let s = rational_sqrt(&c).ok_or(LFactorError::IntertwinerNotInvolution)?;
    let mut a = a0.scale(&s.recip());
    let tr = a.trace();
    if tr.is_zero() {
        return Err(LFactorError::IntertwinerNotInvolution);
    }
    if tr.is_negative() {
        a = -&a;
    }
    Ok(a)
}
