//! Local Euler factors for GU(2,2) at inert places and for GSpin6, built from
//! dual-group representations, together with the reference GSp4 factors.

mod poly;
mod reps;

pub use poly::{det_one_minus, RecipPoly};
pub use reps::{intertwiner_a, intertwiner_residual, j4_antidiagonal, theta, wedge2_rep, WEDGE2_BASIS};

use num_traits::{One, Zero};

use crate::exact_rings::rational::{q, Q};
use crate::exact_rings::QMat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LFactorError {
    #[error("Satake parameters must be nonzero")]
    ZeroParameter,
    #[error("standard factor needs b0^2 b1 b2 = 1, got {0}")]
    CentralCharNotTrivial(String),
    #[error("intertwiner solution space has dimension {0}, expected 1")]
    IntertwinerNotUnique(usize),
    #[error("intertwiner cannot be normalized to an involution with nonzero trace")]
    IntertwinerNotInvolution,
    #[error("singular matrix")]
    Singular,
    #[error("expected {expected} parameters, got {got}")]
    Arity { expected: usize, got: usize },
}

/// Values `alpha_0(p), alpha_1(p), alpha_2(p)` of an unramified character of the torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatakeGU {
    pub a0: Q,
    pub a1: Q,
    pub a2: Q,
}

impl SatakeGU {
    pub fn new(a0: Q, a1: Q, a2: Q) -> Result<Self, LFactorError> {
        if a0.is_zero() || a1.is_zero() || a2.is_zero() {
            return Err(LFactorError::ZeroParameter);
        }
        Ok(SatakeGU { a0, a1, a2 })
    }

    pub fn from_slice(p: &[Q]) -> Result<Self, LFactorError> {
        match p {
            [a0, a1, a2] => SatakeGU::new(a0.clone(), a1.clone(), a2.clone()),
            _ => Err(LFactorError::Arity { expected: 3, got: p.len() }),
        }
    }

    /// Central character at `p`: `a0^2 a1 a2`.
    pub fn central(&self) -> Q {
        &self.a0 * &self.a0 * &self.a1 * &self.a2
    }

    /// Torus part `diag(a1, a2, 1, 1)` of the Frobenius class.
    fn torus(&self) -> QMat {
        QMat::diag(&[self.a1.clone(), self.a2.clone(), q(1), q(1)])
    }
}

/// Satake data of GSpin6: torus values at `t_A..t_D` (inert) or `t_A..t_F` (split).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatakeSpin6 {
    Inert([Q; 4]),
    Split([Q; 6]),
}

impl SatakeSpin6 {
    pub fn from_slice(p: &[Q]) -> Result<Self, LFactorError> {
        if p.iter().any(Zero::is_zero) {
            return Err(LFactorError::ZeroParameter);
        }
        match p.len() {
            4 => Ok(SatakeSpin6::Inert([p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()])),
            6 => Ok(SatakeSpin6::Split(std::array::from_fn(|i| p[i].clone()))),
            n => Err(LFactorError::Arity { expected: 4, got: n }),
        }
    }

    /// Consistency conditions `vA vD = vB vC = 1` (and `vE vF = 1` when split) coming
    /// from `t_A t_D = t_B t_C = p` being central; violations are reported, not rejected.
    pub fn warnings(&self) -> Vec<String> {
        let v: &[Q] = match self {
            SatakeSpin6::Inert(v) => v,
            SatakeSpin6::Split(v) => v,
        };
        let mut out = Vec::new();
        if !(&v[0] * &v[3]).is_one() {
            out.push(format!("vA*vD = {} != 1", &v[0] * &v[3]));
        }
        if !(&v[1] * &v[2]).is_one() {
            out.push(format!("vB*vC = {} != 1", &v[1] * &v[2]));
        }
        if v.len() == 6 && !(&v[4] * &v[5]).is_one() {
            out.push(format!("vE*vF = {} != 1", &v[4] * &v[5]));
        }
        out
    }
}

/// Image of the Frobenius class `(a0, diag(a1, a2, 1, 1)) x| theta` under the exterior
/// square, as `rho(x) A`.
pub fn wedge2_frobenius(s: &SatakeGU, a: &QMat) -> QMat {
    &wedge2_rep(&s.a0, &s.torus()) * a
}

/// Degree-6 factor `det(1 - rho(x) A Z)` for a given intertwiner.
pub fn wedge2_factor_with(s: &SatakeGU, a: &QMat) -> RecipPoly {
    det_one_minus(&wedge2_frobenius(s, a))
}

/// Degree-6 exterior square factor at an inert place, with the positive-trace `A`.
pub fn wedge2_factor_gu_inert(s: &SatakeGU) -> Result<RecipPoly, LFactorError> {
    Ok(wedge2_factor_with(s, &intertwiner_a()?))
}

/// Degree-8 factor of the standard representation induced from `GL1 x GL4`:
/// `det(1 - M Z)` with `M = [[0, rho4(theta x)], [rho4(x), 0]]`.
pub fn std_factor_gu_inert(s: &SatakeGU) -> Result<RecipPoly, LFactorError> {
    let g = s.torus();
    let (_, tg) = theta(&s.a0, &g)?;
    let z = QMat::zeros(4, 4, &q(0));
    let m = QMat::from_blocks(&z, &tg, &g, &z);
    Ok(det_one_minus(&m))
}

fn check_nonzero(b: &[&Q]) -> Result<(), LFactorError> {
    if b.iter().any(|x| x.is_zero()) {
        Err(LFactorError::ZeroParameter)
    } else {
        Ok(())
    }
}

/// GSp4 spin factor with parameters `b0, b0 b1, b0 b2, b0 b1 b2`.
pub fn gsp4_spin_recip(b0: &Q, b1: &Q, b2: &Q) -> Result<RecipPoly, LFactorError> {
    check_nonzero(&[b0, b1, b2])?;
    let params = [b0.clone(), b0 * b1, b0 * b2, b0 * b1 * b2];
    Ok(RecipPoly::from_params(&params))
}

/// GSp4 standard factor with parameters `1, b1, 1/b1, b2, 1/b2`; trivial central
/// character `b0^2 b1 b2 = 1` is required.
pub fn gsp4_std_recip(b0: &Q, b1: &Q, b2: &Q) -> Result<RecipPoly, LFactorError> {
    check_nonzero(&[b0, b1, b2])?;
    let c = b0 * b0 * b1 * b2;
    if !c.is_one() {
        return Err(LFactorError::CentralCharNotTrivial(c.to_string()));
    }
    let params = [q(1), b1.clone(), b1.recip(), b2.clone(), b2.recip()];
    Ok(RecipPoly::from_params(&params))
}

/// Degree-6 GSpin6 factor: `(1 - Z^2) prod_{A..D} (1 - v Z)` inert,
/// `prod_{A..F} (1 - v Z)` split.
pub fn spin6_factor(s: &SatakeSpin6) -> RecipPoly {
    match s {
        SatakeSpin6::Inert(v) => {
            RecipPoly::new(vec![q(1), q(0), q(-1)]).mul(&RecipPoly::from_params(v.iter()))
        }
        SatakeSpin6::Split(v) => RecipPoly::from_params(v.iter()),
    }
}
