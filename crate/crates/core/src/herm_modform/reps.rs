use serde_json::{json, Value};

use super::ModFormError;
use crate::exact_rings::rational::{is_integer, q};
use crate::exact_rings::{HermMat2, QuadAlgebra};
use crate::gu_groups::V6Vec;

/// Integral `v = (alpha, h, delta)` with `h = [[x, w], [conj w, y]]`, `w = w0 + w1 omega`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RepSolution {
    pub alpha: i64,
    pub x: i64,
    pub y: i64,
    pub w: (i64, i64),
    pub delta: i64,
}

impl RepSolution {
    pub fn height(&self) -> i64 {
        [self.alpha, self.x, self.y, self.w.0, self.w.1, self.delta]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap()
    }

    pub fn to_v6(&self, alg: QuadAlgebra) -> V6Vec {
        V6Vec::int(alg, self.alpha, (self.x, self.y, self.w.0, self.w.1), self.delta)
    }

    pub fn from_v6(v: &V6Vec) -> Option<Self> {
        let int = |x: &crate::exact_rings::Q| is_integer(x).then(|| x.to_integer().try_into().ok()).flatten();
        let w = v.h.w();
        Some(RepSolution {
            alpha: int(&v.alpha)?,
            x: int(v.h.x())?,
            y: int(v.h.y())?,
            w: (int(w.a())?, int(w.b())?),
            delta: int(&v.delta)?,
        })
    }

    pub fn neg(&self) -> Self {
        RepSolution {
            alpha: -self.alpha,
            x: -self.x,
            y: -self.y,
            w: (-self.w.0, -self.w.1),
            delta: -self.delta,
        }
    }

    pub fn to_json(&self) -> Value {
        json!([self.alpha, [self.x, self.y, self.w.0, self.w.1], self.delta])
    }
}

pub(super) fn check_t(t: &HermMat2) -> Result<(i64, i64, i64), ModFormError> {
    let alg = t.algebra();
    if alg.is_split() {
        return Err(ModFormError::NeedsField);
    }
    if !t.is_integral() || !t.is_positive_definite() {
        return Err(ModFormError::NotPositiveDefinite);
    }
    let det = t.det().to_integer().try_into().map_err(|_| ModFormError::NotPositiveDefinite)?;
    Ok((det, alg.omega_trace(), alg.omega_norm()))
}

/// All integral `v` with `alpha delta - det h = -det T` and every coordinate bounded by
/// `bound`, sorted. Loops over `h` and splits `alpha delta = det h - det T` into divisors.
pub fn enumerate_reps(t: &HermMat2, bound: i64) -> Result<Vec<RepSolution>, ModFormError> {
    let (det_t, tr, nm) = check_t(t)?;
    let b = bound;
    let mut out = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            for w0 in -b..=b {
                for w1 in -b..=b {
                    let norm_w = w0 * w0 + tr * w0 * w1 + nm * w1 * w1;
                    let target = x * y - norm_w - det_t;
                    let mut push = |alpha, delta| out.push(RepSolution { alpha, x, y, w: (w0, w1), delta });
                    if target == 0 {
                        for d in -b..=b {
                            push(0, d);
                        }
                        for a in (-b..=b).filter(|&a| a != 0) {
                            push(a, 0);
                        }
                        continue;
                    }
                    for a in (1..=b.min(target.abs())).filter(|a| target % a == 0) {
                        let d = target / a;
                        if d.abs() <= b {
                            push(a, d);
                            push(-a, -d);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Six-fold loop over every coordinate; the oracle for [`enumerate_reps`].
pub fn enumerate_reps_brute(t: &HermMat2, bound: i64) -> Result<Vec<RepSolution>, ModFormError> {
    check_t(t)?;
    let alg = t.algebra();
    let b = bound;
    let target = -t.det();
    let mut out = Vec::new();
    for alpha in -b..=b {
        for x in -b..=b {
            for y in -b..=b {
                for w0 in -b..=b {
                    for w1 in -b..=b {
                        let h = HermMat2::int(alg, x, y, (w0, w1));
                        for delta in -b..=b {
                            if q(alpha * delta) - h.det() == target {
                                out.push(RepSolution { alpha, x, y, w: (w0, w1), delta });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
