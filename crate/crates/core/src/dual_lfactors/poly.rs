use std::fmt;

use num_traits::{One, Zero};
use serde_json::Value;

use crate::exact_rings::rational::{q, Q};
use crate::exact_rings::QMat;

/// Polynomial in `Z = p^{-s}` with exact coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecipPoly {
    coeffs: Vec<Q>,
}

impl RecipPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Q::zero());
        }
        RecipPoly { coeffs }
    }

    pub fn one() -> Self {
        RecipPoly::new(vec![Q::one()])
    }

    /// `1 - v Z`.
    pub fn linear(v: &Q) -> Self {
        RecipPoly::new(vec![Q::one(), -v.clone()])
    }

    /// `prod (1 - v Z)`.
    pub fn from_params<'a>(params: impl IntoIterator<Item = &'a Q>) -> Self {
        params
            .into_iter()
            .fold(RecipPoly::one(), |acc, v| acc.mul(&RecipPoly::linear(v)))
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RecipPoly::new(out)
    }

    /// `P(Z) -> P(Z^2)`.
    pub fn in_z_squared(&self) -> Self {
        let mut out = vec![Q::zero(); 2 * self.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[2 * i] = a.clone();
        }
        RecipPoly::new(out)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    pub fn eval(&self, z: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * z + c)
    }

    /// Coefficients as exact rational strings.
    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| Value::String(c.to_string())).collect())
    }
}

impl fmt::Display for RecipPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `det(I - M Z)` by the Faddeev-LeVerrier recursion.
pub fn det_one_minus(m: &QMat) -> RecipPoly {
    let n = m.rows();
    assert!(m.is_square());
    let id = QMat::identity(n, &q(1));
    let mut coeffs = vec![Q::one()];
    let mut mk = QMat::zeros(n, n, &q(0));
    for k in 1..=n {
        mk = &(m * &mk) + &id.scale(&coeffs[k - 1]);
        let ck = -(m * &mk).trace() / q(k as i64);
        coeffs.push(ck);
    }
    RecipPoly::new(coeffs)
}
