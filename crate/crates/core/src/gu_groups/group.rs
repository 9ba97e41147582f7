use num_traits::Zero;
use serde_json::{json, Value};

use super::GroupError;
use crate::exact_rings::rational::{parse_rational, Q};
use crate::exact_rings::{prime, text, HermMat2, Mat, MatE, QuadAlgebra, RingError, Scalar};

/// `J4 = [[0, I], [-I, 0]]` in the basis `e1, e2, f1, f2`.
pub fn j4(alg: QuadAlgebra) -> MatE {
    let i2 = MatE::identity(2, &alg.one());
    let z = MatE::zeros(2, 2, &alg.one());
    MatE::from_blocks(&z, &i2, &-&i2, &z)
}

/// `epsilon = diag(K, K)` with `K = [[0, 1], [-1, 0]]`; `V'` is the set of `v` with
/// `t(epsilon v) = -epsilon v`.
pub fn epsilon(alg: QuadAlgebra) -> MatE {
    let k = -&crate::exact_rings::j2(&alg.one());
    let z = MatE::zeros(2, 2, &alg.one());
    MatE::from_blocks(&k, &z, &z, &k)
}

/// `g'' = [[A', C'], [B', D']]`, equal to `epsilon^{-1} tg epsilon`.
pub fn double_prime<T: Scalar>(g: &Mat<T>) -> Mat<T> {
    let [a, b, c, d] = g.blocks();
    Mat::from_blocks(&prime(&a), &prime(&c), &prime(&b), &prime(&d))
}

/// Element of GU(2,2) with its similitude factor.
#[derive(Clone, Debug, PartialEq)]
pub struct GUElem {
    g: MatE,
    nu: Q,
}

impl GUElem {
    /// Validates `g J4 *g = nu J4` exactly and returns the element with its `nu`.
    pub fn from_matrix(g: MatE) -> Result<Self, GroupError> {
        if g.rows() != 4 || g.cols() != 4 {
            return Err(RingError::Shape("expected a 4x4 matrix".into()).into());
        }
        let alg = g.get(0, 0).algebra();
        if g.det().inv().is_none() {
            return Err(GroupError::NotInvertible);
        }
        let j = j4(alg);
        let p = &(&g * &j) * &g.star();
        let nu = p.get(0, 2).clone();
        let Some(nu_q) = nu.as_rational().cloned() else {
            return Err(GroupError::NotSimilitude);
        };
        if nu_q.is_zero() || p != j.scale(&nu) {
            return Err(GroupError::NotSimilitude);
        }
        Ok(GUElem { g, nu: nu_q })
    }

    pub fn identity(alg: QuadAlgebra) -> Self {
        GUElem {
            g: MatE::identity(4, &alg.one()),
            nu: Q::from_integer(1.into()),
        }
    }

    pub fn matrix(&self) -> &MatE {
        &self.g
    }

    pub fn nu(&self) -> &Q {
        &self.nu
    }

    pub fn algebra(&self) -> QuadAlgebra {
        self.g.get(0, 0).algebra()
    }

    /// In the kernel of `g -> det(g) nu^{-2}`.
    pub fn is_gspin6(&self) -> bool {
        let nu = self.algebra().rational(self.nu.clone());
        self.g.det() == &nu * &nu
    }

    pub fn mul(&self, o: &GUElem) -> GUElem {
        GUElem {
            g: &self.g * &o.g,
            nu: &self.nu * &o.nu,
        }
    }

    pub fn inverse(&self) -> GUElem {
        GUElem {
            g: self.g.inverse().expect("group elements are invertible"),
            nu: self.nu.recip(),
        }
    }

    pub fn blocks(&self) -> [MatE; 4] {
        self.g.blocks()
    }

    pub fn to_json(&self) -> Value {
        let mut v = text::mat_to_json(&self.g);
        v["nu"] = json!(self.nu.to_string());
        v
    }

    /// Reads `{"algebra", "rows", "nu"?}`; a supplied `nu` must match the computed one.
    pub fn from_json(s: &str) -> Result<Self, GroupError> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| RingError::Parse(e.to_string()))?;
        let g = GUElem::from_matrix(text::mat_from_value(&v)?)?;
        if let Some(nu) = v.get("nu") {
            let nu = nu
                .as_str()
                .ok_or_else(|| RingError::Parse("\"nu\" must be a string".into()))?;
            if parse_rational(nu)? != g.nu {
                return Err(GroupError::NotSimilitude);
            }
        }
        Ok(g)
    }
}

/// Generators of GSpin6.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// `[[1, u], [0, 1]]`.
    UpperUnipotent(HermMat2),
    /// `[[1, 0], [u, 1]]`.
    LowerUnipotent(HermMat2),
    /// `diag(nu *m^{-1}, m)`; needs `det m` rational.
    Levi { m: MatE, nu: Q },
}

impl Generator {
    pub fn to_gu(&self) -> Result<GUElem, GroupError> {
        match self {
            Generator::UpperUnipotent(u) | Generator::LowerUnipotent(u) => {
                let alg = u.algebra();
                let i2 = MatE::identity(2, &alg.one());
                let z = MatE::zeros(2, 2, &alg.one());
                let um = u.to_mat();
                let g = if matches!(self, Generator::UpperUnipotent(_)) {
                    MatE::from_blocks(&i2, &um, &z, &i2)
                } else {
                    MatE::from_blocks(&i2, &z, &um, &i2)
                };
                GUElem::from_matrix(g)
            }
            Generator::Levi { m, nu } => {
                let det = m.det();
                if det.as_rational().map_or(true, Zero::is_zero) || nu.is_zero() {
                    return Err(GroupError::BadLevi);
                }
                let alg = det.algebra();
                let top = m
                    .star()
                    .inverse()
                    .ok_or(GroupError::NotInvertible)?
                    .scale(&alg.rational(nu.clone()));
                let z = MatE::zeros(2, 2, &alg.one());
                GUElem::from_matrix(MatE::from_blocks(&top, &z, &z, m))
            }
        }
    }
}

/// The inversion `[[0, -I], [I, 0]]`.
pub fn inversion(alg: QuadAlgebra) -> GUElem {
    let i2 = MatE::identity(2, &alg.one());
    let z = MatE::zeros(2, 2, &alg.one());
    GUElem::from_matrix(MatE::from_blocks(&z, &-&i2, &i2, &z)).expect("inversion is in GU(2,2)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_rings::rational::q;
    use crate::gu_groups::ANTIDIAGONAL_ORDER;

    fn diag4(alg: QuadAlgebra, d: [i64; 4]) -> MatE {
        MatE::diag(&d.map(|x| alg.int(x, 0)))
    }

    #[test]
    fn similitude_examples() {
        let e = QuadAlgebra::gaussian();
        assert_eq!(GUElem::from_matrix(diag4(e, [1, 1, 1, 1])).unwrap().nu(), &q(1));
        let g = GUElem::from_matrix(diag4(e, [3, 1, 1, 3])).unwrap();
        assert_eq!(g.nu(), &q(3));
        assert!(g.is_gspin6());
        assert_eq!(
            GUElem::from_matrix(diag4(e, [1, 1, 1, 2])),
            Err(GroupError::NotSimilitude)
        );
        assert_eq!(
            GUElem::from_matrix(diag4(e, [1, 0, 1, 1])),
            Err(GroupError::NotInvertible)
        );
    }

    #[test]
    fn double_prime_is_epsilon_conjugate_of_transpose() {
        let e = QuadAlgebra::eisenstein();
        let g = MatE::from_fn(4, 4, |i, j| e.int((i * 3 + j) as i64 - 5, (i as i64 - j as i64) % 3));
        let eps = epsilon(e);
        let other = &(&eps.inverse().unwrap() * &g.transpose()) * &eps;
        assert_eq!(double_prime(&g), other);
    }

    #[test]
    fn levi_requires_rational_det() {
        let e = QuadAlgebra::gaussian();
        let m = MatE::diag(&[e.int(0, 1), e.one()]);
        let g = Generator::Levi { m, nu: q(1) };
        assert_eq!(g.to_gu(), Err(GroupError::BadLevi));
        let m = MatE::diag(&[e.int(0, 1), e.int(0, -1)]);
        let g = Generator::Levi { m, nu: q(2) }.to_gu().unwrap();
        assert_eq!(g.nu(), &q(2));
        assert!(g.is_gspin6());
        let m = MatE::diag(&[e.int(1, 1), e.int(1, -1)]);
        let g = Generator::Levi { m, nu: q(-3) }.to_gu().unwrap();
        assert!(g.is_gspin6());
    }

    #[test]
    fn antidiagonal_order() {
        let e = QuadAlgebra::gaussian();
        let j = j4(e);
        let p = MatE::from_fn(4, 4, |i, k| {
            if ANTIDIAGONAL_ORDER[i] == k { e.one() } else { e.zero() }
        });
        let anti = MatE::from_fn(4, 4, |i, k| match (i, k) {
            (0, 3) | (1, 2) => e.one(),
            (2, 1) | (3, 0) => e.int(-1, 0),
            _ => e.zero(),
        });
        assert_eq!(&(&p * &j) * &p.transpose(), anti);
    }

    #[test]
    fn json_round_trip() {
        let e = QuadAlgebra::gaussian();
        let g = Generator::UpperUnipotent(HermMat2::int(e, 1, 2, (3, -1))).to_gu().unwrap();
        let s = g.to_json().to_string();
        assert_eq!(GUElem::from_json(&s).unwrap(), g);
        let bad = s.replace("\"nu\":\"1\"", "\"nu\":\"2\"");
        assert!(GUElem::from_json(&bad).is_err());
    }
}
