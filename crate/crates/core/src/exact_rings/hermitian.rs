use std::fmt;

use num_traits::Zero;

use super::algebra::{EElem, QuadAlgebra};
use super::matrix::MatE;
use super::rational::{q, Q};
use super::RingError;

/// Hermitian matrix `[[x, w], [conj(w), y]]` over a quadratic algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermMat2 {
    x: Q,
    y: Q,
    w: EElem,
}

impl HermMat2 {
    pub fn new(x: Q, y: Q, w: EElem) -> Self {
        HermMat2 { x, y, w }
    }

    pub fn int(alg: QuadAlgebra, x: i64, y: i64, w: (i64, i64)) -> Self {
        HermMat2::new(q(x), q(y), alg.int(w.0, w.1))
    }

    pub fn zero(alg: QuadAlgebra) -> Self {
        HermMat2::int(alg, 0, 0, (0, 0))
    }

    pub fn identity(alg: QuadAlgebra) -> Self {
        HermMat2::int(alg, 1, 1, (0, 0))
    }

    pub fn diag(alg: QuadAlgebra, x: Q, y: Q) -> Self {
        HermMat2::new(x, y, alg.zero())
    }

    pub fn from_mat(m: &MatE) -> Result<Self, RingError> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(RingError::Shape("expected a 2x2 matrix".into()));
        }
        if &m.star() != m {
            return Err(RingError::NotHermitian);
        }
        let x = m.get(0, 0).as_rational().cloned().ok_or(RingError::NotHermitian)?;
        let y = m.get(1, 1).as_rational().cloned().ok_or(RingError::NotHermitian)?;
        Ok(HermMat2::new(x, y, m.get(0, 1).clone()))
    }

    pub fn algebra(&self) -> QuadAlgebra {
        self.w.algebra()
    }

    pub fn x(&self) -> &Q {
        &self.x
    }

    pub fn y(&self) -> &Q {
        &self.y
    }

    pub fn w(&self) -> &EElem {
        &self.w
    }

    pub fn to_mat(&self) -> MatE {
        let alg = self.algebra();
        MatE::from_rows(vec![
            vec![alg.rational(self.x.clone()), self.w.clone()],
            vec![self.w.conj(), alg.rational(self.y.clone())],
        ])
    }

    pub fn det(&self) -> Q {
        &self.x * &self.y - self.w.norm()
    }

    pub fn trace(&self) -> Q {
        &self.x + &self.y
    }

    /// `h' = [[y, -w], [-conj(w), x]]`, again Hermitian.
    pub fn prime(&self) -> Self {
        HermMat2::new(self.y.clone(), self.x.clone(), -&self.w)
    }

    pub fn neg(&self) -> Self {
        HermMat2::new(-&self.x, -&self.y, -&self.w)
    }

    pub fn add(&self, o: &Self) -> Self {
        HermMat2::new(&self.x + &o.x, &self.y + &o.y, &self.w + &o.w)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Q) -> Self {
        HermMat2::new(&self.x * k, &self.y * k, self.w.scale(k))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.w.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.to_mat().is_integral()
    }

    pub fn is_integral_at(&self, p: u64) -> bool {
        self.to_mat().is_integral_at(p)
    }

    /// `tr(self * o)`, a rational number for Hermitian arguments.
    pub fn trace_pairing(&self, o: &Self) -> Q {
        (&self.to_mat() * &o.to_mat())
            .trace()
            .as_rational()
            .cloned()
            .expect("trace of a product of Hermitian matrices is rational")
    }

    /// Positive definite (real case: leading entry and determinant positive).
    pub fn is_positive_definite(&self) -> bool {
        self.x > Q::zero() && self.det() > Q::zero()
    }
}

impl fmt::Display for HermMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.x, self.w, self.w.conj(), self.y)
    }
}
