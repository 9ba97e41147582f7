//! The quaternion ring `H_{T,J} = O_E + O_E S` attached to a Hermitian form `T` and a
//! symplectic form `J`, its action on row vectors, `f_T`, and lattice stability.

use num_traits::{One, Zero};

use crate::exact_rings::rational::{is_p_integral, val_p, Q};
use crate::exact_rings::{sharp, EElem, HermMat2, MatE, QuadAlgebra, RingError};
pub use crate::gu_groups::f_t_vector;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AitError {
    #[error("J must satisfy tJ = -J and be nonzero")]
    NotAntisymmetric,
    #[error("T must be invertible")]
    SingularT,
    #[error("composite J T conj(J) tT is not scalar")]
    NotScalar,
    #[error("the stability criterion needs a unit Pfaffian")]
    PfaffianNotUnit,
    #[error("m must be invertible with rational determinant")]
    BadM,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Where integrality is tested: in `O_E`, or in `O_E (x) Z_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrality {
    Global,
    At(u64),
}

impl Integrality {
    pub fn elem(&self, x: &EElem) -> bool {
        match *self {
            Integrality::Global => x.is_integral(),
            Integrality::At(p) => x.is_integral_at(p),
        }
    }

    pub fn mat(&self, m: &MatE) -> bool {
        m.entries().iter().all(|x| self.elem(x))
    }

    pub fn rational(&self, x: &Q) -> bool {
        match *self {
            Integrality::Global => x.denom().is_one(),
            Integrality::At(p) => is_p_integral(x, p),
        }
    }

    /// `x` is a unit of the integers in question.
    pub fn is_unit(&self, x: &Q) -> bool {
        match *self {
            Integrality::Global => x.is_one() || *x == -Q::one(),
            Integrality::At(p) => val_p(x, p) == Some(0),
        }
    }
}

/// Hermitian form `T` on `V` and symplectic form `J` on the dual.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianData {
    pub t: HermMat2,
    pub j: MatE,
}

impl HermitianData {
    pub fn new(t: HermMat2, j: MatE) -> Result<Self, AitError> {
        if j.rows() != 2 || j.cols() != 2 || j.transpose() != -&j || j.is_zero() {
            return Err(AitError::NotAntisymmetric);
        }
        if t.det().is_zero() {
            return Err(AitError::SingularT);
        }
        Ok(HermitianData { t, j })
    }

    /// `J = J2` with the given `T`.
    pub fn standard(t: HermMat2) -> Result<Self, AitError> {
        let j = crate::exact_rings::j2(&t.algebra().one());
        HermitianData::new(t, j)
    }

    pub fn algebra(&self) -> QuadAlgebra {
        self.t.algebra()
    }

    /// `Pf(J)`, taken as the `(1, 2)` entry; only its norm is used.
    pub fn pfaffian(&self) -> EElem {
        self.j.get(0, 1).clone()
    }

    /// `-N(Pf J) det T`, the value predicted for `S^2`.
    pub fn predicted_s_squared(&self) -> Q {
        -(self.pfaffian().norm() * self.t.det())
    }

    /// `S^2` computed as the matrix composite `J T conj(J) tT`, which must be scalar.
    pub fn s_squared(&self) -> Result<Q, AitError> {
        let tm = self.t.to_mat();
        let comp = &(&(&self.j * &tm) * &self.j.conj()) * &tm.transpose();
        comp.as_scalar()
            .and_then(|c| c.as_rational().cloned())
            .ok_or(AitError::NotScalar)
    }

    /// `S(delta) = conj(delta J T)` on row vectors of the dual.
    pub fn s_act(&self, delta: &[EElem]) -> Vec<EElem> {
        let jt = &self.j * &self.t.to_mat();
        MatE::row_mul(delta, &jt).iter().map(EElem::conj).collect()
    }

    /// The quaternion ring `H_{T,J}`.
    pub fn ring(&self) -> Result<QuatRing, AitError> {
        Ok(QuatRing {
            alg: self.algebra(),
            s: self.s_squared()?,
        })
    }
}

/// `<u, v>_T = u T t(conj v)`.
pub fn herm_pairing(u: &[EElem], v: &[EElem], t: &MatE) -> EElem {
    let ut = MatE::row_mul(u, t);
    ut.iter()
        .zip(v)
        .fold(u[0].algebra().zero(), |acc, (a, b)| acc + a * &b.conj())
}

/// Canonical bilinear pairing `<f, delta> = f t(delta)` between `V` and its dual.
pub fn canonical_pairing(f: &[EElem], delta: &[EElem]) -> EElem {
    f.iter()
        .zip(delta)
        .fold(f[0].algebra().zero(), |acc, (a, b)| acc + a * b)
}

/// Gram matrix of `f, f_T` for `<,>_T`.
pub fn f_t_gram(f: &[EElem], t: &HermMat2) -> MatE {
    let tm = t.to_mat();
    let ft = f_t_vector(f, &tm);
    let b = [f.to_vec(), ft];
    MatE::from_fn(2, 2, |i, j| herm_pairing(&b[i], &b[j], &tm))
}

/// Element `x + y S` of `H_{T,J}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatElem {
    pub x: EElem,
    pub y: EElem,
}

/// `O_E + O_E S` with `S^2 = s` and `S x = conj(x) S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatRing {
    pub alg: QuadAlgebra,
    pub s: Q,
}

impl QuatRing {
    pub fn elem(&self, x: EElem, y: EElem) -> QuatElem {
        QuatElem { x, y }
    }

    pub fn mul(&self, a: &QuatElem, b: &QuatElem) -> QuatElem {
        let s = self.alg.rational(self.s.clone());
        QuatElem {
            x: &a.x * &b.x + &s * &(&a.y * &b.y.conj()),
            y: &a.x * &b.y + &a.y * &b.x.conj(),
        }
    }

    pub fn add(&self, a: &QuatElem, b: &QuatElem) -> QuatElem {
        QuatElem { x: &a.x + &b.x, y: &a.y + &b.y }
    }

    /// `x + yS -> conj(x) - yS`.
    pub fn conj(&self, a: &QuatElem) -> QuatElem {
        QuatElem { x: a.x.conj(), y: -&a.y }
    }

    /// `N(x) - s N(y)`.
    pub fn norm(&self, a: &QuatElem) -> Q {
        a.x.norm() - &self.s * a.y.norm()
    }

    /// `a conj(a)` in `O_E`, which should be the rational [`QuatRing::norm`].
    pub fn norm_by_product(&self, a: &QuatElem) -> QuatElem {
        self.mul(a, &self.conj(a))
    }
}

/// `m^{-1} T m^#`.
pub fn dual_form(m: &MatE, t: &HermMat2) -> Result<MatE, AitError> {
    if m.det().as_rational().map_or(true, Zero::is_zero) {
        return Err(AitError::BadM);
    }
    let minv = m.inverse().ok_or(AitError::BadM)?;
    Ok(&(&minv * &t.to_mat()) * &sharp(m))
}

/// `m^{-1} T m^#` lies in `H2(O_E)`. Requires a unit Pfaffian so that the criterion
/// is equivalent to stability of `V(m)` under `S`.
pub fn lattice_stable(m: &MatE, data: &HermitianData, at: Integrality) -> Result<bool, AitError> {
    if !at.is_unit(&data.pfaffian().norm()) {
        return Err(AitError::PfaffianNotUnit);
    }
    let d = dual_form(m, &data.t)?;
    Ok(HermMat2::from_mat(&d).is_ok() && at.mat(&d))
}

/// Direct test: `S` maps the rows of `tm` into their `O_E`-span.
pub fn lattice_stable_direct(m: &MatE, data: &HermitianData, at: Integrality) -> Result<bool, AitError> {
    let tm = m.transpose();
    let inv = tm.inverse().ok_or(AitError::BadM)?;
    for i in 0..2 {
        let image = data.s_act(&tm.row(i));
        let coords = MatE::row_mul(&image, &inv);
        if !coords.iter().all(|c| at.elem(c)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m = T m^# T^{-1}`.
pub fn bt_membership(m: &MatE, t: &HermMat2) -> Result<bool, AitError> {
    let tm = t.to_mat();
    let tinv = tm.inverse().ok_or(AitError::SingularT)?;
    Ok(&(&tm * &sharp(m)) * &tinv == *m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_rings::j2;
    use crate::exact_rings::rational::q;

    fn gi() -> QuadAlgebra {
        QuadAlgebra::gaussian()
    }

    #[test]
    fn s_squared_examples() {
        let e = gi();
        let d = HermitianData::standard(HermMat2::identity(e)).unwrap();
        assert_eq!(d.s_squared().unwrap(), q(-1));
        let d = HermitianData::standard(HermMat2::int(e, 1, 2, (0, 0))).unwrap();
        assert_eq!(d.s_squared().unwrap(), q(-2));
        let j = j2(&e.one()).scale(&e.int(3, 0));
        let d = HermitianData::new(HermMat2::identity(e), j).unwrap();
        assert_eq!(d.s_squared().unwrap(), q(-9));
        assert_eq!(d.predicted_s_squared(), q(-9));
        let sym = MatE::identity(2, &e.one());
        assert_eq!(HermitianData::new(HermMat2::identity(e), sym), Err(AitError::NotAntisymmetric));
    }

    #[test]
    fn s_act_examples() {
        let e = gi();
        let d = HermitianData::standard(HermMat2::identity(e)).unwrap();
        assert_eq!(d.s_act(&[e.zero(), e.zero()]), vec![e.zero(), e.zero()]);
        let delta = [e.one(), e.zero()];
        assert_eq!(d.s_act(&delta), vec![e.zero(), e.int(-1, 0)]);
        let back = d.s_act(&d.s_act(&[e.int(2, 1), e.int(-1, 3)]));
        assert_eq!(back, vec![e.int(-2, -1), e.int(1, -3)]);
        // conjugate linear
        let x = e.int(1, 2);
        let sx = d.s_act(&[&x * &e.int(2, 1), &x * &e.int(-1, 3)]);
        let xs: Vec<EElem> = d.s_act(&[e.int(2, 1), e.int(-1, 3)]).iter().map(|c| &x.conj() * c).collect();
        assert_eq!(sx, xs);
    }

    #[test]
    fn f_t_identities() {
        let e = QuadAlgebra::eisenstein();
        let t = HermMat2::int(e, 2, 5, (1, -1));
        let tm = t.to_mat();
        let f = [e.int(1, 2), e.int(-3, 1)];
        let ff = herm_pairing(&f, &f, &tm);
        let gram = f_t_gram(&f, &t);
        let det = e.rational(t.det());
        assert_eq!(gram, MatE::diag(&[ff.clone(), &ff * &det]));
        let ft = f_t_vector(&f, &tm);
        let k = -&j2(&e.one());
        let lhs = canonical_pairing(&MatE::row_mul(&f, &k), &ft);
        assert_eq!(lhs, -ff);
        let d = HermitianData::standard(t).unwrap();
        for delta in [[e.one(), e.zero()], [e.zero(), e.one()]] {
            let rhs = -canonical_pairing(&f, &d.s_act(&delta)).conj();
            assert_eq!(canonical_pairing(&ft, &delta), rhs);
        }
    }

    #[test]
    fn lattice_examples() {
        let e = gi();
        let i2 = MatE::identity(2, &e.one());
        let m = MatE::diag(&[e.one(), e.int(3, 0)]);
        let id = HermitianData::standard(HermMat2::identity(e)).unwrap();
        assert!(lattice_stable(&i2, &id, Integrality::Global).unwrap());
        assert!(!lattice_stable(&m, &id, Integrality::Global).unwrap());
        assert!(!lattice_stable_direct(&m, &id, Integrality::Global).unwrap());
        let t = HermitianData::standard(HermMat2::int(e, 1, 3, (0, 0))).unwrap();
        assert!(lattice_stable(&m, &t, Integrality::Global).unwrap());
        assert!(lattice_stable_direct(&m, &t, Integrality::Global).unwrap());
        let j = j2(&e.one()).scale(&e.int(2, 0));
        let bad = HermitianData::new(HermMat2::identity(e), j).unwrap();
        assert_eq!(lattice_stable(&m, &bad, Integrality::Global), Err(AitError::PfaffianNotUnit));
    }

    #[test]
    fn quaternion_norm_expansion() {
        let e = gi();
        let d = HermitianData::standard(HermMat2::int(e, 1, 3, (1, 0))).unwrap();
        let r = d.ring().unwrap();
        let a = r.elem(e.int(1, 2), e.int(-1, 1));
        let n = r.norm(&a);
        assert_eq!(n, a.x.norm() + d.pfaffian().norm() * d.t.det() * a.y.norm());
        let p = r.norm_by_product(&a);
        assert_eq!(p, r.elem(e.rational(n), e.zero()));
    }

    #[test]
    fn bt_examples() {
        let e = gi();
        let t = HermMat2::identity(e);
        assert!(bt_membership(&MatE::identity(2, &e.one()).scale(&e.int(5, 0)), &t).unwrap());
        let m = MatE::from_rows(vec![vec![e.int(1, 1), e.int(2, 0)], vec![e.int(-2, 0), e.int(1, -1)]]);
        assert_eq!(bt_membership(&m, &t).unwrap(), m == sharp(&m));
        assert!(bt_membership(&m, &t).unwrap());
    }
}
