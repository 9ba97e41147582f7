//! Hermitian upper half-space, the complexified V6 with the vector `r_*`, and the
//! holomorphic series `P_T^alpha`.

mod reps;
mod series;

pub use reps::{enumerate_reps, enumerate_reps_brute, RepSolution};
pub use series::{
    equivariance_defect, eval_pt, modularity_check, permutation_check, shell_sums, ModularityReport,
    PtValue,
};

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::exact_rings::rational::{q, Q};
use crate::exact_rings::{prime, CMat, EElem, Mat, MatE, QuadAlgebra, Scalar};
use crate::gu_groups::{double_prime, sample, GUElem, Generator, GroupError, V6Vec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModFormError {
    #[error("weight r = {0} is below the convergence range r >= 7")]
    WeightTooSmall(u32),
    #[error("T must be integral and positive definite")]
    NotPositiveDefinite,
    #[error("Z is not in the Hermitian upper half-space")]
    NotUpperHalf,
    #[error("E must be an imaginary quadratic field")]
    NeedsField,
    #[error("exact r_* identities are computed over Q(i) only")]
    NeedsGaussian,
    #[error("gamma must have positive similitude")]
    NegativeSimilitude,
    #[error("CZ + D is singular")]
    Singular,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `Z = X + iY` with `X, Y` Hermitian and `Y` positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperHalfPoint {
    z: CMat,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl UpperHalfPoint {
    pub fn new(z: CMat) -> Result<Self, ModFormError> {
        if z.rows() != 2 || z.cols() != 2 {
            return Err(ModFormError::NotUpperHalf);
        }
        let p = UpperHalfPoint { z };
        let y = p.y();
        let (y11, det) = (y.get(0, 0).re, y.det().re);
        if !(y11 > 0.0 && det > 0.0) {
            return Err(ModFormError::NotUpperHalf);
        }
        Ok(p)
    }

    pub fn from_xy(x: &CMat, y: &CMat) -> Result<Self, ModFormError> {
        UpperHalfPoint::new(x + &y.scale(&c(0.0, 1.0)))
    }

    /// `i I`.
    pub fn base() -> Self {
        UpperHalfPoint { z: CMat::identity(2, &c(1.0, 0.0)).scale(&c(0.0, 1.0)) }
    }

    pub fn z(&self) -> &CMat {
        &self.z
    }

    /// `(Z + Z*) / 2`.
    pub fn x(&self) -> CMat {
        (&self.z + &self.z.star()).scale(&c(0.5, 0.0))
    }

    /// `(Z - Z*) / 2i`.
    pub fn y(&self) -> CMat {
        (&self.z - &self.z.star()).scale(&c(0.0, -0.5))
    }
}

/// `det(CZ + D)`.
pub fn j_of<T: Scalar>(g: &Mat<T>, z: &Mat<T>) -> T {
    let [_, _, cc, d] = g.blocks();
    (&(&cc * z) + &d).det()
}

/// `(AZ + B)(CZ + D)^{-1}`.
pub fn act_of<T: Scalar>(g: &Mat<T>, z: &Mat<T>) -> Option<Mat<T>> {
    let [a, b, cc, d] = g.blocks();
    let den = (&(&cc * z) + &d).inverse()?;
    Some(&(&(&a * z) + &b) * &den)
}

pub fn j_factor(gamma: &CMat, z: &UpperHalfPoint) -> Complex64 {
    j_of(gamma, z.z())
}

/// `gamma Z`; `gamma` must have positive similitude for the result to stay in the domain.
pub fn act_z(gamma: &CMat, z: &UpperHalfPoint) -> Result<UpperHalfPoint, ModFormError> {
    UpperHalfPoint::new(act_of(gamma, z.z()).ok_or(ModFormError::Singular)?)
}

pub fn gu_to_complex(g: &GUElem) -> CMat {
    g.matrix().to_complex().expect("imaginary quadratic entries")
}

/// Vector of `V6 (x) C`: `h` is an arbitrary 2x2 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CV6<T> {
    pub alpha: T,
    pub h: Mat<T>,
    pub delta: T,
}

impl<T: Scalar> CV6<T> {
    pub fn to_mat4(&self) -> Mat<T> {
        let i2 = Mat::identity(2, &self.alpha.one_like());
        Mat::from_blocks(&i2.scale(&self.alpha), &self.h, &prime(&self.h), &i2.scale(&self.delta))
    }

    /// Reads `alpha`, `h`, `delta` off the blocks.
    pub fn from_mat4(m: &Mat<T>) -> Self {
        let [a, b, _, d] = m.blocks();
        CV6 { alpha: a.get(0, 0).clone(), h: b, delta: d.get(0, 0).clone() }
    }

    /// `(v, w) = alpha_v delta_w + alpha_w delta_v - tr(h_v' h_w)`.
    pub fn bform(&self, o: &Self) -> T {
        self.alpha.clone() * o.delta.clone() + o.alpha.clone() * self.delta.clone()
            - (&prime(&self.h) * &o.h).trace()
    }

    /// `v g = nu^{-1} g'' v g`.
    pub fn act(&self, g: &Mat<T>, nu: &T) -> Self {
        let m = &(&double_prime(g) * &self.to_mat4()) * g;
        CV6::from_mat4(&m.scale(&nu.try_inv().expect("nonzero similitude")))
    }

    pub fn scale(&self, k: &T) -> Self {
        CV6 {
            alpha: self.alpha.clone() * k.clone(),
            h: self.h.scale(k),
            delta: self.delta.clone() * k.clone(),
        }
    }

    pub fn max_diff(&self, o: &Self) -> f64
    where
        T: Into<Complex64>,
    {
        let d = |a: &T, b: &T| (a.clone().into() - b.clone().into()).norm();
        let mut m = d(&self.alpha, &o.alpha).max(d(&self.delta, &o.delta));
        for (a, b) in self.h.entries().iter().zip(o.h.entries()) {
            m = m.max(d(a, b));
        }
        m
    }
}

/// `r_* = (-1, iI, 1)` over the Gaussian rationals.
pub fn r_star_exact() -> CV6<EElem> {
    let e = QuadAlgebra::gaussian();
    CV6 { alpha: e.int(-1, 0), h: MatE::identity(2, &e.one()).scale(&e.int(0, 1)), delta: e.one() }
}

pub fn r_star() -> CV6<Complex64> {
    CV6 { alpha: c(-1.0, 0.0), h: CMat::identity(2, &c(1.0, 0.0)).scale(&c(0.0, 1.0)), delta: c(1.0, 0.0) }
}

pub fn v6_exact(v: &V6Vec) -> CV6<EElem> {
    let e = v.algebra();
    CV6 { alpha: e.rational(v.alpha.clone()), h: v.h.to_mat(), delta: e.rational(v.delta.clone()) }
}

pub fn v6_complex(v: &V6Vec) -> CV6<Complex64> {
    let f = |x: &Q| c(crate::exact_rings::rational::to_f64(x), 0.0);
    CV6 { alpha: f(&v.alpha), h: v.h.to_mat().to_complex().expect("field entries"), delta: f(&v.delta) }
}

/// `Q_v(Z) = -(alpha det Z + tr(h' Z) + delta)`.
pub fn q_v_of<T: Scalar>(v: &CV6<T>, z: &Mat<T>) -> T {
    -(v.alpha.clone() * z.det() + (&prime(&v.h) * z).trace() + v.delta.clone())
}

pub fn q_v(v: &V6Vec, z: &UpperHalfPoint) -> Complex64 {
    q_v_of(&v6_complex(v), z.z())
}

/// Coordinates `(W, B, C, G, E)` of `v` in the wedge basis
/// `e1^f1 - e2^f2, e1^f2, e2^f1, e1^e2, f1^f2` (with `W*` on the second slot).
pub fn wedge_coords(v: &V6Vec) -> (EElem, Q, Q, Q, Q) {
    (v.h.w().conj(), v.h.y().clone(), -v.h.x().clone(), v.alpha.clone(), v.delta.clone())
}

/// `||v||^2 = 2|W|^2 + B^2 + C^2 + G^2 + E^2`.
pub fn norm_sq(v: &V6Vec) -> Q {
    let (w, b, cc, g, e) = wedge_coords(v);
    q(2) * w.norm() + &b * &b + &cc * &cc + &g * &g + &e * &e
}

fn gaussian_only(e: QuadAlgebra) -> Result<QuadAlgebra, ModFormError> {
    (e == QuadAlgebra::gaussian()).then_some(e).ok_or(ModFormError::NeedsGaussian)
}

/// Part 1 sides `|(r_*, v)|^2` and `||v||^2 - (v, v)`, exact; `v` over `Q(i)`.
pub fn rstar_part1(v: &V6Vec) -> Result<(Q, Q), ModFormError> {
    gaussian_only(v.algebra())?;
    let lhs = r_star_exact().bform(&v6_exact(v)).norm();
    Ok((lhs, norm_sq(v) - v.bform(v)))
}

/// Part 3: `j(g,i)^{-1} nu(g) r_* g^{-1}` and `(-1, Z, -det Z)` for `Z = g i`, exact.
pub fn rstar_part3(g: &GUElem) -> Result<(CV6<EElem>, CV6<EElem>), ModFormError> {
    if g.nu() <= &Q::zero() {
        return Err(ModFormError::NegativeSimilitude);
    }
    let e = gaussian_only(g.algebra())?;
    let i = MatE::identity(2, &e.one()).scale(&e.int(0, 1));
    let gi = act_of(g.matrix(), &i).ok_or(ModFormError::Singular)?;
    let jinv = j_of(g.matrix(), &i).inv().ok_or(ModFormError::Singular)?;
    let ginv = g.inverse();
    let lhs = r_star_exact()
        .act(ginv.matrix(), &e.rational(ginv.nu().clone()))
        .scale(&(jinv * e.rational(g.nu().clone())));
    let rhs = CV6 { alpha: e.int(-1, 0), h: gi.clone(), delta: -gi.det() };
    Ok((lhs, rhs))
}

/// Part 4: `j(g,i)^{-1} nu(g) (r_*, v g)` and `Q_v(g i)`, exact.
pub fn rstar_part4(v: &V6Vec, g: &GUElem) -> Result<(EElem, EElem), ModFormError> {
    let e = gaussian_only(g.algebra())?;
    let i = MatE::identity(2, &e.one()).scale(&e.int(0, 1));
    let z = act_of(g.matrix(), &i).ok_or(ModFormError::Singular)?;
    let jinv = j_of(g.matrix(), &i).inv().ok_or(ModFormError::Singular)?;
    let vg = v.act(g)?;
    let lhs = jinv * e.rational(g.nu().clone()) * r_star_exact().bform(&v6_exact(&vg));
    Ok((lhs, q_v_of(&v6_exact(v), &z)))
}

/// Part 2 defect `|r_* k - j(k,i)^{-1} r_*|` for `k` in `K_infinity`.
pub fn rstar_part2_defect(k: &CMat) -> f64 {
    let i = UpperHalfPoint::base();
    let j = j_factor(k, &i);
    let lhs = r_star().act(k, &c(1.0, 0.0));
    lhs.max_diff(&r_star().scale(&(1.0 / j)))
}

/// Random element of `K_infinity`: products of `diag(*m^{-1}, m)`, `m` in SU(2), and the
/// rotations `[[cos t, sin t], [-sin t, cos t]]`.
pub fn random_k_infinity<R: Rng>(rng: &mut R) -> CMat {
    let one = c(1.0, 0.0);
    let mut k = CMat::identity(4, &one);
    let z2 = CMat::zeros(2, 2, &one);
    for _ in 0..3 {
        let (t1, t2, t3) = (rng.gen::<f64>() * 3.0, rng.gen::<f64>() * 6.3, rng.gen::<f64>() * 6.3);
        let a = Complex64::from_polar(t1.cos(), t2);
        let b = Complex64::from_polar(t1.sin(), t3);
        let m = CMat::from_rows(vec![vec![a, b], vec![-b.conj(), a.conj()]]);
        let top = m.star().inverse().expect("unitary");
        let levi = CMat::from_blocks(&top, &z2, &z2, &m);
        let th = rng.gen::<f64>() * 6.3;
        let i2 = CMat::identity(2, &one);
        let rot = CMat::from_blocks(
            &i2.scale(&c(th.cos(), 0.0)),
            &i2.scale(&c(th.sin(), 0.0)),
            &i2.scale(&c(-th.sin(), 0.0)),
            &i2.scale(&c(th.cos(), 0.0)),
        );
        k = &(&k * &levi) * &rot;
    }
    k
}

/// Random element of `GU(2,2)` over `E` with positive similitude, as a product of
/// unipotents and Levi elements.
pub fn random_positive_gu<R: Rng>(rng: &mut R, alg: QuadAlgebra, len: usize) -> GUElem {
    let mut g = GUElem::identity(alg);
    while g.matrix() == GUElem::identity(alg).matrix() {
        for _ in 0..len {
            let gen = match sample::generator(rng, alg, 2) {
                Generator::Levi { m, nu } => Generator::Levi { m, nu: nu.abs() },
                other => other,
            };
            g = g.mul(&gen.to_gu().expect("generators are similitudes"));
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_rings::HermMat2;
    use crate::gu_groups::inversion;
    use rand::SeedableRng;

    fn gi() -> QuadAlgebra {
        QuadAlgebra::gaussian()
    }

    #[test]
    fn q_v_examples() {
        let e = gi();
        let i = UpperHalfPoint::base();
        assert!((q_v(&V6Vec::int(e, 1, (0, 0, 0, 0), 0), &i) - c(1.0, 0.0)).norm() < 1e-14);
        assert!((q_v(&V6Vec::int(e, 0, (0, 0, 0, 0), 1), &i) - c(-1.0, 0.0)).norm() < 1e-14);
        // (0, h, 0) at iY: -i tr(h' Y)
        let h = HermMat2::int(e, 2, 3, (1, 1));
        let y = CMat::from_rows(vec![vec![c(2.0, 0.0), c(0.5, 0.5)], vec![c(0.5, -0.5), c(1.0, 0.0)]]);
        let z = UpperHalfPoint::from_xy(&CMat::zeros(2, 2, &c(0.0, 0.0)), &y).unwrap();
        let hp = prime(&h.to_mat().to_complex().unwrap());
        let expect = c(0.0, -1.0) * (&hp * &y).trace();
        assert!((q_v(&V6Vec::new(q(0), h, q(0)), &z) - expect).norm() < 1e-12);
    }

    #[test]
    fn upper_half_validation() {
        let bad = CMat::identity(2, &c(0.0, -1.0));
        assert_eq!(UpperHalfPoint::new(bad), Err(ModFormError::NotUpperHalf));
        let z = UpperHalfPoint::base();
        assert!(z.x().is_zero());
    }

    #[test]
    fn j_examples() {
        let e = gi();
        let z = UpperHalfPoint::new(CMat::from_rows(vec![
            vec![c(0.3, 1.2), c(0.1, 0.2)],
            vec![c(0.1, 0.2), c(-0.4, 0.9)],
        ]))
        .unwrap();
        let id = gu_to_complex(&GUElem::identity(e));
        assert!((j_factor(&id, &z) - c(1.0, 0.0)).norm() < 1e-14);
        let inv = gu_to_complex(&inversion(e));
        assert!((j_factor(&inv, &z) - z.z().det()).norm() < 1e-12);
        let b = HermMat2::int(e, 1, -1, (0, 1));
        let t = gu_to_complex(&Generator::UpperUnipotent(b.clone()).to_gu().unwrap());
        assert!((j_factor(&t, &z) - c(1.0, 0.0)).norm() < 1e-14);
        let moved = act_z(&t, &z).unwrap();
        assert!(moved.z().max_abs_diff(&(z.z() + &b.to_mat().to_complex().unwrap())) < 1e-12);
    }

    #[test]
    fn rstar_examples() {
        let e = gi();
        let v = V6Vec::int(e, 1, (0, 0, 0, 0), 1);
        assert_eq!(rstar_part1(&v).unwrap(), (q(0), q(0)));
        assert_eq!(v.bform(&v), q(2));
        let vt = V6Vec::v_t(&HermMat2::identity(e));
        let (l, r) = rstar_part1(&vt).unwrap();
        assert_eq!(l, r);
        assert_eq!(norm_sq(&vt), q(2));
        let (l3, r3) = rstar_part3(&GUElem::identity(e)).unwrap();
        assert_eq!(l3, r3);
        assert_eq!(r3.delta, e.one());
    }

    #[test]
    fn rstar_random_elements() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let e = gi();
        for _ in 0..20 {
            let g = random_positive_gu(&mut rng, e, 3);
            let (l, r) = rstar_part3(&g).unwrap();
            assert_eq!(l, r);
            let v = sample::v6(&mut rng, e, 4);
            let (l, r) = rstar_part4(&v, &g).unwrap();
            assert_eq!(l, r);
            let k = random_k_infinity(&mut rng);
            assert!(rstar_part2_defect(&k) < 1e-10);
        }
    }

    #[test]
    fn rstar_needs_gaussian() {
        let e = QuadAlgebra::eisenstein();
        assert_eq!(rstar_part3(&GUElem::identity(e)), Err(ModFormError::NeedsGaussian));
        assert_eq!(rstar_part1(&V6Vec::int(e, 1, (0, 0, 0, 0), 1)), Err(ModFormError::NeedsGaussian));
    }
}
