//! The stabilizer `G_T` of `v_T` and the line stabilizer samples used for the
//! `f -> f_T` eigenvalue swap.

use num_traits::Zero;

use super::group::{GUElem, Generator};
use super::v6::V6Vec;
use super::GroupError;
use crate::exact_rings::{j2, sharp, EElem, HermMat2, MatE, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerReport {
    /// Closed-form membership criterion; `None` when the generator type has none.
    pub criterion: Option<bool>,
    /// Whether `v_T g = v_T` by direct computation of the action.
    pub by_action: bool,
}

impl StabilizerReport {
    pub fn consistent(&self) -> bool {
        self.criterion.map_or(true, |c| c == self.by_action)
    }
}

/// Upper unipotents need `tr(T u) = 0`, lower unipotents `tr(T' u) = 0`, and Levi
/// elements `m = T m^# T^{-1}`. The result is cross-checked against the action.
pub fn stabilizer_test(gen: &Generator, t: &HermMat2) -> Result<StabilizerReport, GroupError> {
    let criterion = match gen {
        Generator::UpperUnipotent(u) => t.trace_pairing(u).is_zero(),
        Generator::LowerUnipotent(u) => t.prime().trace_pairing(u).is_zero(),
        Generator::Levi { m, .. } => {
            let tm = t.to_mat();
            let tinv = tm.inverse().ok_or(GroupError::NotInvertible)?;
            &(&tm * &sharp(m)) * &tinv == *m
        }
    };
    let g = gen.to_gu()?;
    let vt = V6Vec::v_t(t);
    Ok(StabilizerReport {
        criterion: Some(criterion),
        by_action: vt.act(&g)? == vt,
    })
}

/// Stabilization of `v_T` by an arbitrary element, by the action alone.
pub fn stabilizes(g: &GUElem, t: &HermMat2) -> Result<StabilizerReport, GroupError> {
    let vt = V6Vec::v_t(t);
    Ok(StabilizerReport {
        criterion: None,
        by_action: vt.act(g)? == vt,
    })
}

/// `f_T = conj(f) conj(T) J2` for a row vector `f`.
pub fn f_t_vector(f: &[EElem], t: &MatE) -> Vec<EElem> {
    let fc: Vec<EElem> = f.iter().map(EElem::conj).collect();
    let tj = &t.conj() * &j2(&f[0]);
    MatE::row_mul(&fc, &tj)
}

/// Element of `Q cap G_T` with `f g = lambda f`: the Levi element `diag(x^#, x)` where
/// `x` acts by `lambda` on `f` and by `conj(lambda)` on `f_T`, followed by unipotents
/// `[[1, u], [0, 1]]` with `tr(T u) = 0`.
pub fn d_e_sample(
    t: &HermMat2,
    f: &[EElem],
    lambda: &EElem,
    unipotents: &[HermMat2],
) -> Result<GUElem, GroupError> {
    let tm = t.to_mat();
    let ft = f_t_vector(f, &tm);
    let basis = MatE::from_rows(vec![f.to_vec(), ft]);
    let binv = basis.inverse().ok_or(GroupError::NotInvertible)?;
    let d = MatE::diag(&[lambda.clone(), lambda.conj()]);
    let x = &(&binv * &d) * &basis;
    let nu: Q = x.det().as_rational().cloned().ok_or(GroupError::BadLevi)?;
    let mut g = Generator::Levi { m: x, nu }.to_gu()?;
    for u in unipotents {
        g = g.mul(&Generator::UpperUnipotent(u.clone()).to_gu()?);
    }
    Ok(g)
}

/// `(0, v) g` for `v` in `E f1 + E f2`, returned as its last two coordinates, or
/// `None` when the image leaves that plane.
pub fn act_on_f_plane(v: &[EElem], g: &GUElem) -> Option<Vec<EElem>> {
    let z = v[0].algebra().zero();
    let full = vec![z.clone(), z, v[0].clone(), v[1].clone()];
    let out = MatE::row_mul(&full, g.matrix());
    (out[0].is_zero() && out[1].is_zero()).then(|| out[2..].to_vec())
}
