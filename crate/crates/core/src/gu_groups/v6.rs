use num_traits::Zero;
use serde_json::{json, Value};

use super::group::{double_prime, GUElem};
use super::GroupError;
use crate::exact_rings::rational::{is_integer, parse_rational, q, Q};
use crate::exact_rings::{text, HermMat2, MatE, QuadAlgebra, RingError};

/// Vector `(alpha, h, delta)` of V6, realized as `[[alpha I, h], [h', delta I]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct V6Vec {
    pub alpha: Q,
    pub h: HermMat2,
    pub delta: Q,
}

impl V6Vec {
    pub fn new(alpha: Q, h: HermMat2, delta: Q) -> Self {
        V6Vec { alpha, h, delta }
    }

    pub fn int(alg: QuadAlgebra, alpha: i64, h: (i64, i64, i64, i64), delta: i64) -> Self {
        V6Vec::new(q(alpha), HermMat2::int(alg, h.0, h.1, (h.2, h.3)), q(delta))
    }

    pub fn zero(alg: QuadAlgebra) -> Self {
        V6Vec::new(Q::zero(), HermMat2::zero(alg), Q::zero())
    }

    /// `v_T = [[0, T'], [T, 0]]`.
    pub fn v_t(t: &HermMat2) -> Self {
        V6Vec::new(Q::zero(), t.prime(), Q::zero())
    }

    pub fn algebra(&self) -> QuadAlgebra {
        self.h.algebra()
    }

    pub fn to_mat4(&self) -> MatE {
        let alg = self.algebra();
        let i2 = MatE::identity(2, &alg.one());
        MatE::from_blocks(
            &i2.scale(&alg.rational(self.alpha.clone())),
            &self.h.to_mat(),
            &self.h.prime().to_mat(),
            &i2.scale(&alg.rational(self.delta.clone())),
        )
    }

    /// Inverse of [`V6Vec::to_mat4`]; fails with `NotInV6` outside the image.
    pub fn from_mat4(m: &MatE) -> Result<Self, GroupError> {
        let [a, b, c, d] = m.blocks();
        let alpha = a.as_scalar().and_then(|x| x.as_rational().cloned());
        let delta = d.as_scalar().and_then(|x| x.as_rational().cloned());
        let (Some(alpha), Some(delta)) = (alpha, delta) else {
            return Err(GroupError::NotInV6);
        };
        let h = HermMat2::from_mat(&b).map_err(|_| GroupError::NotInV6)?;
        if h.prime().to_mat() != c {
            return Err(GroupError::NotInV6);
        }
        Ok(V6Vec::new(alpha, h, delta))
    }

    /// `q(v) = 2(alpha delta - det h)`.
    pub fn qform(&self) -> Q {
        q(2) * (&self.alpha * &self.delta - self.h.det())
    }

    /// Polarization of `q`: `alpha_v delta_w + alpha_w delta_v - tr(h_v' h_w)`.
    pub fn bform(&self, w: &V6Vec) -> Q {
        &self.alpha * &w.delta + &w.alpha * &self.delta - self.h.prime().trace_pairing(&w.h)
    }

    pub fn iota(&self) -> Self {
        V6Vec::new(self.delta.clone(), self.h.neg(), self.alpha.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        V6Vec::new(&self.alpha + &o.alpha, self.h.add(&o.h), &self.delta + &o.delta)
    }

    pub fn scale(&self, k: &Q) -> Self {
        V6Vec::new(&self.alpha * k, self.h.scale(k), &self.delta * k)
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.delta.is_zero() && self.h.is_zero()
    }

    /// In `V6(O_F)`.
    pub fn is_integral(&self) -> bool {
        is_integer(&self.alpha) && is_integer(&self.delta) && self.h.is_integral()
    }

    pub fn is_integral_at(&self, p: u64) -> bool {
        let ok = |x: &Q| crate::exact_rings::rational::is_p_integral(x, p);
        ok(&self.alpha) && ok(&self.delta) && self.h.is_integral_at(p)
    }

    /// `R_{v0}(v) = v - 2 (v, v0)/(v0, v0) v0`.
    pub fn reflect(&self, v0: &V6Vec) -> Result<Self, GroupError> {
        let n = v0.bform(v0);
        if n.is_zero() {
            return Err(GroupError::IsotropicAxis);
        }
        let c = q(-2) * self.bform(v0) / n;
        Ok(self.add(&v0.scale(&c)))
    }

    /// Right action `v g = nu(g)^{-1} g'' v g`.
    pub fn act(&self, g: &GUElem) -> Result<Self, GroupError> {
        let alg = self.algebra();
        let m = &(&double_prime(g.matrix()) * &self.to_mat4()) * g.matrix();
        V6Vec::from_mat4(&m.scale(&alg.rational(g.nu().recip())))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "algebra": self.algebra().to_string(),
            "alpha": self.alpha.to_string(),
            "h": [self.h.x().to_string(), self.h.y().to_string(), self.h.w().to_string()],
            "delta": self.delta.to_string(),
        })
    }

    pub fn from_value(v: &Value) -> Result<Self, RingError> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| RingError::Parse(format!("missing string field {k:?}")))
        };
        let alg: QuadAlgebra = field("algebra")?.parse()?;
        let h = v
            .get("h")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 3)
            .ok_or_else(|| RingError::Parse("\"h\" must be [x, y, w]".into()))?;
        let hs: Vec<&str> = h
            .iter()
            .map(|x| x.as_str().ok_or_else(|| RingError::Parse("h entries are strings".into())))
            .collect::<Result<_, _>>()?;
        let h = HermMat2::new(
            parse_rational(hs[0])?,
            parse_rational(hs[1])?,
            text::parse_eelem(hs[2], alg)?,
        );
        Ok(V6Vec::new(parse_rational(field("alpha")?)?, h, parse_rational(field("delta")?)?))
    }

    pub fn from_json(s: &str) -> Result<Self, RingError> {
        let v: Value = serde_json::from_str(s).map_err(|e| RingError::Parse(e.to_string()))?;
        V6Vec::from_value(&v)
    }
}

/// `v0` read as a 4x4 matrix; it lies in GU(2,2) when `q(v0) != 0`.
pub fn v6_as_group_element(v0: &V6Vec) -> Result<GUElem, GroupError> {
    if v0.qform().is_zero() {
        return Err(if v0.is_zero() { GroupError::NotInvertible } else { GroupError::NotSimilitude });
    }
    GUElem::from_matrix(v0.to_mat4())
}

impl std::fmt::Display for V6Vec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.h, self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_rings::rational::qr;
    use crate::gu_groups::{epsilon, Generator};

    fn gi() -> QuadAlgebra {
        QuadAlgebra::gaussian()
    }

    #[test]
    fn embedding_lies_in_v_prime() {
        let v = V6Vec::int(gi(), 2, (1, -3, 2, 5), -1);
        let eps = epsilon(gi());
        let ev = &eps * &v.to_mat4();
        assert_eq!(ev.transpose(), -&ev);
        assert_eq!(V6Vec::from_mat4(&v.to_mat4()).unwrap(), v);
    }

    #[test]
    fn quadratic_form_examples() {
        let e = gi();
        assert_eq!(V6Vec::int(e, 1, (0, 0, 0, 0), 1).qform(), q(2));
        let vt = V6Vec::v_t(&HermMat2::identity(e));
        assert_eq!(vt.qform(), q(-2));
        let a = V6Vec::int(e, 1, (0, 0, 0, 0), 0);
        let d = V6Vec::int(e, 0, (0, 0, 0, 0), 1);
        assert_eq!(a.bform(&d), q(1));
    }

    #[test]
    fn bform_is_polarization() {
        let e = QuadAlgebra::eisenstein();
        let v = V6Vec::int(e, 3, (1, 2, -1, 4), -2);
        let w = V6Vec::int(e, -1, (0, 5, 2, 1), 7);
        let pol = (v.add(&w).qform() - v.qform() - w.qform()) * qr(1, 2);
        assert_eq!(v.bform(&w), pol);
        assert_eq!(v.bform(&v), v.qform());
    }

    #[test]
    fn iota_and_reflection_examples() {
        let e = gi();
        let v = V6Vec::int(e, 1, (0, 0, 0, 0), 2);
        assert_eq!(v.iota(), V6Vec::int(e, 2, (0, 0, 0, 0), 1));
        let v0 = V6Vec::int(e, 1, (1, 0, 1, 1), 3);
        assert_eq!(v0.reflect(&v0).unwrap(), v0.neg());
        let iso = V6Vec::int(e, 1, (0, 0, 0, 0), 0);
        assert_eq!(v.reflect(&iso), Err(GroupError::IsotropicAxis));
    }

    #[test]
    fn levi_action_example() {
        let e = gi();
        let p = 5;
        let m = MatE::diag(&[e.one(), e.int(p, 0)]);
        let g = Generator::Levi { m, nu: q(1) }.to_gu().unwrap();
        let v = V6Vec::int(e, 1, (0, 0, 0, 0), 0);
        assert_eq!(v.act(&g).unwrap(), V6Vec::new(qr(1, p), HermMat2::zero(e), q(0)));
        assert_eq!(v.act(&GUElem::identity(e)).unwrap(), v);
    }

    #[test]
    fn group_element_from_vector() {
        let e = gi();
        let v0 = V6Vec::int(e, 1, (0, 0, 0, 0), 1);
        let g = v6_as_group_element(&v0).unwrap();
        assert_eq!(g.nu(), &q(1));
        assert!(g.is_gspin6());
        let vt = V6Vec::v_t(&HermMat2::identity(e));
        let g = v6_as_group_element(&vt).unwrap();
        assert_eq!(g.nu(), &q(-1));
        assert_eq!(v6_as_group_element(&V6Vec::zero(e)), Err(GroupError::NotInvertible));
    }

    #[test]
    fn non_gspin_element_leaves_v6() {
        let e = gi();
        // z = 1 + i has z conj(z) = 2 but det = z^4 = -4 != 4
        let z = e.int(1, 1);
        let g = GUElem::from_matrix(MatE::diag(&[z.clone(), z.clone(), z.clone(), z])).unwrap();
        assert_eq!(g.nu(), &q(2));
        assert!(!g.is_gspin6());
        let v = V6Vec::int(e, 1, (0, 0, 0, 0), 0);
        assert_eq!(v.act(&g), Err(GroupError::NotInV6));
    }

    #[test]
    fn json_round_trip() {
        let v = V6Vec::new(qr(1, 2), HermMat2::int(gi(), 1, -2, (3, 4)), q(-7));
        assert_eq!(V6Vec::from_json(&v.to_json().to_string()).unwrap(), v);
        assert!(V6Vec::from_json(r#"{"algebra":"field:1","alpha":"1","h":["1"],"delta":"0"}"#).is_err());
    }
}
