//! Quadratic algebras `E = Q[w]/(w^2 - t w + n)` over the rationals.
//!
//! Every algebra in the crate is presented on the integral basis `{1, w}`:
//!
//! * imaginary quadratic fields `Q(sqrt(-d))`, with `w = sqrt(-d)` or
//!   `w = (1 + sqrt(-d)) / 2` when `d = 3 mod 4`;
//! * the split algebra `Q x Q`, with `w = (0, 1)` so that `w^2 = w`.
//!
//! In both cases conjugation sends `w` to `t - w`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::rational::{is_integer, is_p_integral, q, to_f64, val_p, Q};
use super::RingError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadAlgebra {
    /// `Q(sqrt(-d))`, `d` squarefree and positive.
    Field { d: u64 },
    /// `Q x Q` with the coordinate swap as conjugation.
    Split,
}

fn is_squarefree(d: u64) -> bool {
    let mut f = 2u64;
    while f * f <= d {
        if d % (f * f) == 0 {
            return false;
        }
        f += 1;
    }
    true
}

impl QuadAlgebra {
    pub fn field(d: u64) -> Result<Self, RingError> {
        if d == 0 || !is_squarefree(d) {
            return Err(RingError::NotSquarefree(d));
        }
        Ok(QuadAlgebra::Field { d })
    }

    /// `Q(i)`.
    pub fn gaussian() -> Self {
        QuadAlgebra::Field { d: 1 }
    }

    /// `Q(sqrt(-3))` with `w = (1 + sqrt(-3))/2`.
    pub fn eisenstein() -> Self {
        QuadAlgebra::Field { d: 3 }
    }

    pub fn split() -> Self {
        QuadAlgebra::Split
    }

    pub fn is_split(&self) -> bool {
        matches!(self, QuadAlgebra::Split)
    }

    /// Trace of `w`.
    pub fn omega_trace(&self) -> i64 {
        match *self {
            QuadAlgebra::Field { d } if d % 4 == 3 => 1,
            QuadAlgebra::Field { .. } => 0,
            QuadAlgebra::Split => 1,
        }
    }

    /// Norm of `w`.
    pub fn omega_norm(&self) -> i64 {
        match *self {
            QuadAlgebra::Field { d } if d % 4 == 3 => ((d + 1) / 4) as i64,
            QuadAlgebra::Field { d } => d as i64,
            QuadAlgebra::Split => 0,
        }
    }

    /// Discriminant of the order `Z[w]`: `t^2 - 4n`.
    pub fn discriminant(&self) -> i64 {
        let t = self.omega_trace();
        t * t - 4 * self.omega_norm()
    }

    /// Image of `w` under the embedding with positive imaginary part.
    pub fn omega_complex(&self) -> Option<Complex64> {
        match *self {
            QuadAlgebra::Field { d } => {
                let s = (d as f64).sqrt();
                if d % 4 == 3 {
                    Some(Complex64::new(0.5, s / 2.0))
                } else {
                    Some(Complex64::new(0.0, s))
                }
            }
            QuadAlgebra::Split => None,
        }
    }

    pub fn elem(&self, a: Q, b: Q) -> EElem {
        EElem { alg: *self, a, b }
    }

    pub fn int(&self, a: i64, b: i64) -> EElem {
        self.elem(q(a), q(b))
    }

    pub fn rational(&self, a: Q) -> EElem {
        self.elem(a, Q::zero())
    }

    pub fn zero(&self) -> EElem {
        self.int(0, 0)
    }

    pub fn one(&self) -> EElem {
        self.int(1, 0)
    }

    pub fn omega(&self) -> EElem {
        self.int(0, 1)
    }

    /// Element `(x1, x2)` of the split algebra.
    pub fn from_pair(&self, x1: Q, x2: Q) -> Result<EElem, RingError> {
        if !self.is_split() {
            return Err(RingError::NotSplit);
        }
        let b = &x2 - &x1;
        Ok(self.elem(x1, b))
    }
}

impl fmt::Display for QuadAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadAlgebra::Field { d } => write!(f, "field:{d}"),
            QuadAlgebra::Split => write!(f, "split"),
        }
    }
}

impl std::str::FromStr for QuadAlgebra {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "split" {
            return Ok(QuadAlgebra::Split);
        }
        let d = s.strip_prefix("field:").unwrap_or(s);
        let d: u64 = d
            .trim()
            .parse()
            .map_err(|_| RingError::Parse(format!("unknown algebra {s:?}")))?;
        QuadAlgebra::field(d)
    }
}

/// Element `a + b w` of a quadratic algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EElem {
    alg: QuadAlgebra,
    a: Q,
    b: Q,
}

impl EElem {
    pub fn algebra(&self) -> QuadAlgebra {
        self.alg
    }

    pub fn a(&self) -> &Q {
        &self.a
    }

    pub fn b(&self) -> &Q {
        &self.b
    }

    pub fn conj(&self) -> EElem {
        let t = q(self.alg.omega_trace());
        EElem {
            alg: self.alg,
            a: &self.a + &self.b * t,
            b: -&self.b,
        }
    }

    pub fn norm(&self) -> Q {
        let t = q(self.alg.omega_trace());
        let n = q(self.alg.omega_norm());
        &self.a * &self.a + t * &self.a * &self.b + n * &self.b * &self.b
    }

    pub fn trace(&self) -> Q {
        q(2) * &self.a + q(self.alg.omega_trace()) * &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.is_rational().then_some(&self.a)
    }

    /// Coordinates on `{1, w}` are integers.
    pub fn is_integral(&self) -> bool {
        is_integer(&self.a) && is_integer(&self.b)
    }

    /// Integral in `O_E (x) Z_p`; the basis `{1, w}` stays integral at every unramified `p`.
    pub fn is_integral_at(&self, p: u64) -> bool {
        is_p_integral(&self.a, p) && is_p_integral(&self.b, p)
    }

    /// Minimum p-adic valuation of the coordinates; `None` for zero.
    pub fn val_p(&self, p: u64) -> Option<i64> {
        match (val_p(&self.a, p), val_p(&self.b, p)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn inv(&self) -> Option<EElem> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(EElem {
            alg: self.alg,
            a: &c.a / &n,
            b: &c.b / &n,
        })
    }

    pub fn scale(&self, k: &Q) -> EElem {
        EElem {
            alg: self.alg,
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    /// `(x1, x2)` for split-algebra elements.
    pub fn to_pair(&self) -> Option<(Q, Q)> {
        self.alg
            .is_split()
            .then(|| (self.a.clone(), &self.a + &self.b))
    }

    pub fn to_complex(&self) -> Option<Complex64> {
        let w = self.alg.omega_complex()?;
        Some(Complex64::new(to_f64(&self.a), 0.0) + w * to_f64(&self.b))
    }

    fn check(&self, other: &EElem) {
        assert_eq!(
            self.alg, other.alg,
            "mixing elements of different quadratic algebras"
        );
    }
}

impl fmt::Display for EElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*w", self.a, self.b)
    }
}

impl<'a> Add<&'a EElem> for &'a EElem {
    type Output = EElem;
    fn add(self, o: &EElem) -> EElem {
        self.check(o);
        EElem {
            alg: self.alg,
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
}

impl<'a> Sub<&'a EElem> for &'a EElem {
    type Output = EElem;
    fn sub(self, o: &EElem) -> EElem {
        self.check(o);
        EElem {
            alg: self.alg,
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
}

impl<'a> Mul<&'a EElem> for &'a EElem {
    type Output = EElem;
    fn mul(self, o: &EElem) -> EElem {
        self.check(o);
        // w^2 = t w - n
        let t = q(self.alg.omega_trace());
        let n = q(self.alg.omega_norm());
        let bb = &self.b * &o.b;
        EElem {
            alg: self.alg,
            a: &self.a * &o.a - &n * &bb,
            b: &self.a * &o.b + &self.b * &o.a + t * bb,
        }
    }
}

impl Neg for &EElem {
    type Output = EElem;
    fn neg(self) -> EElem {
        EElem {
            alg: self.alg,
            a: -&self.a,
            b: -&self.b,
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<EElem> for EElem {
            type Output = EElem;
            fn $m(self, o: EElem) -> EElem { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for EElem {
    type Output = EElem;
    fn neg(self) -> EElem {
        -&self
    }
}
