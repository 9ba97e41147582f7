//! Helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::RingError;

/// Exact rational number used for every coordinate in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n / d`; panics on `d == 0`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `p^k` for any integer `k`.
pub fn qpow(p: u64, k: i64) -> Q {
    let base = Q::from_integer(BigInt::from(p));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

fn int_val(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation; `None` for zero.
pub fn val_p(x: &Q, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    Some(int_val(x.numer(), &p) - int_val(x.denom(), &p))
}

/// True iff `x` lies in `Z_(p)`.
pub fn is_p_integral(x: &Q, p: u64) -> bool {
    val_p(x, p).map_or(true, |v| v >= 0)
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Reduces `x` mod `modulus` after checking it is p-integral for every prime of the modulus.
/// Used by the finite-quotient kernels; `x` must have denominator coprime to `modulus`.
pub fn residue(x: &Q, modulus: i64) -> Option<i64> {
    let m = BigInt::from(modulus);
    let den = x.denom();
    if !den.gcd(&m).is_one() {
        return None;
    }
    // den^{-1} mod m via extended gcd
    let e = den.extended_gcd(&m);
    let inv = e.x.mod_floor(&m);
    let r = (x.numer() * inv).mod_floor(&m);
    r.to_i64()
}

pub fn parse_rational(s: &str) -> Result<Q, RingError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(RingError::Parse(format!("empty rational in {s:?}")));
    }
    let bad = || RingError::Parse(format!("not a rational: {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(RingError::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

/// Rational with denominator at most `max_den` closest to `x`, found by continued fractions.
pub fn reconstruct_rational(x: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(Q::new(BigInt::from(h1), BigInt::from(k1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(val_p(&qr(12, 5), 2), Some(2));
        assert_eq!(val_p(&qr(12, 5), 5), Some(-1));
        assert_eq!(val_p(&q(0), 3), None);
        assert!(is_p_integral(&qr(1, 3), 2));
        assert!(!is_p_integral(&qr(1, 3), 3));
    }

    #[test]
    fn residues() {
        assert_eq!(residue(&qr(1, 2), 9), Some(5));
        assert_eq!(residue(&qr(1, 3), 9), None);
        assert_eq!(residue(&q(-1), 8), Some(7));
    }

    #[test]
    fn parse_and_reconstruct() {
        assert_eq!(parse_rational(" -3/6 ").unwrap(), qr(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(reconstruct_rational(0.2, 125).unwrap(), qr(1, 5));
        assert_eq!(reconstruct_rational(-3.0, 10).unwrap(), q(-3));
        assert_eq!(reconstruct_rational(1.0 / 9.0 + 1e-12, 1000).unwrap(), qr(1, 9));
    }

    #[test]
    fn powers() {
        assert_eq!(qpow(3, -2), qr(1, 9));
        assert_eq!(qpow(2, 3), q(8));
    }
}
