//! Hilbert symbols over Q and the norm criterion for quadratic algebras.

use num_traits::{Signed, ToPrimitive, Zero};

use super::algebra::QuadAlgebra;
use super::rational::Q;
use super::RingError;

/// A place of Q: `None` is the real place.
pub type Place = Option<u64>;

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1u128 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Legendre symbol `(u/p)` for odd prime `p` not dividing `u`.
fn legendre(u: i128, p: u64) -> i32 {
    let p = p as i128;
    let r = u.rem_euclid(p) as u128;
    if pow_mod(r, ((p - 1) / 2) as u128, p as u128) == 1 {
        1
    } else {
        -1
    }
}

fn split_val(mut a: i128, p: u64) -> (u32, i128) {
    let p = p as i128;
    let mut k = 0;
    while a % p == 0 {
        a /= p;
        k += 1;
    }
    (k, a)
}

/// Distinct prime factors by trial division.
pub fn prime_factors(n: u128) -> Vec<u64> {
    let mut n = n;
    let mut out = Vec::new();
    let mut f = 2u128;
    while f * f <= n {
        if n % f == 0 {
            out.push(f as u64);
            while n % f == 0 {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

/// Hilbert symbol `(a, b)_v` for nonzero integers.
pub fn hilbert_symbol(a: i128, b: i128, place: Place) -> i32 {
    assert!(a != 0 && b != 0, "Hilbert symbol of zero");
    let Some(p) = place else {
        return if a < 0 && b < 0 { -1 } else { 1 };
    };
    let (al, u) = split_val(a, p);
    let (be, v) = split_val(b, p);
    if p == 2 {
        let eps = |x: i128| ((x.rem_euclid(8) - 1) / 2 % 2) as u32;
        let omega = |x: i128| {
            let r = x.rem_euclid(8);
            u32::from(r == 3 || r == 5)
        };
        let e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let mut s = if (al * be) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
    if be % 2 == 1 {
        s *= legendre(u, p);
    }
    if al % 2 == 1 {
        s *= legendre(v, p);
    }
    s
}

/// Whether `c` is a norm from `E^x`.
///
/// For `E = Q(sqrt(-d))` this is the Hasse criterion: `(c, -d)_v = 1` at the real place
/// and at every prime dividing `2 d c`. The primes of `c` cannot be skipped: `21` is not
/// a norm from `Q(i)` even though the symbol is trivial at 2 and at the real place.
pub fn is_norm_from_e(c: &Q, alg: QuadAlgebra) -> Result<bool, RingError> {
    if c.is_zero() {
        return Err(RingError::ZeroNotAllowed);
    }
    let d = match alg {
        QuadAlgebra::Split => return Ok(true),
        QuadAlgebra::Field { d } => d,
    };
    // c and num*den differ by a square
    let cc = c.numer() * c.denom();
    let a = cc
        .to_i128()
        .ok_or_else(|| RingError::Overflow(format!("{c}")))?;
    let b = -(d as i128);
    if hilbert_symbol(a, b, None) != 1 {
        return Ok(false);
    }
    let bound = cc.abs().to_u128().expect("fits after i128 conversion") * 2 * d as u128;
    Ok(prime_factors(bound)
        .into_iter()
        .all(|p| hilbert_symbol(a, b, Some(p)) == 1))
}
