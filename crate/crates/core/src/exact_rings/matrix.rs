//! Small dense matrices over rationals, quadratic algebras and complex doubles.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::algebra::EElem;
use super::rational::Q;

/// Entry type of a [`Mat`].
///
/// Constants are produced from an existing value because elements of a
/// quadratic algebra carry their algebra with them.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_value(&self) -> bool;
    fn try_inv(&self) -> Option<Self>;
    fn conjugate(&self) -> Self;
}

impl Scalar for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn conjugate(&self) -> Self {
        self.clone()
    }
}

impl Scalar for EElem {
    fn zero_like(&self) -> Self {
        self.algebra().zero()
    }
    fn one_like(&self) -> Self {
        self.algebra().one()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

impl Scalar for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero_value(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero_value()).then(|| 1.0 / *self)
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMat = Mat<Q>;
pub type MatE = Mat<EElem>;
pub type CMat = Mat<Complex64>;

impl<T: Scalar> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat::new(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize, like: &T) -> Self {
        Mat::new(rows, cols, vec![like.zero_like(); rows * cols])
    }

    pub fn identity(n: usize, like: &T) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { like.one_like() } else { like.zero_like() })
    }

    pub fn diag(entries: &[T]) -> Self {
        let n = entries.len();
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                entries[0].zero_like()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        self.map(Scalar::conjugate)
    }

    /// Conjugate transpose `*m`.
    pub fn star(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| k.clone() * x.clone())
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        (1..self.rows).fold(self.get(0, 0).clone(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero_value)
    }

    /// `Some(c)` when the matrix equals `c * I`.
    pub fn as_scalar(&self) -> Option<T> {
        if !self.is_square() {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                let ok = if i == j { *v == c } else { v.is_zero_value() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Division-free cofactor expansion; used for every size up to 4 so that it also
    /// works over algebras with zero divisors.
    fn det_expand(&self) -> T {
        let n = self.rows;
        match n {
            0 => unreachable!("empty matrix"),
            1 => self.get(0, 0).clone(),
            2 => {
                self.get(0, 0).clone() * self.get(1, 1).clone()
                    - self.get(0, 1).clone() * self.get(1, 0).clone()
            }
            _ => {
                let mut acc = self.get(0, 0).zero_like();
                let rest: Vec<usize> = (1..n).collect();
                for j in 0..n {
                    let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                    let minor = self.submatrix(&rest, &cols).det_expand();
                    let term = self.get(0, j).clone() * minor;
                    acc = if j % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    /// Gaussian elimination; needs invertible pivots.
    fn det_eliminate(&self) -> T {
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.get(0, 0).one_like();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| m.get(r, c).try_inv().is_some()) else {
                // every remaining entry of the column is a non-unit; over a field that means zero
                return det.zero_like();
            };
            if piv != c {
                for j in 0..n {
                    let tmp = m.get(c, j).clone();
                    m.set(c, j, m.get(piv, j).clone());
                    m.set(piv, j, tmp);
                }
                det = -det;
            }
            let p = m.get(c, c).clone();
            let pinv = p.try_inv().expect("pivot checked invertible");
            det = det * p;
            for r in c + 1..n {
                let f = m.get(r, c).clone() * pinv.clone();
                if f.is_zero_value() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(r, j).clone() - f.clone() * m.get(c, j).clone();
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows <= 4 {
            self.det_expand()
        } else {
            self.det_eliminate()
        }
    }

    /// Classical adjugate (transpose of the cofactor matrix).
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        assert!(self.is_square());
        if n == 1 {
            return Mat::identity(1, self.get(0, 0));
        }
        Mat::from_fn(n, n, |i, j| {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let minor = self.submatrix(&rows, &cols).det();
            if (i + j) % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        if self.rows <= 4 {
            let dinv = self.det().try_inv()?;
            return Some(self.adjugate().scale(&dinv));
        }
        self.inverse_gauss_jordan()
    }

    fn inverse_gauss_jordan(&self) -> Option<Self> {
        let n = self.rows;
        let one = self.get(0, 0).one_like();
        let mut a = self.clone();
        let mut inv = Mat::identity(n, &one);
        for c in 0..n {
            let piv = (c..n).find(|&r| a.get(r, c).try_inv().is_some())?;
            if piv != c {
                for j in 0..n {
                    let t = a.get(c, j).clone();
                    a.set(c, j, a.get(piv, j).clone());
                    a.set(piv, j, t);
                    let t = inv.get(c, j).clone();
                    inv.set(c, j, inv.get(piv, j).clone());
                    inv.set(piv, j, t);
                }
            }
            let pinv = a.get(c, c).try_inv()?;
            for j in 0..n {
                a.set(c, j, a.get(c, j).clone() * pinv.clone());
                inv.set(c, j, inv.get(c, j).clone() * pinv.clone());
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero_value() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j).clone() - f.clone() * a.get(c, j).clone();
                    a.set(r, j, v);
                    let v = inv.get(r, j).clone() - f.clone() * inv.get(c, j).clone();
                    inv.set(r, j, v);
                }
            }
        }
        Some(inv)
    }

    /// `[[a, b], [c, d]]` from four equally sized square blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let k = a.rows;
        Mat::from_fn(2 * k, 2 * k, |i, j| {
            let blk = match (i < k, j < k) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk.get(i % k, j % k).clone()
        })
    }

    /// Inverse of [`Mat::from_blocks`].
    pub fn blocks(&self) -> [Self; 4] {
        assert!(self.is_square() && self.rows % 2 == 0);
        let k = self.rows / 2;
        let lo: Vec<usize> = (0..k).collect();
        let hi: Vec<usize> = (k..2 * k).collect();
        [
            self.submatrix(&lo, &lo),
            self.submatrix(&lo, &hi),
            self.submatrix(&hi, &lo),
            self.submatrix(&hi, &hi),
        ]
    }

    /// Basis of the right kernel `{x : self x = 0}`, by reduced row echelon form.
    /// Entries must come from a field.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !a.get(i, c).is_zero_value()) else {
                continue;
            };
            for j in 0..cols {
                let t = a.get(r, j).clone();
                a.set(r, j, a.get(piv, j).clone());
                a.set(piv, j, t);
            }
            let inv = a.get(r, c).try_inv().expect("nonzero pivot over a field");
            for j in 0..cols {
                a.set(r, j, a.get(r, j).clone() * inv.clone());
            }
            for i in 0..rows {
                if i == r || a.get(i, c).is_zero_value() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..cols {
                    let v = a.get(i, j).clone() - f.clone() * a.get(r, j).clone();
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let zero = self.get(0, 0).zero_like();
        let one = self.get(0, 0).one_like();
        (0..cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut x = vec![zero.clone(); cols];
                x[free] = one.clone();
                for (i, &pc) in pivots.iter().enumerate() {
                    x[pc] = -a.get(i, free).clone();
                }
                x
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn row_mul(v: &[T], m: &Self) -> Vec<T> {
        assert_eq!(v.len(), m.rows);
        (0..m.cols)
            .map(|j| {
                (1..m.rows).fold(v[0].clone() * m.get(0, j).clone(), |acc, i| {
                    acc + v[i].clone() * m.get(i, j).clone()
                })
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Mat::identity(self.rows, self.get(0, 0));
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

/// `m' = [[d, -b], [-c, a]]`, so that `m m' = det(m)` and `m + m' = tr(m)`.
pub fn prime<T: Scalar>(m: &Mat<T>) -> Mat<T> {
    assert!(m.rows == 2 && m.cols == 2, "m' is defined for 2x2 matrices");
    Mat::from_rows(vec![
        vec![m.get(1, 1).clone(), -m.get(0, 1).clone()],
        vec![-m.get(1, 0).clone(), m.get(0, 0).clone()],
    ])
}

/// `m^# = *m'`, equal to `J2 conj(m) J2^{-1}`.
pub fn sharp<T: Scalar>(m: &Mat<T>) -> Mat<T> {
    prime(m).star()
}

/// `J2 = [[0, -1], [1, 0]]`.
pub fn j2<T: Scalar>(like: &T) -> Mat<T> {
    let o = like.one_like();
    let z = like.zero_like();
    Mat::from_rows(vec![vec![z.clone(), -o.clone()], vec![o, z]])
}

impl<T: Scalar> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, o: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        Mat::from_fn(self.rows, o.cols, |i, j| {
            (1..self.cols).fold(self.get(i, 0).clone() * o.get(0, j).clone(), |acc, k| {
                acc + self.get(i, k).clone() * o.get(k, j).clone()
            })
        })
    }
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, o: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + o.get(i, j).clone()
        })
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, o: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - o.get(i, j).clone()
        })
    }
}

impl<T: Scalar> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T: fmt::Display> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.cols.max(1)).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl CMat {
    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl MatE {
    pub fn to_complex(&self) -> Option<CMat> {
        let data: Option<Vec<Complex64>> = self.data.iter().map(EElem::to_complex).collect();
        Some(Mat::new(self.rows, self.cols, data?))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(EElem::is_integral)
    }

    pub fn is_integral_at(&self, p: u64) -> bool {
        self.data.iter().all(|x| x.is_integral_at(p))
    }

    /// `val_p(m)`: the exponent with `m = p^v m0`, `m0` integral and not divisible by `p`.
    pub fn val_p(&self, p: u64) -> Option<i64> {
        self.data.iter().filter_map(|x| x.val_p(p)).min()
    }

    pub fn from_rational(m: &QMat, alg: super::QuadAlgebra) -> MatE {
        m.map(|x| alg.rational(x.clone()))
    }
}
