//! Stack-allocated vectors, matrices and rank-3 tensors of dimension ≤ 4.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::real::Real;

pub const MAX_DIM: usize = 4;

/// Small dense vector with runtime length `len ≤ 4`.
///
/// The same type stands in for points, tangent vectors and covectors; the
/// role is carried by the argument name at each call site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SVec<T> {
    len: usize,
    data: [T; MAX_DIM],
}

pub type Vector = SVec<f64>;
pub type Point = Vector;
pub type Covector = Vector;

impl<T: Real> SVec<T> {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        SVec { len: n, data: [T::zero(); MAX_DIM] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> T) -> Self {
        let mut v = Self::zeros(n);
        for i in 0..n {
            v.data[i] = f(i);
        }
        v
    }

    pub fn from_slice(s: &[T]) -> Self {
        Self::from_fn(s.len(), |i| s[i])
    }

    pub fn lift(v: &Vector) -> Self {
        Self::from_fn(v.len(), |i| T::cst(v[i]))
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[i] = T::cst(1.0);
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data[..self.len]
    }

    pub fn re(&self) -> Vector {
        SVec::from_fn(self.len, |i| self.data[i].re())
    }

    pub fn dot(&self, o: &Self) -> T {
        debug_assert_eq!(self.len, o.len);
        let mut s = T::zero();
        for i in 0..self.len {
            s += self.data[i] * o.data[i];
        }
        s
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        SVec::from_fn(self.len, |i| self.data[i] * s)
    }

    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> SVec<U> {
        SVec::from_fn(self.len, |i| f(self.data[i]))
    }

    /// True when every real part is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.as_slice().iter().all(|c| c.re() == 0.0)
    }
}

impl Vector {
    pub fn max_abs(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }
}

impl<T> Index<usize> for SVec<T> {
    type Output = T;
    #[inline]
    fn index(&self, i: usize) -> &T {
        debug_assert!(i < self.len);
        &self.data[i]
    }
}

impl<T> IndexMut<usize> for SVec<T> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut T {
        debug_assert!(i < self.len);
        &mut self.data[i]
    }
}

impl<T: Real> Add for SVec<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.len, o.len);
        SVec::from_fn(self.len, |i| self.data[i] + o.data[i])
    }
}

impl<T: Real> Sub for SVec<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        debug_assert_eq!(self.len, o.len);
        SVec::from_fn(self.len, |i| self.data[i] - o.data[i])
    }
}

impl<T: Real> Neg for SVec<T> {
    type Output = Self;
    fn neg(self) -> Self {
        SVec::from_fn(self.len, |i| -self.data[i])
    }
}

impl<T: Real> Mul<f64> for SVec<T> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        SVec::from_fn(self.len, |i| self.data[i] * s)
    }
}

impl Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        if v.is_empty() || v.len() > MAX_DIM {
            return Err(serde::de::Error::custom(format!(
                "vector length {} outside 1..={MAX_DIM}",
                v.len()
            )));
        }
        Ok(Vector::from_slice(&v))
    }
}

/// Dense row-major matrix with at most 4 rows and 4 columns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    a: [[f64; MAX_DIM]; MAX_DIM],
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows <= MAX_DIM && cols <= MAX_DIM);
        Matrix { rows, cols, a: [[0.0; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.a[i][i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.a[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn diag(d: &[f64]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.a[j][i])
    }

    pub fn mul_vec<T: Real>(&self, v: &SVec<T>) -> SVec<T> {
        debug_assert_eq!(self.cols, v.len());
        SVec::from_fn(self.rows, |i| {
            let mut s = T::zero();
            for j in 0..self.cols {
                s += v[j] * self.a[i][j];
            }
            s
        })
    }

    pub fn matmul(&self, o: &Matrix) -> Matrix {
        debug_assert_eq!(self.cols, o.rows);
        Self::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).map(|k| self.a[i][k] * o.a[k][j]).sum()
        })
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        Self::from_fn(self.rows, self.cols, |i, j| self.a[i][j] + o.a[i][j])
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        Self::from_fn(self.rows, self.cols, |i, j| self.a[i][j] - o.a[i][j])
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Self::from_fn(self.rows, self.cols, |i, j| self.a[i][j] * s)
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_fn(self.rows, |i| self.a[i][j])
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.a[i][i]).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += self.a[i][j] * self.a[i][j];
            }
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                m = m.max(self.a[i][j].abs());
            }
        }
        m
    }

    /// `max |a_ij − a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..i {
                m = m.max((self.a[i][j] - self.a[j][i]).abs());
            }
        }
        m
    }

    pub fn symmetrized(&self) -> Matrix {
        Self::from_fn(self.rows, self.cols, |i, j| 0.5 * (self.a[i][j] + self.a[j][i]))
    }

    /// Quadratic form `uᵀ A v`.
    pub fn bilinear(&self, u: &Vector, v: &Vector) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += u[i] * self.a[i][j] * v[j];
            }
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.a[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.a[i][j]
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> =
            (0..self.rows).map(|i| self.a[i][..self.cols].to_vec()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        if rows.is_empty() || rows.len() > MAX_DIM {
            return Err(serde::de::Error::custom("matrix must have 1..=4 rows"));
        }
        let c = rows[0].len();
        if c == 0 || c > MAX_DIM || rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("matrix rows must have equal length 1..=4"));
        }
        Ok(Matrix::from_rows(&rows))
    }
}

/// `T[i][j][k]`, used for connection coefficients `Γ^i_jk`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tensor3 {
    n: usize,
    t: [[[f64; MAX_DIM]; MAX_DIM]; MAX_DIM],
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Tensor3 { n, t: [[[0.0; MAX_DIM]; MAX_DIM]; MAX_DIM] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `Γ^i_jk u^j v^k`.
    pub fn contract(&self, u: &Vector, v: &Vector) -> Vector {
        Vector::from_fn(self.n, |i| {
            let mut s = 0.0;
            for j in 0..self.n {
                for k in 0..self.n {
                    s += self.t[i][j][k] * u[j] * v[k];
                }
            }
            s
        })
    }

    /// `max |Γ^i_jk − Γ^i_kj|`.
    pub fn lower_asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..j {
                    m = m.max((self.t[i][j][k] - self.t[i][k][j]).abs());
                }
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    m = m.max(self.t[i][j][k].abs());
                }
            }
        }
        m
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &f64 {
        &self.t[i][j][k]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    #[inline]
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut f64 {
        &mut self.t[i][j][k]
    }
}
