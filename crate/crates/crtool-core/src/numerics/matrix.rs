use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major data. Fails on length mismatch or non-finite entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch);
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn column_vector(v: &[C64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Matrix whose columns are the given vectors (all of equal length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vec<C64>]) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: C64, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in axpy");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows).map(|i| dot_u(self.row(i), v)).collect()
    }

    /// `self* v`
    pub fn adjoint_mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.rows, v.len(), "shape mismatch in adjoint_mul_vec");
        let mut out = vec![C64::new(0.0, 0.0); self.cols];
        for i in 0..self.rows {
            for (j, o) in out.iter_mut().enumerate() {
                *o += self[(i, j)].conj() * v[i];
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Submatrix of the given columns.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "shape mismatch in hstack");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    /// Outer product `x yᵀ` (no conjugation).
    pub fn outer_t(x: &[C64], y: &[C64]) -> Self {
        Self::from_fn(x.len(), y.len(), |i, j| x[i] * y[j])
    }

    /// Outer product `x y*`.
    pub fn outer_h(x: &[C64], y: &[C64]) -> Self {
        Self::from_fn(x.len(), y.len(), |i, j| x[i] * y[j].conj())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Hermitian inner product `x* y`.
pub fn dot_h(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).fold(C64::new(0.0, 0.0), |s, (a, b)| s + a.conj() * b)
}

/// Bilinear product `xᵀ y`.
pub fn dot_u(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).fold(C64::new(0.0, 0.0), |s, (a, b)| s + a * b)
}

pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn scale_vec(x: &[C64], c: C64) -> Vec<C64> {
    x.iter().map(|&z| z * c).collect()
}

pub fn sub_vec(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn add_vec(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn conj_vec(x: &[C64]) -> Vec<C64> {
    x.iter().map(|z| z.conj()).collect()
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Vectors whose
/// residual norm falls below `drop_tol` (relative to their input norm) are skipped.
pub fn orthonormalize(vectors: &[Vec<C64>], drop_tol: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        let n0 = norm(v);
        if n0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot_h(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = norm(&w);
        if n > drop_tol * n0 {
            basis.push(scale_vec(&w, C64::new(1.0 / n, 0.0)));
        }
    }
    basis
}

/// Orthogonal projection of `v` onto the orthogonal complement of the
/// span of the orthonormal columns `basis`.
pub fn project_out(v: &[C64], basis: &ComplexMatrix) -> Vec<C64> {
    let mut w = v.to_vec();
    for j in 0..basis.cols() {
        let b = basis.column(j);
        let c = dot_h(&b, &w);
        for (wi, bi) in w.iter_mut().zip(&b) {
            *wi -= c * bi;
        }
    }
    w
}

/// Determinant by LU with partial pivoting.
pub fn det(a: &ComplexMatrix) -> C64 {
    assert_eq!(a.rows(), a.cols(), "det of non-square matrix");
    let n = a.rows();
    let mut m = a.data.clone();
    let mut d = C64::new(1.0, 0.0);
    for k in 0..n {
        let mut p = k;
        let mut best = m[k * n + k].norm();
        for i in k + 1..n {
            let x = m[i * n + k].norm();
            if x > best {
                best = x;
                p = i;
            }
        }
        if best == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            d = -d;
        }
        let piv = m[k * n + k];
        d *= piv;
        for i in k + 1..n {
            let f = m[i * n + k] / piv;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let t = m[k * n + j];
                m[i * n + j] -= f * t;
            }
        }
    }
    d
}

/// Pfaffian of a skew-symmetric matrix (Parlett–Reid elimination with pivoting).
pub fn pfaffian(a: &ComplexMatrix) -> C64 {
    assert_eq!(a.rows(), a.cols(), "pfaffian of non-square matrix");
    let n = a.rows();
    if n % 2 == 1 {
        return C64::new(0.0, 0.0);
    }
    let mut m = a.data.clone();
    let mut pf = C64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = m[(k + 1) * n + k].norm();
        for i in k + 2..n {
            let x = m[i * n + k].norm();
            if x > best {
                best = x;
                kp = i;
            }
        }
        if best == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if kp != k + 1 {
            for j in 0..n {
                m.swap((k + 1) * n + j, kp * n + j);
            }
            for i in 0..n {
                m.swap(i * n + k + 1, i * n + kp);
            }
            pf = -pf;
        }
        let akk1 = m[k * n + k + 1];
        pf *= akk1;
        if k + 2 < n {
            let tau: Vec<C64> = (k + 2..n).map(|j| m[k * n + j] / akk1).collect();
            let col: Vec<C64> = (k + 2..n).map(|i| m[i * n + k + 1]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[i * n + j] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}

/// Solves `A x = b` for square `A` by LU with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    if a.cols() != n || b.rows() != n {
        return Err(Error::ShapeMismatch);
    }
    let nrhs = b.cols();
    let mut m = a.data.clone();
    let mut x = b.data.clone();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let mut p = k;
        let mut best = m[k * n + k].norm();
        for i in k + 1..n {
            let v = m[i * n + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= 1e-14 * scale {
            return Err(Error::Singular);
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            for j in 0..nrhs {
                x.swap(k * nrhs + j, p * nrhs + j);
            }
        }
        let piv = m[k * n + k];
        for i in k + 1..n {
            let f = m[i * n + k] / piv;
            for j in k..n {
                let t = m[k * n + j];
                m[i * n + j] -= f * t;
            }
            for j in 0..nrhs {
                let t = x[k * nrhs + j];
                x[i * nrhs + j] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        for j in 0..nrhs {
            let mut s = x[k * nrhs + j];
            for l in k + 1..n {
                s -= m[k * n + l] * x[l * nrhs + j];
            }
            x[k * nrhs + j] = s / m[k * n + k];
        }
    }
    Ok(ComplexMatrix { rows: n, cols: nrhs, data: x })
}
