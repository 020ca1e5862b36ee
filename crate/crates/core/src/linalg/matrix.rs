use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "CMat::from_vec: wrong buffer length");
        CMat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Complex64>]) -> Self {
        let mut m = CMat::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for i in 0..rows {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "matmul: inner dimensions differ");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn scale(&self, s: f64) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add_scaled(&mut self, s: f64, other: &CMat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `Re tr(self · other)`; equals the trace inner product when `self` is hermitian.
    pub fn trace_product_re(&self, other: &CMat) -> f64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut s = 0.0;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                let b = other.data[k * other.cols + i];
                s += a.re * b.re - a.im * b.im;
            }
        }
        s
    }

    /// `Re tr(self* · other)`.
    pub fn inner(&self, other: &CMat) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(self + self*) / 2`.
    pub fn hermitian_part(&self) -> CMat {
        assert_eq!(self.rows, self.cols);
        CMat::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Conjugation `self* · a · self`.
    pub fn congruence(&self, a: &CMat) -> CMat {
        self.adjoint().matmul(&a.matmul(self))
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Dense hermitian matrix. Construction symmetrizes, so `a[i][j] == conj(a[j][i])`
/// holds exactly and the diagonal is real.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMat,
}

impl HermitianMatrix {
    /// Builds from row-major entries, replacing `a` by `(a + a*) / 2`.
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("matrix dimension must be positive"));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Self::from_cmat(&CMat::from_vec(n, n, entries)))
    }

    pub fn from_cmat(m: &CMat) -> Self {
        assert_eq!(m.rows(), m.cols(), "hermitian matrix must be square");
        let mut h = m.hermitian_part();
        for i in 0..h.rows() {
            h[(i, i)].im = 0.0;
        }
        HermitianMatrix { inner: h }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: r.len() });
            }
            entries.extend(r.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix { inner: CMat::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix { inner: CMat::identity(n) }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = CMat::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        HermitianMatrix { inner: m }
    }

    /// `Σ_j v_j v_j*` over the given vectors.
    pub fn outer_sum(n: usize, vectors: &[Vec<Complex64>]) -> Self {
        let mut m = CMat::zeros(n, n);
        for v in vectors {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        Self::from_cmat(&m)
    }

    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn entries(&self) -> &[Complex64] {
        self.inner.data()
    }

    pub fn as_cmat(&self) -> &CMat {
        &self.inner
    }

    pub fn diagonal_values(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.inner[(i, i)].re).collect()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.inner[(i, j)].norm() <= tol))
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace().re
    }

    /// Hilbert–Schmidt inner product `tr(a* b)`, real for hermitian arguments.
    pub fn inner(&self, other: &HermitianMatrix) -> f64 {
        self.inner.inner(&other.inner)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix { inner: self.inner.scale(s) }
    }

    pub fn add_scaled(&mut self, s: f64, other: &HermitianMatrix) {
        self.inner.add_scaled(s, &other.inner);
    }

    pub fn matmul(&self, other: &HermitianMatrix) -> CMat {
        self.inner.matmul(&other.inner)
    }

    /// Real linear combination `Σ c_i m_i`.
    pub fn combination(coeffs: &[f64], mats: &[HermitianMatrix]) -> Self {
        assert_eq!(coeffs.len(), mats.len());
        assert!(!mats.is_empty(), "combination of no matrices");
        let mut out = HermitianMatrix::zeros(mats[0].n());
        for (c, m) in coeffs.iter().zip(mats) {
            if *c != 0.0 {
                out.add_scaled(*c, m);
            }
        }
        out
    }

    pub fn kron(&self, other: &HermitianMatrix) -> Self {
        let (n, m) = (self.n(), other.n());
        let k = CMat::from_fn(n * m, n * m, |i, j| {
            self.inner[(i / m, j / m)] * other.inner[(i % m, j % m)]
        });
        HermitianMatrix { inner: k }
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &HermitianMatrix) -> Self {
        let (n, m) = (self.n(), other.n());
        let mut out = CMat::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.inner[(i, j)];
            }
        }
        for i in 0..m {
            for j in 0..m {
                out[(n + i, n + j)] = other.inner[(i, j)];
            }
        }
        HermitianMatrix { inner: out }
    }

    /// Real coordinates with respect to the orthonormal basis of all hermitian
    /// matrices: diagonal entries, then `√2·Re` and `√2·Im` of the upper triangle.
    pub fn real_coordinates(&self) -> Vec<f64> {
        let n = self.n();
        let s = std::f64::consts::SQRT_2;
        let mut v = Vec::with_capacity(n * n);
        for i in 0..n {
            v.push(self.inner[(i, i)].re);
        }
        for i in 0..n {
            for j in i + 1..n {
                v.push(s * self.inner[(i, j)].re);
                v.push(s * self.inner[(i, j)].im);
            }
        }
        v
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        let mut out = self.clone();
        out.add_scaled(1.0, rhs);
        out
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        let mut out = self.clone();
        out.add_scaled(-1.0, rhs);
        out
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, s: f64) -> HermitianMatrix {
        self.scale(s)
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.inner)
    }
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn vec_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Cholesky factor `L` with `a = L L*` for hermitian positive definite `a`.
pub(crate) fn cholesky(a: &CMat) -> Option<CMat> {
    let n = a.rows();
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

/// Solves `L x = b` for lower-triangular `L`, column by column.
pub(crate) fn lower_solve(l: &CMat, b: &CMat) -> CMat {
    let n = l.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    x
}

/// Inverse of a hermitian positive definite matrix.
pub(crate) fn inverse_hpd(a: &CMat) -> Option<CMat> {
    let l = cholesky(a)?;
    let linv = lower_solve(&l, &CMat::identity(a.rows()));
    Some(linv.adjoint().matmul(&linv))
}

/// Solves a real symmetric positive definite system; falls back to
/// Gaussian elimination with partial pivoting if Cholesky breaks down.
pub(crate) fn solve_spd(m: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut ok = true;
    'outer: for j in 0..n {
        let mut d = m[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > 0.0) {
            ok = false;
            break 'outer;
        }
        let djj = d.sqrt();
        l[j][j] = djj;
        for i in j + 1..n {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / djj;
        }
    }
    if ok {
        let mut y = rhs.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= l[i][k] * y[k];
            }
            y[i] /= l[i][i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= l[k][i] * y[k];
            }
            y[i] /= l[i][i];
        }
        return Some(y);
    }
    solve_general(m, rhs)
}

pub(crate) fn solve_general(m: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = m.iter().zip(rhs).map(|(r, &b)| {
        let mut row = r.clone();
        row.push(b);
        row
    }).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = a[i][n];
        for k in i + 1..n {
            s -= a[i][k] * x[k];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn construction_symmetrizes() {
        let h = HermitianMatrix::new(2, vec![c(1.0, 0.3), c(2.0, 1.0), c(0.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert_eq!(h.get(0, 1), h.get(1, 0).conj());
        assert_eq!(h.get(0, 0).im, 0.0);
        assert_eq!(h.get(0, 1), c(1.0, 0.5));
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(matches!(
            HermitianMatrix::new(2, vec![ONE; 3]),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn kron_of_identities() {
        let k = HermitianMatrix::identity(2).kron(&HermitianMatrix::identity(3));
        assert_eq!(k, HermitianMatrix::identity(6));
    }

    #[test]
    fn real_coordinates_are_isometric() {
        let a = HermitianMatrix::new(2, vec![c(1.0, 0.0), c(2.0, -1.0), c(2.0, 1.0), c(-3.0, 0.0)]).unwrap();
        let b = HermitianMatrix::new(2, vec![c(0.5, 0.0), c(0.0, 4.0), c(0.0, -4.0), c(1.0, 0.0)]).unwrap();
        let (ca, cb) = (a.real_coordinates(), b.real_coordinates());
        let dot: f64 = ca.iter().zip(&cb).map(|(x, y)| x * y).sum();
        assert!((dot - a.inner(&b)).abs() < 1e-12);
    }

    #[test]
    fn cholesky_inverse_roundtrip() {
        let a = CMat::from_vec(2, 2, vec![c(4.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(3.0, 0.0)]);
        let inv = inverse_hpd(&a).unwrap();
        let id = a.matmul(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { ONE } else { ZERO };
                assert!((id[(i, j)] - expect).norm() < 1e-12);
            }
        }
    }
}
