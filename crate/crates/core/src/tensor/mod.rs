//! Dense complex linear algebra used by every numeric check: Hermitian
//! eigendecomposition, Schmidt analysis, Kronecker products, partial
//! transpose and PSD projection.
//!
//! Matrices are plain row-major `Vec<Complex64>` buffers; everything here is
//! pure and safe to call from many threads. Sides up to a few hundred are
//! the design point — all desk-scale instances in this crate stay at or
//! below 19x19 = 361.

mod eig;
mod partial;
mod schmidt;

pub use eig::{hermitian_eig, hermitian_eigenvalues, psd_project};
pub use partial::{partial_trace, partial_transpose, Side, TraceSide};
pub use schmidt::{schmidt, SchmidtDecomposition};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Bipartite tensor factorization `dim_a (x) dim_b` of a vector or operator.
///
/// Composite index convention: `(a, b) -> a * dim_b + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteShape {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl BipartiteShape {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::ShapeError(format!(
                "bipartite dimensions must be >= 1, got {dim_a} x {dim_b}"
            )));
        }
        Ok(BipartiteShape { dim_a, dim_b })
    }

    /// Total dimension of the composite space.
    pub fn side(&self) -> usize {
        self.dim_a * self.dim_b
    }

    #[inline]
    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.dim_b + b
    }

    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.dim_b, idx % self.dim_b)
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeError("ragged row lengths".into()));
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = ComplexMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Rank-one operator |u><v|.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = ComplexMatrix::zeros(u.len(), v.len());
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut m = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        // i-k-j loop order keeps both operands row-contiguous.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += aik * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::ShapeError(format!(
                "matvec {}x{} by {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a * x)
                    .sum::<Complex64>()
            })
            .collect())
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &ComplexMatrix,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeError(format!(
                "elementwise op on {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    /// In-place `self += s * other`.
    pub fn add_scaled_assign(&mut self, s: f64, other: &ComplexMatrix) {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius inner product <self, other> = Tr(self^dag other).
    pub fn frobenius_inner(&self, other: &ComplexMatrix) -> Complex64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a.conj() * b)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Kronecker product.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// `||M - M^dag||_F <= tol * max(1, ||M||_F)`?
    pub fn is_hermitian(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                dev += d.norm_sqr() * if i == j { 1.0 } else { 2.0 };
            }
        }
        dev.sqrt() <= tol * self.frobenius_norm().max(1.0)
    }

    /// Replace by the Hermitian part (M + M^dag)/2.
    pub fn hermitianize(&mut self) {
        assert!(self.is_square());
        for i in 0..self.rows {
            let dii = self[(i, i)];
            self[(i, i)] = Complex64::new(dii.re, 0.0);
            for j in (i + 1)..self.cols {
                let avg = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                self[(i, j)] = avg;
                self[(j, i)] = avg.conj();
            }
        }
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = hermitian_eig(self)?;
        Ok(vals.last().copied().unwrap_or(0.0))
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Inner product <u|v> (conjugate-linear in the first argument).
pub fn vec_inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(&a, &b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_identity() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| c((i * 3 + j) as f64, 1.0));
        let id = ComplexMatrix::identity(3);
        assert_eq!(a.mul(&id).unwrap(), a);
        assert_eq!(id.mul(&a).unwrap(), a);
    }

    #[test]
    fn dagger_involution() {
        let a = ComplexMatrix::from_fn(2, 4, |i, j| c(i as f64, j as f64));
        assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn kron_product_dims() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c((i + j) as f64, 0.0));
        let k = a.kron(&b);
        assert_eq!(k.rows(), 6);
        assert_eq!(k[(4, 4)], b[(1, 1)]);
        assert_eq!(k[(0, 3)], c(0.0, 0.0));
    }

    #[test]
    fn hermitian_check() {
        let mut a = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 3.0)],
            vec![c(2.0, -3.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        assert!(a.is_hermitian(1e-12));
        a[(0, 1)] = c(2.0, 3.1);
        assert!(!a.is_hermitian(1e-12));
        a.hermitianize();
        assert!(a.is_hermitian(0.0));
    }
}
