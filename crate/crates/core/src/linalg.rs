//! Small dense matrices over any [`Scalar`], plus floating-point helpers built
//! on nalgebra.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::scalar::{Scalar, C64};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<S>]) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = &self[(i, t)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(t, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(S::zero(), |acc, j| {
                    let a = &self[(i, j)];
                    if a.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        acc + a.clone() * v[j].clone()
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + o[(i, j)].clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - o[(i, j)].clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() * c.clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn to_c64(&self) -> Mat<C64> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|c| c.to_c64()).collect() }
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_c64())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

impl Mat<C64> {
    pub fn from_dmatrix(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean norm of a vector.
pub fn vec_norm<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|c| c.magnitude().powi(2)).sum::<f64>().sqrt()
}

/// `⟨x, y⟩ = Σ x_i conj(y_i)`.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

/// Smallest singular value (0 for matrices with more columns than rows).
pub fn min_singular_value(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() || m.ncols() > m.nrows() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Eigenvalues of a square complex matrix via the Schur form.
pub fn eigenvalues(m: &DMatrix<C64>) -> Vec<C64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.clone()
        .try_schur(f64::EPSILON, 0)
        .and_then(|s| s.eigenvalues())
        .map(|e| e.iter().copied().collect())
        .unwrap_or_default()
}

/// Numerical rank of the column span and an orthonormal basis for it. Singular
/// values at most `rel_tol·σ_max` count as zero.
pub fn column_space(m: &DMatrix<C64>, rel_tol: f64) -> (usize, DMatrix<C64>) {
    if m.ncols() == 0 || m.nrows() == 0 {
        return (0, DMatrix::zeros(m.nrows(), 0));
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let s = &svd.singular_values;
    let smax = s.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return (0, DMatrix::zeros(m.nrows(), 0));
    }
    let keep: Vec<usize> = (0..s.len()).filter(|&i| s[i] > rel_tol * smax).collect();
    let basis = DMatrix::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])]);
    (keep.len(), basis)
}

/// Orthonormal basis of the orthogonal complement of the column span of `m`
/// (rows of `m` index the ambient space).
pub fn orthogonal_complement(m: &DMatrix<C64>, rel_tol: f64) -> DMatrix<C64> {
    let n = m.nrows();
    if m.ncols() == 0 {
        return DMatrix::identity(n, n);
    }
    // Pad with zero columns so the full left singular basis is available.
    let mut padded = DMatrix::<C64>::zeros(n, m.ncols().max(n));
    padded.view_mut((0, 0), (n, m.ncols())).copy_from(m);
    let svd = padded.svd(true, false);
    let u = svd.u.expect("requested U");
    let s = &svd.singular_values;
    let smax = s.iter().copied().fold(0.0, f64::max);
    let null: Vec<usize> = (0..n).filter(|&i| smax == 0.0 || s[i] <= rel_tol * smax).collect();
    DMatrix::from_fn(n, null.len(), |i, j| u[(i, null[j])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactComplex;

    #[test]
    fn exact_products() {
        let a = Mat::from_fn(2, 2, |i, j| ExactComplex::from_ints((i + 2 * j) as i64, 1));
        let id = Mat::identity(2);
        assert_eq!(a.mul(&id), a);
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn rank_and_complement() {
        let m = DMatrix::from_fn(3, 2, |i, j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
        let (r, basis) = column_space(&m, 1e-12);
        assert_eq!(r, 2);
        assert_eq!(basis.ncols(), 2);
        let c = orthogonal_complement(&m, 1e-12);
        assert_eq!(c.ncols(), 1);
        assert!((c[(2, 0)].norm() - 1.0).abs() < 1e-12);
    }
}
