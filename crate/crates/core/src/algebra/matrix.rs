use nalgebra::DMatrix;

use super::{Algebra, Quat};
use crate::error::{Error, Result};

/// Cholesky pivots below this fraction of the largest diagonal entry fail.
pub const PD_PIVOT_TOLERANCE: f64 = 1e-12;

/// Allowed relative deviation from `S = S*` when validating Hermitian input.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Dense `rows x cols` matrix over an associative division algebra.
///
/// Storage is row-major with the `beta` real components of every entry
/// interleaved, so `data.len() == beta * rows * cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivMatrix {
    algebra: Algebra,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DivMatrix {
    pub fn new(algebra: Algebra, rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        algebra.require_associative()?;
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        let expected = algebra.beta() * rows * cols;
        if data.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} {} matrix needs {expected} reals, got {}",
                algebra.name(),
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DivMatrix {
            algebra,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(algebra: Algebra, rows: usize, cols: usize) -> Result<Self> {
        Self::new(algebra, rows, cols, vec![0.0; algebra.beta() * rows * cols])
    }

    pub fn identity(algebra: Algebra, n: usize) -> Result<Self> {
        let mut out = Self::zeros(algebra, n, n)?;
        for i in 0..n {
            out.set(i, i, Quat::ONE);
        }
        Ok(out)
    }

    /// Builds a matrix entrywise; components outside the algebra are dropped.
    pub fn from_fn<F>(algebra: Algebra, rows: usize, cols: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Quat,
    {
        let mut out = Self::zeros(algebra, rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, f(i, j));
            }
        }
        if out.data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(out)
    }

    /// Real matrix from row-major values.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(Algebra::Real, rows, cols, values.to_vec())
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn beta(&self) -> usize {
        self.algebra.beta()
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

    /// Flat, beta-interleaved, row-major components.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.rows && j < self.cols);
        (i * self.cols + j) * self.beta()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quat {
        let beta = self.beta();
        let off = self.offset(i, j);
        let mut q = [0.0; 4];
        q[..beta].copy_from_slice(&self.data[off..off + beta]);
        Quat(q)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Quat) {
        let beta = self.beta();
        let off = self.offset(i, j);
        self.data[off..off + beta].copy_from_slice(&value.0[..beta]);
    }

    pub fn conj_transpose(&self) -> DivMatrix {
        let mut out = DivMatrix {
            algebra: self.algebra,
            rows: self.cols,
            cols: self.rows,
            data: vec![0.0; self.data.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    fn check_same_algebra(&self, other: &DivMatrix) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::ShapeMismatch(format!(
                "algebra mismatch: {} vs {}",
                self.algebra.name(),
                other.algebra.name()
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &DivMatrix) -> Result<DivMatrix> {
        self.check_same_algebra(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DivMatrix::zeros(self.algebra, self.rows, other.cols)?;
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Quat::ZERO;
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &DivMatrix, f: impl Fn(f64, f64) -> f64) -> Result<DivMatrix> {
        self.check_same_algebra(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(DivMatrix {
            data,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &DivMatrix) -> Result<DivMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DivMatrix) -> Result<DivMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> DivMatrix {
        DivMatrix {
            data: self.data.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }

    /// `tr(X* X)`: the sum of squares of every real component.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    /// Real part of the trace of a square matrix.
    pub fn trace(&self) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("trace of a non-square matrix".into()));
        }
        Ok((0..self.rows).map(|i| self.get(i, i).re()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    /// `X* X`, assembled from its upper triangle so the result is exactly
    /// Hermitian.
    pub fn gram(&self) -> DivMatrix {
        let m = self.cols;
        let mut out = DivMatrix {
            algebra: self.algebra,
            rows: m,
            cols: m,
            data: vec![0.0; self.beta() * m * m],
        };
        for i in 0..m {
            for j in i..m {
                let mut acc = Quat::ZERO;
                for k in 0..self.rows {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    out.set(i, i, Quat::real(acc.re()));
                } else {
                    out.set(i, j, acc);
                    out.set(j, i, acc.conj());
                }
            }
        }
        out
    }

    /// Real block representation of left multiplication: each entry `x`
    /// becomes the `beta x beta` matrix of `y -> x y`.
    pub fn real_representation(&self) -> DMatrix<f64> {
        let beta = self.beta();
        let mut out = DMatrix::zeros(beta * self.rows, beta * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                for c in 0..beta {
                    let mut basis = [0.0; 4];
                    basis[c] = 1.0;
                    let column = x * Quat(basis);
                    for r in 0..beta {
                        out[(beta * i + r, beta * j + c)] = column.0[r];
                    }
                }
            }
        }
        out
    }

    /// Modified Gram-Schmidt (two passes) yielding `X = Q R` with
    /// `Q* Q = I` and `R` upper triangular. Diagonal entries of `R` are
    /// real and nonnegative; a zero marks a column in the span of the
    /// previous ones, in which case the matching column of `Q` is zero.
    fn gram_schmidt(&self) -> (DivMatrix, DivMatrix) {
        let (n, m) = self.shape();
        let mut q = self.clone();
        let mut r = DivMatrix {
            algebra: self.algebra,
            rows: m,
            cols: m,
            data: vec![0.0; self.beta() * m * m],
        };
        for j in 0..m {
            let original: f64 = (0..n).map(|k| self.get(k, j).norm_sq()).sum::<f64>().sqrt();
            for _pass in 0..2 {
                for i in 0..j {
                    let mut proj = Quat::ZERO;
                    for k in 0..n {
                        proj += q.get(k, i).conj() * q.get(k, j);
                    }
                    for k in 0..n {
                        let updated = q.get(k, j) - q.get(k, i) * proj;
                        q.set(k, j, updated);
                    }
                    let acc = r.get(i, j) + proj;
                    r.set(i, j, acc);
                }
            }
            let norm: f64 = (0..n).map(|k| q.get(k, j).norm_sq()).sum::<f64>().sqrt();
            if norm <= 1e-14 * original.max(f64::MIN_POSITIVE) {
                for k in 0..n {
                    q.set(k, j, Quat::ZERO);
                }
                r.set(j, j, Quat::ZERO);
            } else {
                for k in 0..n {
                    let v = q.get(k, j).scale(1.0 / norm);
                    q.set(k, j, v);
                }
                r.set(j, j, Quat::real(norm));
            }
        }
        (q, r)
    }

    /// Thin QR factorization with a positive real diagonal in `R`.
    pub fn thin_qr(&self) -> Result<(DivMatrix, UpperTriangular)> {
        if self.rows < self.cols {
            return Err(Error::ShapeMismatch(format!(
                "thin QR needs rows >= cols, got {}x{}",
                self.rows, self.cols
            )));
        }
        let (q, r) = self.gram_schmidt();
        let r = UpperTriangular::new(r)?;
        Ok((q, r))
    }

    /// Leading principal minors of `X* X`, computed from the QR factor of
    /// `X` so that rank-deficient inputs give exact zeros rather than
    /// negative round-off.
    pub fn gram_minors(&self) -> Vec<f64> {
        let (_, r) = self.gram_schmidt();
        let mut acc = 1.0;
        (0..self.cols)
            .map(|i| {
                acc *= r.get(i, i).norm_sq();
                acc
            })
            .collect()
    }
}

/// Upper triangular matrix with a strictly positive real diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperTriangular {
    matrix: DivMatrix,
}

impl UpperTriangular {
    pub fn new(matrix: DivMatrix) -> Result<Self> {
        let (n, m) = matrix.shape();
        if n != m {
            return Err(Error::ShapeMismatch("triangular matrix must be square".into()));
        }
        for i in 0..n {
            let d = matrix.get(i, i);
            if !(d.re() > 0.0) || d.0[1..].iter().any(|&x| x != 0.0) {
                return Err(Error::NotTriangular);
            }
            for j in 0..i {
                if matrix.get(i, j) != Quat::ZERO {
                    return Err(Error::NotTriangular);
                }
            }
        }
        Ok(UpperTriangular { matrix })
    }

    pub fn identity(algebra: Algebra, m: usize) -> Result<Self> {
        Ok(UpperTriangular {
            matrix: DivMatrix::identity(algebra, m)?,
        })
    }

    pub fn matrix(&self) -> &DivMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DivMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn algebra(&self) -> Algebra {
        self.matrix.algebra()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix.get(i, i).re()).collect()
    }

    /// Inverse by back substitution; again upper triangular.
    pub fn inverse(&self) -> UpperTriangular {
        let m = self.dim();
        let t = &self.matrix;
        let mut inv = DivMatrix::zeros(t.algebra(), m, m).expect("valid shape");
        for col in 0..m {
            for i in (0..=col).rev() {
                let mut s = if i == col { Quat::ONE } else { Quat::ZERO };
                for j in (i + 1)..=col {
                    s -= t.get(i, j) * inv.get(j, col);
                }
                inv.set(i, col, s.scale(1.0 / t.get(i, i).re()));
            }
        }
        UpperTriangular { matrix: inv }
    }

    /// `T* T`.
    pub fn gram(&self) -> HermitianPD {
        let s = self.matrix.gram();
        HermitianPD::from_parts(s, self.clone())
    }
}

/// Hermitian positive definite matrix together with its upper Cholesky
/// factor `S = T* T`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPD {
    matrix: DivMatrix,
    chol: UpperTriangular,
    /// Squared Cholesky pivots, kept before the square root so that
    /// diagonal inputs give exact minors.
    pivots: Vec<f64>,
}

impl HermitianPD {
    /// Validates Hermitian symmetry and positive definiteness.
    pub fn new(matrix: DivMatrix) -> Result<Self> {
        let (n, m) = matrix.shape();
        if n != m {
            return Err(Error::ShapeMismatch("Hermitian matrix must be square".into()));
        }
        let scale = matrix.max_abs().max(f64::MIN_POSITIVE);
        let mut deviation = 0.0_f64;
        for i in 0..m {
            let d = matrix.get(i, i);
            deviation = deviation.max((d.conj() - d).max_abs_component() / 2.0);
            for j in (i + 1)..m {
                let d = matrix.get(i, j) - matrix.get(j, i).conj();
                deviation = deviation.max(d.max_abs_component());
            }
        }
        if deviation > HERMITIAN_TOLERANCE * scale {
            return Err(Error::NotHermitian(deviation));
        }
        let mut sym = matrix;
        for i in 0..m {
            sym.set(i, i, Quat::real(sym.get(i, i).re()));
            for j in (i + 1)..m {
                let upper = sym.get(i, j);
                sym.set(j, i, upper.conj());
            }
        }
        let (chol, pivots) = cholesky(&sym)?;
        Ok(HermitianPD {
            matrix: sym,
            chol,
            pivots,
        })
    }

    fn from_parts(matrix: DivMatrix, chol: UpperTriangular) -> Self {
        let pivots = chol.diagonal().into_iter().map(|t| t * t).collect();
        HermitianPD {
            matrix,
            chol,
            pivots,
        }
    }

    pub fn identity(algebra: Algebra, m: usize) -> Result<Self> {
        Ok(HermitianPD {
            matrix: DivMatrix::identity(algebra, m)?,
            chol: UpperTriangular::identity(algebra, m)?,
            pivots: vec![1.0; m],
        })
    }

    /// Real positive diagonal matrix.
    pub fn diagonal(algebra: Algebra, diag: &[f64]) -> Result<Self> {
        let m = diag.len();
        let d = DivMatrix::from_fn(algebra, m, m, |i, j| {
            if i == j {
                Quat::real(diag[i])
            } else {
                Quat::ZERO
            }
        })?;
        Self::new(d)
    }

    /// `X* X` for a full-column-rank `X`. The Cholesky factor is the `R`
    /// of a QR factorization of `X`, which stays accurate when `X* X` is
    /// badly conditioned.
    pub fn from_gram(x: &DivMatrix) -> Result<Self> {
        if x.rows < x.cols {
            return Err(Error::NotPositiveDefinite { index: x.rows, pivot: 0.0 });
        }
        let (_, r) = x.gram_schmidt();
        if let Some(index) = (0..x.cols).find(|&i| r.get(i, i).re() <= 0.0) {
            return Err(Error::NotPositiveDefinite { index, pivot: 0.0 });
        }
        Ok(Self::from_parts(x.gram(), UpperTriangular::new(r)?))
    }

    pub fn matrix(&self) -> &DivMatrix {
        &self.matrix
    }

    pub fn algebra(&self) -> Algebra {
        self.matrix.algebra()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Upper Cholesky factor `u(S)` with `S = u(S)* u(S)`.
    pub fn cholesky_upper(&self) -> &UpperTriangular {
        &self.chol
    }

    /// Leading principal minors `|S_1|, ..., |S_m|` as cumulative products
    /// of squared Cholesky pivots.
    pub fn principal_minors(&self) -> Vec<f64> {
        let mut acc = 1.0;
        self.pivots
            .iter()
            .map(|p| {
                acc *= p;
                acc
            })
            .collect()
    }

    pub fn ln_principal_minors(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.pivots
            .iter()
            .map(|p| {
                acc += p.ln();
                acc
            })
            .collect()
    }

    /// Real determinant (the Moore determinant for quaternions).
    pub fn det(&self) -> f64 {
        *self.principal_minors().last().expect("dim >= 1")
    }

    pub fn ln_det(&self) -> f64 {
        *self.ln_principal_minors().last().expect("dim >= 1")
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().expect("square")
    }

    /// `T* S T` for an upper triangular `T`.
    pub fn congruence(&self, t: &UpperTriangular) -> Result<HermitianPD> {
        let m = t.matrix().conj_transpose().matmul(&self.matrix)?.matmul(t.matrix())?;
        HermitianPD::new(m)
    }

    /// `u(by)^{-*} S u(by)^{-1}`.
    pub fn whiten(&self, by: &HermitianPD) -> Result<HermitianPD> {
        self.congruence(&by.cholesky_upper().inverse())
    }

    /// `tr(by^{-1} S)`, computed as the trace of the whitened matrix.
    pub fn trace_against(&self, by: &HermitianPD) -> Result<f64> {
        let inv = by.cholesky_upper().inverse();
        let w = inv.matrix().conj_transpose().matmul(&self.matrix)?.matmul(inv.matrix())?;
        w.trace()
    }
}

/// Upper Cholesky factorization of a Hermitian matrix.
fn cholesky(s: &DivMatrix) -> Result<(UpperTriangular, Vec<f64>)> {
    let m = s.rows();
    let max_diag = (0..m).map(|i| s.get(i, i).re()).fold(0.0_f64, f64::max);
    let threshold = PD_PIVOT_TOLERANCE * max_diag;
    let mut t = DivMatrix::zeros(s.algebra(), m, m)?;
    let mut pivots = Vec::with_capacity(m);
    for j in 0..m {
        for i in 0..=j {
            let mut acc = s.get(i, j);
            for k in 0..i {
                acc -= t.get(k, i).conj() * t.get(k, j);
            }
            if i == j {
                let pivot = acc.re();
                if !(pivot > threshold) || max_diag <= 0.0 {
                    return Err(Error::NotPositiveDefinite { index: j, pivot });
                }
                t.set(j, j, Quat::real(pivot.sqrt()));
                pivots.push(pivot);
            } else {
                t.set(i, j, acc.scale(1.0 / t.get(i, i).re()));
            }
        }
    }
    Ok((UpperTriangular::new(t)?, pivots))
}
