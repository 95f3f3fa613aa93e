//! Numerical Jacobians of the linear map `X -> A X B` and of the Cholesky
//! map `T -> T* T`.

use nalgebra::DMatrix;

use super::CheckReport;
use crate::algebra::{DivMatrix, HermitianPD, Quat, UpperTriangular};
use crate::error::{Error, Result};

/// `ln |det|` of `X -> A X B` as a real linear map on `beta n m` coordinates.
pub fn ln_linear_map_determinant(a: &DivMatrix, b: &DivMatrix) -> Result<f64> {
    let alg = a.algebra();
    alg.require_associative()?;
    let (n, m) = (a.rows(), b.rows());
    if a.cols() != n || b.cols() != m || b.algebra() != alg {
        return Err(Error::ShapeMismatch("A and B must be square over one algebra".into()));
    }
    let dim = alg.beta() * n * m;
    let mut jac = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..dim {
        let mut basis = vec![0.0; dim];
        basis[k] = 1.0;
        let x = DivMatrix::new(alg, n, m, basis)?;
        let y = a.matmul(&x)?.matmul(b)?;
        for (row, &v) in y.as_slice().iter().enumerate() {
            jac[(row, k)] = v;
        }
    }
    let det = jac.determinant();
    if det == 0.0 || !det.is_finite() {
        return Err(Error::Parameter("A or B is singular".into()));
    }
    Ok(det.abs().ln())
}

/// Compares the determinant of `X -> A X B` with
/// `|A* A|^{a_exponent} |B* B|^{b_exponent}`; passes at relative error `tol`.
pub fn jacobian_check_linear(
    name: &str,
    a: &DivMatrix,
    b: &DivMatrix,
    a_exponent: f64,
    b_exponent: f64,
    tol: f64,
) -> Result<CheckReport> {
    let ln_map = ln_linear_map_determinant(a, b)?;
    let ln_pred = a_exponent * HermitianPD::from_gram(a)?.ln_det() + b_exponent * HermitianPD::from_gram(b)?.ln_det();
    let rel = (ln_map - ln_pred).exp_m1().abs();
    Ok(CheckReport::relative(name, ln_map.exp(), ln_pred.exp(), rel, tol, a.as_slice().len() + b.as_slice().len()))
}

/// Triangular coordinates: real diagonal, then the live components of the
/// strictly upper entries, row by row.
fn triangle_coordinates(t: &DivMatrix) -> Vec<f64> {
    let (m, beta) = (t.rows(), t.beta());
    let mut out: Vec<f64> = (0..m).map(|i| t.get(i, i).re()).collect();
    for i in 0..m {
        for j in (i + 1)..m {
            out.extend_from_slice(&t.get(i, j).0[..beta]);
        }
    }
    out
}

fn triangle_from_coordinates(template: &DivMatrix, coords: &[f64]) -> DivMatrix {
    let (m, beta) = (template.rows(), template.beta());
    let mut t = DivMatrix::zeros(template.algebra(), m, m).expect("associative");
    for i in 0..m {
        t.set(i, i, Quat::real(coords[i]));
    }
    let mut pos = m;
    for i in 0..m {
        for j in (i + 1)..m {
            let mut q = [0.0; 4];
            q[..beta].copy_from_slice(&coords[pos..pos + beta]);
            t.set(i, j, Quat(q));
            pos += beta;
        }
    }
    t
}

/// Finite-difference Jacobian of `T -> T* T` at the Cholesky factor of `S`,
/// compared with `2^m prod_i t_ii^{beta(m-i)+1}`.
pub fn jacobian_check_cholesky(name: &str, s: &HermitianPD, tol: f64) -> Result<CheckReport> {
    let alg = s.algebra();
    let m = s.dim();
    let beta = alg.beta_f64();
    let t = s.cholesky_upper().matrix().clone();
    let x0 = triangle_coordinates(&t);
    let dim = x0.len();
    let scale = x0.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let h = 1e-5 * scale.max(1e-3);
    let image = |coords: &[f64]| triangle_coordinates(&triangle_from_coordinates(&t, coords).gram());
    let mut jac = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..dim {
        let mut plus = x0.clone();
        let mut minus = x0.clone();
        plus[k] += h;
        minus[k] -= h;
        let (fp, fm) = (image(&plus), image(&minus));
        for row in 0..dim {
            jac[(row, k)] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    let numeric = jac.determinant().abs();
    let diag = UpperTriangular::new(t)?.diagonal();
    let predicted = 2f64.powi(m as i32)
        * diag
            .iter()
            .enumerate()
            .map(|(i, d)| d.powf(beta * (m - 1 - i) as f64 + 1.0))
            .product::<f64>();
    let rel = (numeric - predicted).abs() / predicted;
    Ok(CheckReport::relative(name, numeric, predicted, rel, tol, 2 * dim))
}
