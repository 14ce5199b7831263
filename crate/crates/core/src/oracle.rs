//! Independent verification paths: dense Hermitian eigendecomposition, the
//! eigendecomposition exponential and residual reports.
//!
//! Nothing in here calls the closed-form constructors in [`crate::jc`]; the
//! oracle only ever sees flattened matrices.

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::block::BlockOperator;
use crate::error::{HjcError, Result};
use crate::fock::CMatrix;

/// Hermiticity precondition for [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are eigenvectors in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMatrix {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        &self.vectors * d * self.vectors.adjoint()
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn eig_hermitian(m: &CMatrix) -> Result<HermitianEigen> {
    if m.nrows() != m.ncols() {
        return Err(HjcError::Params(format!(
            "eig_hermitian needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let herm = hermiticity_residual(m);
    if herm > HERMITIAN_TOL {
        return Err(HjcError::NotHermitian(herm));
    }
    // Symmetrize so the solver sees an exactly Hermitian operand.
    let sym = (m + m.adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let n = order.len();
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen { values, vectors })
}

/// `exp(−i t m)` via `V diag(e^{−itλ}) V†`.
pub fn expm_hermitian(m: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = eig_hermitian(m)?;
    Ok(expm_from_eigen(&eig, t))
}

/// Exponential from a precomputed eigendecomposition, for time sweeps.
pub fn expm_from_eigen(eig: &HermitianEigen, t: f64) -> CMatrix {
    let n = eig.values.len();
    let mut scaled = eig.vectors.clone();
    for (k, &lambda) in eig.values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -t * lambda);
        for i in 0..n {
            scaled[(i, k)] *= phase;
        }
    }
    scaled * eig.vectors.adjoint()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    MaxAbs,
    Frobenius,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub metric: Metric,
    pub value: f64,
    pub margin: usize,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(metric: Metric, value: f64, margin: usize, tolerance: f64) -> Self {
        Self {
            metric,
            value,
            margin,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

/// Max-abs difference of two block operators on `SafeSubspace(d, margin)`.
pub fn residual(a: &BlockOperator, b: &BlockOperator, margin: usize, tolerance: f64) -> Result<ResidualReport> {
    let value = a.distance_on(b, margin)?;
    Ok(ResidualReport::new(Metric::MaxAbs, value, margin, tolerance))
}

/// Frobenius-norm difference on `SafeSubspace(d, margin)`.
pub fn residual_frobenius(
    a: &BlockOperator,
    b: &BlockOperator,
    margin: usize,
    tolerance: f64,
) -> Result<ResidualReport> {
    let diff = a.sub(b)?.restrict(margin)?.flatten();
    let value = diff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(ResidualReport::new(Metric::Frobenius, value, margin, tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_input_sorted() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(3.0, 0.0),
            c(-1.0, 0.0),
            c(2.0, 0.0),
        ]));
        let e = eig_hermitian(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
        assert!(max_abs(&(e.reconstruct() - &m)) <= 1e-14);
    }

    #[test]
    fn two_by_two_berry() {
        let (x, y, z) = (0.3, -1.1, 0.7);
        let m = CMatrix::from_row_slice(2, 2, &[c(z, 0.0), c(x, -y), c(x, y), c(-z, 0.0)]);
        let r = (x * x + y * y + z * z).sqrt();
        let e = eig_hermitian(&m).unwrap();
        assert!((e.values[0] + r).abs() <= 1e-14);
        assert!((e.values[1] - r).abs() <= 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(eig_hermitian(&m), Err(HjcError::NotHermitian(_))));
    }

    #[test]
    fn exponential_group_law() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(0.5, -0.2),
                c(0.0, 0.3),
                c(0.5, 0.2),
                c(-0.4, 0.0),
                c(1.2, 0.0),
                c(0.0, -0.3),
                c(1.2, 0.0),
                c(0.1, 0.0),
            ],
        );
        let id = CMatrix::identity(3, 3);
        assert!(max_abs(&(expm_hermitian(&m, 0.0).unwrap() - &id)) <= 1e-14);
        let (s, t) = (0.7, -1.9);
        let lhs = expm_hermitian(&m, s).unwrap() * expm_hermitian(&m, t).unwrap();
        let rhs = expm_hermitian(&m, s + t).unwrap();
        assert!(max_abs(&(lhs - rhs)) <= 1e-11);
        let u = expm_hermitian(&m, 2.3).unwrap();
        assert!(max_abs(&(u.adjoint() * &u - id)) <= 1e-11);
    }

    #[test]
    fn residual_report_pass_flag() {
        let r = ResidualReport::new(Metric::MaxAbs, 2e-12, 1, 1e-12);
        assert!(!r.pass);
        let r = ResidualReport::new(Metric::MaxAbs, 1e-12, 1, 1e-12);
        assert!(r.pass);
    }
}
