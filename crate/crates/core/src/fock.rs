//! Dense operators on the truncated Fock space spanned by `|0⟩ … |d−1⟩`.
//!
//! `a†` annihilates the top level (`a†|d−1⟩ = 0`), so identities that move a
//! state up one level are only exact on a [`SafeSubspace`] that drops the
//! top `margin` levels.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HjcError, Result};
use crate::tolerance::PSEUDO_INVERSE_EPS;

pub type CMatrix = DMatrix<Complex64>;

pub const MIN_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    data: CMatrix,
}

/// The span of `|0⟩ … |d−1−margin⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SafeSubspace {
    dim: usize,
    margin: usize,
}

impl SafeSubspace {
    pub fn new(dim: usize, margin: usize) -> Result<Self> {
        if margin >= dim {
            return Err(HjcError::Margin { margin, dim });
        }
        Ok(Self { dim, margin })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    /// Number of retained levels.
    pub fn len(&self) -> usize {
        self.dim - self.margin
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < MIN_DIM {
        return Err(HjcError::Dimension(d, MIN_DIM));
    }
    Ok(())
}

impl FockOperator {
    /// Wrap a square matrix. Panics if it is not square.
    pub fn from_matrix(data: CMatrix) -> Self {
        assert_eq!(data.nrows(), data.ncols(), "Fock operators are square");
        Self { data }
    }

    pub fn zeros(d: usize) -> Self {
        Self::from_matrix(CMatrix::zeros(d, d))
    }

    pub fn identity(d: usize) -> Self {
        Self::from_matrix(CMatrix::identity(d, d))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        Self::from_matrix(CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// `|n⟩⟨n|`.
    pub fn level_projector(d: usize, n: usize) -> Self {
        let mut op = Self::zeros(d);
        op.data[(n, n)] = Complex64::new(1.0, 0.0);
        op
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(HjcError::DimMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(Self::from_matrix(&self.data * &rhs.data))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(Self::from_matrix(&self.data + &rhs.data))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(Self::from_matrix(&self.data - &rhs.data))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_matrix(self.data.map(|z| z * s))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self::from_matrix(self.data.map(|z| z * s))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.data.adjoint())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// `[self, rhs]`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.mul(rhs)?.sub(&rhs.mul(self)?)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.data[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.data[(i, i)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `diag(s) · self`, row `i` scaled by `s[i]`.
    pub fn left_diag_mul(&self, s: &[f64]) -> Self {
        assert_eq!(s.len(), self.dim());
        let mut m = self.data.clone();
        for (i, &f) in s.iter().enumerate() {
            m.row_mut(i).iter_mut().for_each(|z| *z *= f);
        }
        Self::from_matrix(m)
    }

    /// `self · diag(s)`, column `j` scaled by `s[j]`.
    pub fn right_diag_mul(&self, s: &[f64]) -> Self {
        assert_eq!(s.len(), self.dim());
        let mut m = self.data.clone();
        for (j, &f) in s.iter().enumerate() {
            m.column_mut(j).iter_mut().for_each(|z| *z *= f);
        }
        Self::from_matrix(m)
    }

    /// `diag(s)⁺ · self` by row division; rows with `|s[i]| ≤ 1e−14` become zero.
    pub fn left_diag_div(&self, s: &[f64]) -> Self {
        assert_eq!(s.len(), self.dim());
        let mut m = self.data.clone();
        for (i, &f) in s.iter().enumerate() {
            if f.abs() > PSEUDO_INVERSE_EPS {
                m.row_mut(i).iter_mut().for_each(|z| *z /= f);
            } else {
                m.row_mut(i).fill(Complex64::new(0.0, 0.0));
            }
        }
        Self::from_matrix(m)
    }

    /// `self · diag(s)⁺` by column division; columns with `|s[j]| ≤ 1e−14` become zero.
    pub fn right_diag_div(&self, s: &[f64]) -> Self {
        assert_eq!(s.len(), self.dim());
        let mut m = self.data.clone();
        for (j, &f) in s.iter().enumerate() {
            if f.abs() > PSEUDO_INVERSE_EPS {
                m.column_mut(j).iter_mut().for_each(|z| *z /= f);
            } else {
                m.column_mut(j).fill(Complex64::new(0.0, 0.0));
            }
        }
        Self::from_matrix(m)
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(HjcError::DimMismatch(self.dim(), v.len()));
        }
        let col = nalgebra::DVector::from_column_slice(v);
        Ok((&self.data * col).iter().copied().collect())
    }
}

/// `a|n⟩ = √n |n−1⟩`.
pub fn annihilation(d: usize) -> Result<FockOperator> {
    check_dim(d)?;
    let mut m = CMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(FockOperator::from_matrix(m))
}

/// `a†|n⟩ = √(n+1) |n+1⟩` for `n < d−1`, `a†|d−1⟩ = 0`.
pub fn creation(d: usize) -> Result<FockOperator> {
    Ok(annihilation(d)?.adjoint())
}

/// `N = a†a = diag(0, …, d−1)`.
pub fn number(d: usize) -> Result<FockOperator> {
    func_of_number(d, |n| n)
}

/// `f(N) = diag(f(0), …, f(d−1))`.
pub fn func_of_number(d: usize, f: impl Fn(f64) -> f64) -> Result<FockOperator> {
    check_dim(d)?;
    let mut diag = Vec::with_capacity(d);
    for level in 0..d {
        let v = f(level as f64);
        if !v.is_finite() {
            return Err(HjcError::NonFiniteLevel { level });
        }
        diag.push(v);
    }
    Ok(FockOperator::from_diagonal(&diag))
}

/// `f(N + shift)` as a diagonal operator on levels `0 … d−1`.
pub fn func_of_shifted_number(d: usize, shift: f64, f: impl Fn(f64) -> f64) -> Result<FockOperator> {
    func_of_number(d, |n| f(n + shift))
}

/// Invert the nonzero diagonal entries; entries with `|x| ≤ 1e−14` map to zero.
pub fn pseudo_diag_inverse(op: &FockOperator) -> Result<FockOperator> {
    if !op.is_diagonal() {
        return Err(HjcError::NotDiagonal);
    }
    let d = op.dim();
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        let x = op.get(i, i);
        if x.norm() > PSEUDO_INVERSE_EPS {
            m[(i, i)] = if x.im == 0.0 {
                Complex64::new(1.0 / x.re, 0.0)
            } else {
                x.inv()
            };
        }
    }
    Ok(FockOperator::from_matrix(m))
}

/// `f(n + shift)` for `n = 0 … d−1`, as a plain vector.
pub fn levels(d: usize, shift: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..d).map(|n| f(n as f64 + shift)).collect()
}

/// `(1/√(N+1)) a`: the normalized lowering shift `|n⟩ ↦ |n−1⟩`, `|0⟩ ↦ 0`.
pub fn normalized_annihilation(d: usize) -> Result<FockOperator> {
    Ok(annihilation(d)?.left_diag_div(&levels(d, 1.0, f64::sqrt)))
}

/// `a† (1/√(N+1))`: the normalized raising shift `|n⟩ ↦ |n+1⟩`, `|d−1⟩ ↦ 0`.
pub fn normalized_creation(d: usize) -> Result<FockOperator> {
    Ok(creation(d)?.right_diag_div(&levels(d, 1.0, f64::sqrt)))
}

/// Entry-scale bound for identities that are exact in real arithmetic but
/// pass through `√n · √n` in floating point: a few ulps of the largest level.
pub fn machine_exact_tol(d: usize) -> f64 {
    4.0 * f64::EPSILON * d.max(1) as f64
}

/// Compress to the leading `(d−k)×(d−k)` block.
pub fn restrict(op: &FockOperator, s: SafeSubspace) -> Result<FockOperator> {
    if s.dim != op.dim() {
        return Err(HjcError::DimMismatch(s.dim, op.dim()));
    }
    let n = s.len();
    Ok(FockOperator::from_matrix(op.data.view((0, 0), (n, n)).into_owned()))
}

/// `‖a f(N) − f(N+1) a‖_max` on `SafeSubspace(d, 1)`.
pub fn shift_identity_check(f: impl Fn(f64) -> f64, d: usize) -> Result<f64> {
    let a = annihilation(d)?;
    let f_n = func_of_number(d, &f)?;
    let f_n1 = func_of_shifted_number(d, 1.0, &f)?;
    let diff = a.mul(&f_n)?.sub(&f_n1.mul(&a)?)?;
    Ok(restrict(&diff, SafeSubspace::new(d, 1)?)?.max_abs())
}

/// JSON form: row-major real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub real: Vec<Vec<f64>>,
    pub imag: Vec<Vec<f64>>,
}

impl From<&CMatrix> for OperatorJson {
    fn from(m: &CMatrix) -> Self {
        let rows = |part: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| part(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            dim: m.nrows(),
            real: rows(|z| z.re),
            imag: rows(|z| z.im),
        }
    }
}

impl From<&FockOperator> for OperatorJson {
    fn from(op: &FockOperator) -> Self {
        Self::from(op.matrix())
    }
}

impl OperatorJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let d = self.dim;
        let ok = self.real.len() == d
            && self.imag.len() == d
            && self.real.iter().chain(&self.imag).all(|row| row.len() == d);
        if !ok {
            return Err(HjcError::Params(format!("operator JSON is not {d}x{d}")));
        }
        Ok(CMatrix::from_fn(d, d, |i, j| {
            Complex64::new(self.real[i][j], self.imag[i][j])
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn basis(d: usize, n: usize) -> Vec<Complex64> {
        let mut v = vec![c(0.0); d];
        v[n] = c(1.0);
        v
    }

    #[test]
    fn annihilation_d2() {
        let a = annihilation(2).unwrap();
        assert_eq!(
            a.matrix(),
            &CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)])
        );
        assert!(annihilation(1).is_err());
    }

    #[test]
    fn annihilation_on_level_three() {
        let a = annihilation(6).unwrap();
        let out = a.apply(&basis(6, 3)).unwrap();
        let mut expected = vec![c(0.0); 6];
        expected[2] = c(3f64.sqrt());
        assert_eq!(out, expected);
    }

    #[test]
    fn creation_truncates_top_level() {
        let ad = creation(2).unwrap();
        assert_eq!(
            ad.matrix(),
            &CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)])
        );
        let d = 7;
        let ad = creation(d).unwrap();
        assert_eq!(ad.adjoint(), annihilation(d).unwrap());
        assert!(ad.apply(&basis(d, d - 1)).unwrap().iter().all(|z| *z == c(0.0)));
    }

    #[test]
    fn number_operator() {
        for d in [2, 5, 11] {
            let n = number(d).unwrap();
            let expected: Vec<f64> = (0..d).map(|k| k as f64).collect();
            assert_eq!(n, FockOperator::from_diagonal(&expected));
            // √n·√n is not always n in floating point
            let ada = creation(d).unwrap().mul(&annihilation(d).unwrap()).unwrap();
            assert!(ada.sub(&n).unwrap().max_abs() <= machine_exact_tol(d));
            assert_eq!(n.adjoint(), n);
        }
    }

    #[test]
    fn func_of_number_examples() {
        assert_eq!(func_of_number(9, |n| n).unwrap(), number(9).unwrap());
        let r = func_of_number(3, |n| (n + 1.0).sqrt()).unwrap();
        assert_eq!(r, FockOperator::from_diagonal(&[1.0, 2f64.sqrt(), 3f64.sqrt()]));
        assert!(matches!(
            func_of_number(4, |n| 1.0 / n.sqrt()),
            Err(HjcError::NonFiniteLevel { level: 0 })
        ));
    }

    #[test]
    fn pseudo_inverse_examples() {
        let p = pseudo_diag_inverse(&FockOperator::from_diagonal(&[0.0, 1.0, 2.0])).unwrap();
        assert_eq!(p, FockOperator::from_diagonal(&[0.0, 1.0, 0.5]));

        let m = FockOperator::from_diagonal(&[4.0, -2.0, 0.5]);
        let inv = pseudo_diag_inverse(&m).unwrap();
        assert_eq!(inv.mul(&m).unwrap(), FockOperator::identity(3));

        assert!(matches!(
            pseudo_diag_inverse(&annihilation(3).unwrap()),
            Err(HjcError::NotDiagonal)
        ));
    }

    #[test]
    fn pseudo_inverse_left_form_equals_shifted_form() {
        let d = 12;
        let a = annihilation(d).unwrap();
        let sqrt_n = func_of_number(d, f64::sqrt).unwrap();
        let left = a.mul(&pseudo_diag_inverse(&sqrt_n).unwrap()).unwrap();
        let right = func_of_number(d, |n| 1.0 / (n + 1.0).sqrt()).unwrap().mul(&a).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn shift_identity_examples() {
        assert_eq!(shift_identity_check(|_| 2.5, 8).unwrap(), 0.0);
        assert_eq!(shift_identity_check(|n| n, 8).unwrap(), 0.0);
        let theta: f64 = 0.3;
        assert!(shift_identity_check(|n| (n + theta * theta).sqrt(), 8).unwrap() <= 1e-13);
    }

    #[test]
    fn normalized_shifts_are_exact() {
        let d = 40;
        let down = normalized_annihilation(d).unwrap();
        let up = normalized_creation(d).unwrap();
        for i in 0..d {
            for j in 0..d {
                let expect_down = if j == i + 1 { 1.0 } else { 0.0 };
                assert_eq!(down.get(i, j), c(expect_down));
            }
        }
        assert_eq!(up, down.adjoint());
        let sqrt_n = levels(d, 0.0, f64::sqrt);
        let a = annihilation(d).unwrap();
        assert_eq!(a.right_diag_div(&sqrt_n), down);
    }

    #[test]
    fn restrict_examples() {
        let n = number(5).unwrap();
        let r = restrict(&n, SafeSubspace::new(5, 2).unwrap()).unwrap();
        assert_eq!(r, FockOperator::from_diagonal(&[0.0, 1.0, 2.0]));
        assert!(SafeSubspace::new(5, 5).is_err());
        assert!(restrict(&n, SafeSubspace::new(6, 1).unwrap()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = annihilation(3).unwrap();
        let j = OperatorJson::from(&a);
        assert_eq!(j.dim, 3);
        assert_eq!(j.real[0][1], 1.0);
        let back = j.to_matrix().unwrap();
        assert_eq!(&back, a.matrix());
    }
}
