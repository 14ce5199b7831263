//! 2×2 block operators on `C² ⊗ F`.
//!
//! Flattening uses atom-major ordering: index `(atom, n)` maps to
//! `atom·d + n`, with the excited state `|e⟩` as atom index 0 (upper block).

use num_complex::Complex64;

use crate::error::{HjcError, Result};
use crate::fock::{restrict, CMatrix, FockOperator, SafeSubspace};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    blocks: [[FockOperator; 2]; 2],
}

impl BlockOperator {
    pub fn new(blocks: [[FockOperator; 2]; 2]) -> Result<Self> {
        let d = blocks[0][0].dim();
        for b in blocks.iter().flatten() {
            if b.dim() != d {
                return Err(HjcError::DimMismatch(d, b.dim()));
            }
        }
        Ok(Self { blocks })
    }

    pub fn from_parts(tl: FockOperator, tr: FockOperator, bl: FockOperator, br: FockOperator) -> Result<Self> {
        Self::new([[tl, tr], [bl, br]])
    }

    pub fn diag(upper: FockOperator, lower: FockOperator) -> Result<Self> {
        let d = upper.dim();
        Self::from_parts(upper, FockOperator::zeros(d), FockOperator::zeros(d), lower)
    }

    pub fn identity(d: usize) -> Self {
        Self::diag(FockOperator::identity(d), FockOperator::identity(d)).expect("uniform dim")
    }

    /// `diag(1, 0)`.
    pub fn basic_projector(d: usize) -> Self {
        Self::diag(FockOperator::identity(d), FockOperator::zeros(d)).expect("uniform dim")
    }

    /// Fock dimension `d` of each block.
    pub fn dim(&self) -> usize {
        self.blocks[0][0].dim()
    }

    pub fn block(&self, i: usize, j: usize) -> &FockOperator {
        &self.blocks[i][j]
    }

    pub fn flatten(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(2 * d, 2 * d);
        for (bi, row) in self.blocks.iter().enumerate() {
            for (bj, b) in row.iter().enumerate() {
                m.view_mut((bi * d, bj * d), (d, d)).copy_from(b.matrix());
            }
        }
        m
    }

    pub fn from_flat(m: &CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) {
            return Err(HjcError::Params(format!(
                "flattened block operator must be square with even size, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let d = m.nrows() / 2;
        let b = |i: usize, j: usize| FockOperator::from_matrix(m.view((i * d, j * d), (d, d)).into_owned());
        Self::from_parts(b(0, 0), b(0, 1), b(1, 0), b(1, 1))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(HjcError::DimMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let e = |i: usize, j: usize| -> Result<FockOperator> {
            self.blocks[i][0]
                .mul(&rhs.blocks[0][j])?
                .add(&self.blocks[i][1].mul(&rhs.blocks[1][j])?)
        };
        Self::from_parts(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?)
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&FockOperator, &FockOperator) -> Result<FockOperator>) -> Result<Self> {
        self.check_same(rhs)?;
        let e = |i: usize, j: usize| f(&self.blocks[i][j], &rhs.blocks[i][j]);
        Self::from_parts(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?)
    }

    fn map(&self, f: impl Fn(&FockOperator) -> FockOperator) -> Self {
        let e = |i: usize, j: usize| f(&self.blocks[i][j]);
        Self::from_parts(e(0, 0), e(0, 1), e(1, 0), e(1, 1)).expect("map preserves dim")
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.sub(b))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|b| b.scale(s))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        self.map(|b| b.scale_complex(s))
    }

    pub fn adjoint(&self) -> Self {
        let e = |i: usize, j: usize| self.blocks[j][i].adjoint();
        Self::from_parts(e(0, 0), e(0, 1), e(1, 0), e(1, 1)).expect("uniform dim")
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.mul(rhs)?.sub(&rhs.mul(self)?)
    }

    /// Restrict every block to the safe subspace of the given margin.
    pub fn restrict(&self, margin: usize) -> Result<Self> {
        let s = SafeSubspace::new(self.dim(), margin)?;
        let e = |i: usize, j: usize| restrict(&self.blocks[i][j], s);
        Self::from_parts(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().flatten().fold(0.0, |m, b| m.max(b.max_abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().flatten().all(FockOperator::is_finite)
    }

    /// `max |self − other|` after restricting both to `SafeSubspace(d, margin)`.
    pub fn distance_on(&self, other: &Self, margin: usize) -> Result<f64> {
        Ok(self.sub(other)?.restrict(margin)?.max_abs())
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.distance_on(&self.adjoint(), 0).expect("same dim")
    }

    /// `‖U†U − 1‖_max` on `SafeSubspace(d, margin)`.
    pub fn unitarity_residual(&self, margin: usize) -> Result<f64> {
        self.adjoint()
            .mul(self)?
            .distance_on(&Self::identity(self.dim()), margin)
    }

    /// `‖P² − P‖_max` on `SafeSubspace(d, margin)`.
    pub fn idempotency_residual(&self, margin: usize) -> Result<f64> {
        self.mul(self)?.distance_on(self, margin)
    }

    /// Apply to a state given in atom-major order.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let m = self.flatten();
        if v.len() != m.ncols() {
            return Err(HjcError::DimMismatch(m.ncols(), v.len()));
        }
        let col = nalgebra::DVector::from_column_slice(v);
        Ok((&m * col).iter().copied().collect())
    }
}
