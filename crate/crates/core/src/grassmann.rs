//! Local coordinates for the projectors.
//!
//! A projector of the form `diag(1, 0)` rotated by `[[1, −Z†], [Z, 1]]` is
//!
//! ```text
//! P(Z) = [[ (1+Z†Z)⁻¹,    (1+Z†Z)⁻¹ Z†   ],
//!         [ Z (1+Z†Z)⁻¹,  Z (1+Z†Z)⁻¹ Z† ]]
//! ```
//!
//! For the Jaynes–Cummings projector the coordinate is the lowering-shaped
//! `Z = (1/(R(N)+θ)) a† = a† (1/(R(N+1)+θ))`, and in the classical limit it
//! becomes `Z_c = (x + iy)/(r + z)`.

use nalgebra::Cholesky;
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, AlgebraTag};
use crate::berry::{BasePoint, ChartTag, Matrix2K, PointClass};
use crate::block::BlockOperator;
use crate::error::{HjcError, Result};
use crate::fock::{creation, levels, CMatrix, FockOperator};
use crate::jc::{singular_sectors, JCParams};
use crate::tolerance::SINGULAR_EPS;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalCoordinate {
    /// Nonzero only on the subdiagonal.
    pub z: FockOperator,
    pub theta: f64,
    /// `R(n) + θ > 1e−14` at level `n`.
    pub regular: Vec<bool>,
}

impl LocalCoordinate {
    pub fn singular_levels(&self) -> Vec<usize> {
        self.regular
            .iter()
            .enumerate()
            .filter(|(_, &ok)| !ok)
            .map(|(n, _)| n)
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.z.dim()
    }

    /// Wrap an arbitrary operator as a coordinate (no regularity information).
    pub fn from_operator(z: FockOperator) -> Self {
        let d = z.dim();
        Self {
            z,
            theta: f64::NAN,
            regular: vec![true; d],
        }
    }
}

/// `(1/(R(N)+θ)) a†`, the form with the function on the left.
pub fn coordinate_left_form(p: &JCParams) -> Result<FockOperator> {
    let plus = levels(p.dim, 0.0, |n| p.radius_plus(n));
    Ok(creation(p.dim)?.left_diag_div(&plus))
}

/// `a† (1/(R(N+1)+θ))`, the shifted (regular) form.
pub fn coordinate_right_form(p: &JCParams) -> Result<FockOperator> {
    let plus = levels(p.dim, 1.0, |n| p.radius_plus(n));
    Ok(creation(p.dim)?.right_diag_div(&plus))
}

pub fn local_coordinate(p: &JCParams) -> Result<LocalCoordinate> {
    p.validate()?;
    let regular: Vec<bool> = levels(p.dim, 0.0, |n| p.radius_plus(n))
        .into_iter()
        .map(|x| x > SINGULAR_EPS)
        .collect();
    if regular.iter().any(|ok| !ok) {
        let report = singular_sectors(p);
        let summary = regular
            .iter()
            .enumerate()
            .filter(|(_, &ok)| !ok)
            .map(|(n, _)| format!("R({n}) + θ = 0"))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(HjcError::SingularSector {
            chart: ChartTag::I,
            report_summary: summary,
            report: Box::new(report),
        });
    }
    Ok(LocalCoordinate {
        z: coordinate_right_form(p)?,
        theta: p.theta,
        regular,
    })
}

/// `(1 + Z†Z)⁻¹` by Cholesky solve; the operand is Hermitian positive definite.
pub fn gram_inverse(z: &FockOperator) -> Result<FockOperator> {
    let d = z.dim();
    let gram = CMatrix::identity(d, d) + z.matrix().adjoint() * z.matrix();
    let chol = Cholesky::new(gram).ok_or_else(|| HjcError::Params("1 + Z†Z is not positive definite".into()))?;
    Ok(FockOperator::from_matrix(chol.solve(&CMatrix::identity(d, d))))
}

pub fn oike_projector(z: &LocalCoordinate) -> Result<BlockOperator> {
    let k = gram_inverse(&z.z)?;
    let zd = z.z.adjoint();
    let zk = z.z.mul(&k)?;
    BlockOperator::from_parts(k.clone(), k.mul(&zd)?, zk.clone(), zk.mul(&zd)?)
}

/// `[[1, −Z†], [Z, 1]]`.
pub fn rotation(z: &FockOperator) -> Result<BlockOperator> {
    let d = z.dim();
    BlockOperator::from_parts(
        FockOperator::identity(d),
        z.adjoint().neg(),
        z.clone(),
        FockOperator::identity(d),
    )
}

/// `diag((1+Z†Z)⁻¹, (1+ZZ†)⁻¹) [[1, Z†], [−Z, 1]]`.
pub fn rotation_inverse(z: &FockOperator) -> Result<BlockOperator> {
    let d = z.dim();
    let zd = z.adjoint();
    let k_upper = gram_inverse(z)?;
    let k_lower = gram_inverse(&zd)?;
    let right = BlockOperator::from_parts(FockOperator::identity(d), zd, z.neg(), FockOperator::identity(d))?;
    BlockOperator::diag(k_upper, k_lower)?.mul(&right)
}

/// `P(Z)` from its definition, inverting the rotation with a dense LU solve.
pub fn oike_projector_by_inverse(z: &FockOperator) -> Result<BlockOperator> {
    let rot = rotation(z)?;
    let inv = rot
        .flatten()
        .lu()
        .try_inverse()
        .ok_or_else(|| HjcError::Params("rotation is singular".into()))?;
    let inv = BlockOperator::from_flat(&inv)?;
    rot.mul(&BlockOperator::basic_projector(z.dim()))?.mul(&inv)
}

/// `Z_c = (x + iy)/(r + z)`.
pub fn classical_coordinate(x: f64, y: f64, z: f64) -> Result<Complex64> {
    let p = BasePoint::complex(x, y, z)?;
    let rz = p.r_plus_z();
    if rz <= SINGULAR_EPS {
        let class = if p.r() == 0.0 {
            PointClass::Origin
        } else {
            PointClass::LowerString
        };
        return Err(HjcError::DiracString {
            chart: ChartTag::I,
            class,
        });
    }
    Ok(Complex64::new(x, y) / rz)
}

/// The scalar `P(Z)` over C.
pub fn scalar_oike_projector(zc: Complex64) -> Matrix2K {
    let k = 1.0 / (1.0 + zc.norm_sqr());
    let c = |z: Complex64| AlgebraElement::new(AlgebraTag::C, vec![z.re, z.im]).expect("finite");
    Matrix2K::new([
        [c(Complex64::new(k, 0.0)), c(zc.conj() * k)],
        [c(zc * k), c(Complex64::new(zc.norm_sqr() * k, 0.0))],
    ])
    .expect("uniform tag")
}
