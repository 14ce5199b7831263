//! The classical Hamiltonian `H_K = [[z, w̄], [w, −z]]` over a division
//! algebra K, its two chart diagonalizations, the transition function between
//! them, the global projector and the two-step factorization that isolates
//! the real middle matrix carrying the Dirac strings.
//!
//! Products of [`Matrix2K`] are always evaluated left to right. For K = O this
//! is well defined because every entry that appears lies in the associative
//! subalgebra generated by `{1, w}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraTag};
use crate::error::{HjcError, Result};
use crate::tolerance::STRING_EPS;

/// A 2×2 matrix with entries in one division algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix2K {
    entries: [[AlgebraElement; 2]; 2],
}

impl Matrix2K {
    pub fn new(entries: [[AlgebraElement; 2]; 2]) -> Result<Self> {
        let tag = entries[0][0].tag();
        for e in entries.iter().flatten() {
            if e.tag() != tag {
                return Err(HjcError::TagMismatch {
                    left: tag,
                    right: e.tag(),
                });
            }
        }
        Ok(Self { entries })
    }

    fn from_parts(a: AlgebraElement, b: AlgebraElement, c: AlgebraElement, d: AlgebraElement) -> Self {
        Self {
            entries: [[a, b], [c, d]],
        }
    }

    pub fn from_reals(tag: AlgebraTag, m: [[f64; 2]; 2]) -> Self {
        let r = |x| AlgebraElement::real(tag, x);
        Self::from_parts(r(m[0][0]), r(m[0][1]), r(m[1][0]), r(m[1][1]))
    }

    pub fn diag(a: AlgebraElement, d: AlgebraElement) -> Self {
        let tag = a.tag();
        Self::from_parts(a, AlgebraElement::zero(tag), AlgebraElement::zero(tag), d)
    }

    pub fn identity(tag: AlgebraTag) -> Self {
        Self::from_reals(tag, [[1.0, 0.0], [0.0, 1.0]])
    }

    /// `P₀ = diag(1, 0)`.
    pub fn basic_projector(tag: AlgebraTag) -> Self {
        Self::from_reals(tag, [[1.0, 0.0], [0.0, 0.0]])
    }

    pub fn tag(&self) -> AlgebraTag {
        self.entries[0][0].tag()
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[[AlgebraElement; 2]; 2] {
        &self.entries
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let e = |i: usize, j: usize| -> Result<AlgebraElement> {
            self.entries[i][0]
                .mul(&rhs.entries[0][j])?
                .add(&self.entries[i][1].mul(&rhs.entries[1][j])?)
        };
        Ok(Self::from_parts(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        let e = |i: usize, j: usize| self.entries[i][j].sub(&rhs.entries[i][j]);
        Ok(Self::from_parts(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
    }

    pub fn scale(&self, s: f64) -> Self {
        let e = |i: usize, j: usize| self.entries[i][j].scale(s);
        Self::from_parts(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    /// Conjugate transpose under the algebra's conjugation.
    pub fn adjoint(&self) -> Self {
        let e = |i: usize, j: usize| self.entries[j][i].conj();
        Self::from_parts(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    /// Largest entry norm.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().flatten().fold(0.0, |m, e| m.max(e.norm()))
    }

    /// `max |self − other|` over entries.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_norm())
    }

    /// `‖M†M − 1‖_max`.
    pub fn unitarity_residual(&self) -> Result<f64> {
        self.adjoint().mul(self)?.distance(&Self::identity(self.tag()))
    }

    pub fn hermiticity_residual(&self) -> Result<f64> {
        self.distance(&self.adjoint())
    }
}

impl fmt::Display for Matrix2K {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.entries[0][0], self.entries[0][1], self.entries[1][0], self.entries[1][1]
        )
    }
}

/// A point `(w, z)` of `K × R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasePoint {
    w: AlgebraElement,
    z: f64,
    r: f64,
}

impl BasePoint {
    pub fn new(w: AlgebraElement, z: f64) -> Result<Self> {
        if !z.is_finite() {
            return Err(HjcError::NonFinite);
        }
        let r = (w.norm_sq() + z * z).sqrt();
        Ok(Self { w, z, r })
    }

    /// `w = x + iy` over C.
    pub fn complex(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(AlgebraElement::new(AlgebraTag::C, vec![x, y])?, z)
    }

    pub fn w(&self) -> &AlgebraElement {
        &self.w
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn tag(&self) -> AlgebraTag {
        self.w.tag()
    }

    pub fn norm_w(&self) -> f64 {
        self.w.norm()
    }

    /// `r + z`, computed without cancellation when `z < 0`.
    pub fn r_plus_z(&self) -> f64 {
        r_plus_z(self.norm_w(), self.z, self.r)
    }

    /// `r − z`, computed without cancellation when `z > 0`.
    pub fn r_minus_z(&self) -> f64 {
        r_plus_z(self.norm_w(), -self.z, self.r)
    }
}

fn r_plus_z(norm_w: f64, z: f64, r: f64) -> f64 {
    if z >= 0.0 {
        r + z
    } else {
        norm_w * norm_w / (r - z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChartTag {
    I,
    II,
}

impl ChartTag {
    pub const BOTH: [ChartTag; 2] = [ChartTag::I, ChartTag::II];
}

impl fmt::Display for ChartTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartTag::I => f.write_str("I"),
            ChartTag::II => f.write_str("II"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    Regular,
    LowerString,
    UpperString,
    Origin,
}

impl PointClass {
    pub fn admits(self, chart: ChartTag) -> bool {
        !matches!(
            (self, chart),
            (PointClass::Origin, _) | (PointClass::LowerString, ChartTag::I) | (PointClass::UpperString, ChartTag::II)
        )
    }
}

/// A factorization `H = U D U†` valid on one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartDecomposition<M> {
    pub unitary: M,
    pub diagonal: M,
    pub chart: ChartTag,
    /// Normalization factor of the chart unitary; diverges at the chart's string.
    pub conditioning: f64,
}

fn classify_raw(norm_w: f64, z: f64) -> PointClass {
    if norm_w <= STRING_EPS {
        if z < 0.0 {
            PointClass::LowerString
        } else if z > 0.0 {
            PointClass::UpperString
        } else {
            PointClass::Origin
        }
    } else {
        PointClass::Regular
    }
}

pub fn build_hamiltonian(p: &BasePoint) -> Matrix2K {
    let tag = p.tag();
    Matrix2K::from_parts(
        AlgebraElement::real(tag, p.z),
        p.w.conj(),
        p.w.clone(),
        AlgebraElement::real(tag, -p.z),
    )
}

pub fn classify_point(p: &BasePoint) -> PointClass {
    classify_raw(p.norm_w(), p.z)
}

fn admit(class: PointClass, chart: ChartTag) -> Result<()> {
    if class.admits(chart) {
        Ok(())
    } else {
        Err(HjcError::DiracString { chart, class })
    }
}

/// `1/√(2r(r+z))` for chart I, `1/√(2r(r−z))` for chart II. Infinite on the
/// chart's string.
pub fn conditioning(p: &BasePoint, chart: ChartTag) -> f64 {
    let shifted = match chart {
        ChartTag::I => p.r_plus_z(),
        ChartTag::II => p.r_minus_z(),
    };
    let denom = 2.0 * p.r * shifted;
    if denom > 0.0 {
        1.0 / denom.sqrt()
    } else {
        f64::INFINITY
    }
}

pub fn chart_unitary(p: &BasePoint, chart: ChartTag) -> Result<Matrix2K> {
    admit(classify_point(p), chart)?;
    let tag = p.tag();
    let s = conditioning(p, chart);
    let m = match chart {
        ChartTag::I => {
            let rz = AlgebraElement::real(tag, p.r_plus_z());
            Matrix2K::from_parts(rz.clone(), p.w.conj().neg(), p.w.clone(), rz)
        }
        ChartTag::II => {
            let rz = p.r_minus_z();
            Matrix2K::from_parts(
                p.w.conj(),
                AlgebraElement::real(tag, -rz),
                AlgebraElement::real(tag, rz),
                p.w.clone(),
            )
        }
    };
    Ok(m.scale(s))
}

/// `D = diag(r, −r)`.
pub fn eigenvalue_block(tag: AlgebraTag, r: f64) -> Matrix2K {
    Matrix2K::from_reals(tag, [[r, 0.0], [0.0, -r]])
}

pub fn chart_decompose(p: &BasePoint, chart: ChartTag) -> Result<ChartDecomposition<Matrix2K>> {
    let unitary = chart_unitary(p, chart)?;
    Ok(ChartDecomposition {
        unitary,
        diagonal: eigenvalue_block(p.tag(), p.r),
        chart,
        conditioning: conditioning(p, chart),
    })
}

/// `Φ_K = diag(w̄/‖w‖, w/‖w‖)`, satisfying `U_II = U_I Φ_K`.
pub fn transition_function(p: &BasePoint) -> Result<Matrix2K> {
    let n = p.norm_w();
    if n <= STRING_EPS {
        return Err(HjcError::ZeroFiber("transition function"));
    }
    let u = p.w.scale(1.0 / n);
    Ok(Matrix2K::diag(u.conj(), u))
}

/// `P(w, z) = (1/2r) [[r+z, w̄], [w, r−z]]`, defined at every point but the origin.
pub fn projector(p: &BasePoint) -> Result<Matrix2K> {
    if p.r == 0.0 {
        return Err(HjcError::Origin);
    }
    let tag = p.tag();
    let m = Matrix2K::from_parts(
        AlgebraElement::real(tag, p.r_plus_z()),
        p.w.conj(),
        p.w.clone(),
        AlgebraElement::real(tag, p.r_minus_z()),
    );
    Ok(m.scale(0.5 / p.r))
}

/// `H_K = L M L†` with `L = diag(1, w/‖w‖)` and the real middle matrix
/// `M = [[z, ‖w‖], [‖w‖, −z]]`.
pub fn two_step_decompose(p: &BasePoint) -> Result<(Matrix2K, Matrix2K, Matrix2K)> {
    let n = p.norm_w();
    if n <= STRING_EPS {
        return Err(HjcError::ZeroFiber("outer factor w/‖w‖"));
    }
    let tag = p.tag();
    let l = Matrix2K::diag(AlgebraElement::one(tag), p.w.scale(1.0 / n));
    let m = Matrix2K::from_reals(tag, [[p.z, n], [n, -p.z]]);
    let ldag = l.adjoint();
    Ok((l, m, ldag))
}

/// Diagonalize the real middle matrix `[[z, n], [n, −z]]` on one chart.
/// The result is real (tag R).
pub fn middle_diagonalize(norm_w: f64, z: f64, chart: ChartTag) -> Result<ChartDecomposition<Matrix2K>> {
    if !norm_w.is_finite() || norm_w < 0.0 {
        return Err(HjcError::Params(format!(
            "norm_w must be a finite non-negative number, got {norm_w}"
        )));
    }
    let p = BasePoint::new(AlgebraElement::real(AlgebraTag::R, norm_w), z)?;
    admit(classify_raw(norm_w, z), chart)?;
    let s = conditioning(&p, chart);
    if !s.is_finite() {
        return Err(HjcError::DiracString {
            chart,
            class: classify_raw(norm_w, z),
        });
    }
    let u = match chart {
        ChartTag::I => {
            let rz = p.r_plus_z();
            [[rz, -norm_w], [norm_w, rz]]
        }
        ChartTag::II => {
            let rz = p.r_minus_z();
            [[norm_w, -rz], [rz, norm_w]]
        }
    };
    Ok(ChartDecomposition {
        unitary: Matrix2K::from_reals(AlgebraTag::R, u).scale(s),
        diagonal: eigenvalue_block(AlgebraTag::R, p.r),
        chart,
        conditioning: s,
    })
}

/// `‖H − U D U†‖_max`.
pub fn reconstruction_residual(h: &Matrix2K, d: &ChartDecomposition<Matrix2K>) -> Result<f64> {
    let rebuilt = d.unitary.mul(&d.diagonal)?.mul(&d.unitary.adjoint())?;
    h.distance(&rebuilt)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn c(x: f64, y: f64) -> AlgebraElement {
        AlgebraElement::new(AlgebraTag::C, vec![x, y]).unwrap()
    }

    #[test]
    fn hamiltonian_at_north_pole_is_sigma3() {
        let p = BasePoint::new(AlgebraElement::zero(AlgebraTag::C), 1.0).unwrap();
        assert_eq!(
            build_hamiltonian(&p),
            Matrix2K::from_reals(AlgebraTag::C, [[1.0, 0.0], [0.0, -1.0]])
        );
    }

    #[test]
    fn quaternion_hamiltonian_conjugates_off_diagonal() {
        let w = AlgebraElement::new(AlgebraTag::H, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let h = build_hamiltonian(&BasePoint::new(w, 0.0).unwrap());
        assert_eq!(h.entry(0, 1).coeffs(), &[0.0, -1.0, -1.0, 0.0]);
        assert_eq!(h.entry(1, 0).coeffs(), &[0.0, 1.0, 1.0, 0.0]);
        assert!(h.entry(0, 0).is_zero() && h.entry(1, 1).is_zero());
    }

    #[test]
    fn classification() {
        let pt = |w: AlgebraElement, z| classify_point(&BasePoint::new(w, z).unwrap());
        assert_eq!(pt(c(0.0, 0.0), -3.0), PointClass::LowerString);
        assert_eq!(pt(c(0.0, 0.0), 2.0), PointClass::UpperString);
        assert_eq!(pt(c(1.0, 2.0), -5.0), PointClass::Regular);
        assert_eq!(pt(c(0.0, 0.0), 0.0), PointClass::Origin);
        assert_eq!(pt(c(1e-15, 0.0), 1.0), PointClass::UpperString);
    }

    #[test]
    fn chart_one_at_north_pole_is_identity() {
        let p = BasePoint::complex(0.0, 0.0, 1.0).unwrap();
        let u = chart_unitary(&p, ChartTag::I).unwrap();
        assert!(u.distance(&Matrix2K::identity(AlgebraTag::C)).unwrap() <= 1e-15);
    }

    #[test]
    fn chart_one_on_equator() {
        // r = 1, r + z = 1, normalization 1/√2.
        let p = BasePoint::complex(1.0, 0.0, 0.0).unwrap();
        let u = chart_unitary(&p, ChartTag::I).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = Matrix2K::from_reals(AlgebraTag::C, [[s, -s], [s, s]]);
        assert!(u.distance(&expected).unwrap() <= 1e-15);
    }

    #[test]
    fn chart_one_fails_on_lower_string() {
        let p = BasePoint::complex(0.0, 0.0, -1.0).unwrap();
        match chart_unitary(&p, ChartTag::I) {
            Err(HjcError::DiracString { chart, class }) => {
                assert_eq!(chart, ChartTag::I);
                assert_eq!(class, PointClass::LowerString);
            }
            other => panic!("expected DiracString, got {other:?}"),
        }
        assert!(chart_unitary(&p, ChartTag::II).is_ok());
        let origin = BasePoint::complex(0.0, 0.0, 0.0).unwrap();
        assert!(chart_unitary(&origin, ChartTag::II).is_err());
    }

    #[test]
    fn real_decomposition_on_axis() {
        let p = BasePoint::new(AlgebraElement::zero(AlgebraTag::R), 5.0).unwrap();
        let d = chart_decompose(&p, ChartTag::I).unwrap();
        assert_eq!(d.diagonal, eigenvalue_block(AlgebraTag::R, 5.0));
        assert!(d.unitary.distance(&Matrix2K::identity(AlgebraTag::R)).unwrap() <= 1e-15);
        assert!(reconstruction_residual(&build_hamiltonian(&p), &d).unwrap() <= TOL);
    }

    #[test]
    fn transition_function_examples() {
        let p = BasePoint::complex(3.0, 4.0, 0.5).unwrap();
        let phi = transition_function(&p).unwrap();
        assert!(phi.distance(&Matrix2K::diag(c(0.6, -0.8), c(0.6, 0.8))).unwrap() <= 1e-15);

        let p = BasePoint::complex(2.5, 0.0, -1.0).unwrap();
        assert!(
            transition_function(&p)
                .unwrap()
                .distance(&Matrix2K::identity(AlgebraTag::C))
                .unwrap()
                <= 1e-15
        );

        let p = BasePoint::complex(0.0, 0.0, 1.0).unwrap();
        assert!(matches!(transition_function(&p), Err(HjcError::ZeroFiber(_))));
    }

    #[test]
    fn projector_at_poles() {
        let north = BasePoint::complex(0.0, 0.0, 1.0).unwrap();
        assert_eq!(projector(&north).unwrap(), Matrix2K::basic_projector(AlgebraTag::C));
        let south = BasePoint::complex(0.0, 0.0, -1.0).unwrap();
        assert_eq!(
            projector(&south).unwrap(),
            Matrix2K::from_reals(AlgebraTag::C, [[0.0, 0.0], [0.0, 1.0]])
        );
        let origin = BasePoint::complex(0.0, 0.0, 0.0).unwrap();
        assert!(matches!(projector(&origin), Err(HjcError::Origin)));
    }

    #[test]
    fn two_step_examples() {
        let p = BasePoint::complex(1.0, 0.0, 0.0).unwrap();
        let (l, m, ldag) = two_step_decompose(&p).unwrap();
        assert_eq!(l, Matrix2K::identity(AlgebraTag::C));
        assert_eq!(ldag, Matrix2K::identity(AlgebraTag::C));
        assert_eq!(m, Matrix2K::from_reals(AlgebraTag::C, [[0.0, 1.0], [1.0, 0.0]]));

        let w = AlgebraElement::new(AlgebraTag::H, vec![0.0, 0.0, 0.0, 2.0]).unwrap();
        let p = BasePoint::new(w, 3.0).unwrap();
        let (l, m, ldag) = two_step_decompose(&p).unwrap();
        assert_eq!(m, Matrix2K::from_reals(AlgebraTag::H, [[3.0, 2.0], [2.0, -3.0]]));
        let h = l.mul(&m).unwrap().mul(&ldag).unwrap();
        assert!(h.distance(&build_hamiltonian(&p)).unwrap() <= TOL);

        let p = BasePoint::complex(0.0, 0.0, 1.0).unwrap();
        assert!(two_step_decompose(&p).is_err());
    }

    #[test]
    fn middle_diagonalize_examples() {
        let d = middle_diagonalize(0.0, 1.0, ChartTag::I).unwrap();
        assert!(d.unitary.distance(&Matrix2K::identity(AlgebraTag::R)).unwrap() <= 1e-15);

        let d = middle_diagonalize(1.0, 0.0, ChartTag::I).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = Matrix2K::from_reals(AlgebraTag::R, [[s, -s], [s, s]]);
        assert!(d.unitary.distance(&expected).unwrap() <= 1e-15);

        assert!(matches!(
            middle_diagonalize(0.0, -1.0, ChartTag::I),
            Err(HjcError::DiracString { .. })
        ));
        assert!(matches!(
            middle_diagonalize(0.0, 1.0, ChartTag::II),
            Err(HjcError::DiracString { .. })
        ));
    }

    #[test]
    fn stable_shifted_radius() {
        let p = BasePoint::complex(1e-6, 0.0, -1.0).unwrap();
        // r + z = ‖w‖²/(r − z) ≈ 1e-12 / 2
        assert!((p.r_plus_z() - 5e-13).abs() <= 1e-24);
    }
}
