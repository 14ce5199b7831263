//! The four normed division algebras R, C, H and O built by Cayley–Dickson
//! doubling from the reals.
//!
//! An element of dimension `2n` is stored as the concatenation of its two
//! halves `(a, b)`, each an element of dimension `n`. Multiplication follows
//!
//! ```text
//! (a, b)(c, d) = (ac − d̄b, da + bc̄)
//! ```
//!
//! applied recursively down to real multiplication. With this layout the
//! quaternion basis is `1, i, j, k` in slots `0..4` with `ij = k`, and the
//! first four octonion slots form a copy of H.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HjcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraTag {
    R,
    C,
    H,
    O,
}

impl AlgebraTag {
    pub const ALL: [AlgebraTag; 4] = [AlgebraTag::R, AlgebraTag::C, AlgebraTag::H, AlgebraTag::O];

    pub fn dim(self) -> usize {
        match self {
            AlgebraTag::R => 1,
            AlgebraTag::C => 2,
            AlgebraTag::H => 4,
            AlgebraTag::O => 8,
        }
    }

    pub fn from_dim(dim: usize) -> Option<Self> {
        match dim {
            1 => Some(AlgebraTag::R),
            2 => Some(AlgebraTag::C),
            4 => Some(AlgebraTag::H),
            8 => Some(AlgebraTag::O),
            _ => None,
        }
    }
}

impl fmt::Display for AlgebraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraTag::R => "R",
            AlgebraTag::C => "C",
            AlgebraTag::H => "H",
            AlgebraTag::O => "O",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for AlgebraTag {
    type Err = HjcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(AlgebraTag::R),
            "C" | "c" => Ok(AlgebraTag::C),
            "H" | "h" => Ok(AlgebraTag::H),
            "O" | "o" => Ok(AlgebraTag::O),
            other => Err(HjcError::Params(format!("unknown algebra '{other}'"))),
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawElement {
    tag: AlgebraTag,
    coeffs: Vec<f64>,
}

/// An element `x_0 + Σ x_j k_j` of one of the division algebras.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawElement")]
pub struct AlgebraElement {
    tag: AlgebraTag,
    coeffs: Vec<f64>,
}

impl TryFrom<RawElement> for AlgebraElement {
    type Error = HjcError;

    fn try_from(raw: RawElement) -> Result<Self> {
        AlgebraElement::new(raw.tag, raw.coeffs)
    }
}

impl AlgebraElement {
    pub fn new(tag: AlgebraTag, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != tag.dim() {
            return Err(HjcError::CoeffLength {
                tag,
                expected: tag.dim(),
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(HjcError::NonFinite);
        }
        Ok(Self { tag, coeffs })
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        Self {
            tag,
            coeffs: vec![0.0; tag.dim()],
        }
    }

    pub fn real(tag: AlgebraTag, x: f64) -> Self {
        let mut e = Self::zero(tag);
        e.coeffs[0] = x;
        e
    }

    pub fn one(tag: AlgebraTag) -> Self {
        Self::real(tag, 1.0)
    }

    /// The `k`-th generator (`k = 0` is the unit).
    pub fn basis(tag: AlgebraTag, k: usize) -> Self {
        assert!(k < tag.dim(), "basis index {k} out of range for {tag}");
        let mut e = Self::zero(tag);
        e.coeffs[k] = 1.0;
        e
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    fn check_tag(&self, other: &Self) -> Result<()> {
        if self.tag != other.tag {
            return Err(HjcError::TagMismatch {
                left: self.tag,
                right: other.tag,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_tag(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_tag(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_tag(other)?;
        Ok(Self {
            tag: self.tag,
            coeffs: cd_mul(&self.coeffs, &other.coeffs),
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            tag: self.tag,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.iter_mut().skip(1) {
            *c = -*c;
        }
        Self { tag: self.tag, coeffs }
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inverse(&self) -> Result<Self> {
        let n2 = self.norm_sq();
        if n2 == 0.0 {
            return Err(HjcError::ZeroInverse);
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            tag: self.tag,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

/// `(ab)c − a(bc)`.
pub fn associator(a: &AlgebraElement, b: &AlgebraElement, c: &AlgebraElement) -> Result<AlgebraElement> {
    a.mul(b)?.mul(c)?.sub(&a.mul(&b.mul(c)?)?)
}

/// Exhaustive search over generator triples `(e_i, e_j, e_k)`, `i, j, k ≥ 1`,
/// for the first one whose associator is nonzero.
pub fn find_nonassociative_triple(tag: AlgebraTag) -> Option<(usize, usize, usize)> {
    let n = tag.dim();
    for i in 1..n {
        for j in 1..n {
            for k in 1..n {
                let (a, b, c) = (
                    AlgebraElement::basis(tag, i),
                    AlgebraElement::basis(tag, j),
                    AlgebraElement::basis(tag, k),
                );
                let assoc = associator(&a, &b, &c).expect("same tag");
                if assoc.max_abs() > 0.0 {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

fn cd_conj(x: &[f64]) -> Vec<f64> {
    let mut out = x.to_vec();
    for c in out.iter_mut().skip(1) {
        *c = -*c;
    }
    out
}

fn cd_mul(x: &[f64], y: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), y.len());
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);

    // (a,b)(c,d) = (ac − d̄b, da + bc̄)
    let ac = cd_mul(a, c);
    let dbar_b = cd_mul(&cd_conj(d), b);
    let da = cd_mul(d, a);
    let b_cbar = cd_mul(b, &cd_conj(c));

    let mut out = Vec::with_capacity(n);
    out.extend(ac.iter().zip(&dbar_b).map(|(p, q)| p - q));
    out.extend(da.iter().zip(&b_cbar).map(|(p, q)| p + q));
    out
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.tag, self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(tag: AlgebraTag, c: &[f64]) -> AlgebraElement {
        AlgebraElement::new(tag, c.to_vec()).unwrap()
    }

    #[test]
    fn add_examples() {
        let s = el(AlgebraTag::C, &[1.0, 2.0])
            .add(&el(AlgebraTag::C, &[3.0, -1.0]))
            .unwrap();
        assert_eq!(s.coeffs(), &[4.0, 1.0]);

        let x = el(AlgebraTag::O, &[1.0, -2.0, 3.0, 0.5, 0.0, 7.0, -1.0, 2.0]);
        assert_eq!(AlgebraElement::zero(AlgebraTag::O).add(&x).unwrap(), x);

        let s = AlgebraElement::basis(AlgebraTag::H, 0)
            .add(&AlgebraElement::basis(AlgebraTag::H, 1))
            .unwrap();
        assert_eq!(s.coeffs(), &[1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn tag_mismatch_is_an_error() {
        let a = AlgebraElement::one(AlgebraTag::C);
        let b = AlgebraElement::one(AlgebraTag::H);
        assert!(matches!(a.add(&b), Err(HjcError::TagMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(HjcError::TagMismatch { .. })));
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(AlgebraElement::new(AlgebraTag::H, vec![1.0, 2.0]).is_err());
        assert!(AlgebraElement::new(AlgebraTag::C, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn complex_i_squared() {
        let i = AlgebraElement::basis(AlgebraTag::C, 1);
        assert_eq!(i.mul(&i).unwrap().coeffs(), &[-1.0, 0.0]);
    }

    #[test]
    fn quaternion_ij_is_k() {
        // By hand: i = ((0,1),(0,0)), j = ((0,0),(1,0)).
        // (a,b)(c,d) with a = i_C, b = 0, c = 0, d = 1 gives (0, 1·i_C) = slot 3.
        let q = |k| AlgebraElement::basis(AlgebraTag::H, k);
        assert_eq!(q(1).mul(&q(2)).unwrap(), q(3));
        assert_eq!(q(2).mul(&q(3)).unwrap(), q(1));
        assert_eq!(q(3).mul(&q(1)).unwrap(), q(2));
        assert_eq!(q(2).mul(&q(1)).unwrap(), q(3).neg());
        for k in 1..4 {
            assert_eq!(q(k).mul(&q(k)).unwrap(), q(0).neg());
        }
    }

    #[test]
    fn octonions_have_a_nonzero_associator() {
        assert_eq!(find_nonassociative_triple(AlgebraTag::R), None);
        assert_eq!(find_nonassociative_triple(AlgebraTag::C), None);
        assert_eq!(find_nonassociative_triple(AlgebraTag::H), None);
        let (i, j, k) = find_nonassociative_triple(AlgebraTag::O).expect("octonions are not associative");
        let e = |n| AlgebraElement::basis(AlgebraTag::O, n);
        let left = e(i).mul(&e(j)).unwrap().mul(&e(k)).unwrap();
        let right = e(i).mul(&e(j).mul(&e(k)).unwrap()).unwrap();
        assert_ne!(left, right);
    }

    #[test]
    fn conj_examples() {
        assert_eq!(el(AlgebraTag::C, &[1.0, 2.0]).conj().coeffs(), &[1.0, -2.0]);
        let r = AlgebraElement::real(AlgebraTag::O, 3.5);
        assert_eq!(r.conj(), r);
        let x = el(AlgebraTag::H, &[1.0, -2.0, 3.0, 4.0]);
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn norm_sq_examples() {
        assert_eq!(el(AlgebraTag::C, &[3.0, 4.0]).norm_sq(), 25.0);
        assert_eq!(AlgebraElement::zero(AlgebraTag::H).norm_sq(), 0.0);
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(matches!(
            AlgebraElement::zero(AlgebraTag::O).inverse(),
            Err(HjcError::ZeroInverse)
        ));
    }

    #[test]
    fn inverse_is_two_sided_for_octonions() {
        let x = el(AlgebraTag::O, &[0.3, -1.2, 2.0, 0.7, -0.4, 1.1, 0.0, -2.5]);
        let inv = x.inverse().unwrap();
        for p in [x.mul(&inv).unwrap(), inv.mul(&x).unwrap()] {
            assert!((p.scalar_part() - 1.0).abs() <= 1e-13);
            assert!(p.coeffs()[1..].iter().all(|c| c.abs() <= 1e-13));
        }
    }

    #[test]
    fn json_shape() {
        let x = el(AlgebraTag::C, &[1.0, -2.0]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"tag":"C","coeffs":[1.0,-2.0]}"#);
        let back: AlgebraElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<AlgebraElement>(r#"{"tag":"O","coeffs":[1.0]}"#).is_err());
    }
}
