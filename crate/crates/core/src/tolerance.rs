//! Shared numerical thresholds.
//!
//! Every residual check in the crate reads its bound from a [`Tolerances`]
//! record so the CLI can override individual tiers with `--tol-*` flags.

use serde::{Deserialize, Serialize};

/// `||w||` at or below this puts a point on a Dirac string.
pub const STRING_EPS: f64 = 1e-14;
/// Sector denominators at or below this are singular.
pub const SINGULAR_EPS: f64 = 1e-14;
/// Sector denominators below this (but above [`SINGULAR_EPS`]) are ill-conditioned.
pub const ILL_CONDITIONED: f64 = 1e-6;
/// Diagonal entries at or below this are treated as zero by the pseudo-inverse.
pub const PSEUDO_INVERSE_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Algebraic identities (unitarity, idempotency, cocycle, commutators).
    pub algebraic: f64,
    /// Decomposition reconstructions on the truncated Fock space.
    pub reconstruction: f64,
    /// Closed-form propagator against the eigendecomposition exponential.
    pub propagator: f64,
    /// Shift identities and two-form equalities on the Fock space.
    pub shift: f64,
    /// Hermiticity precondition for the oracle eigensolver.
    pub hermitian: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-12,
            reconstruction: 1e-10,
            propagator: 1e-8,
            shift: 1e-13,
            hermitian: 1e-10,
        }
    }
}
