//! Berry-model charts over the normed division algebras and the
//! Jaynes–Cummings Hamiltonian read as a non-commutative Berry model.
//!
//! - [`algebra`]: R, C, H, O by Cayley–Dickson doubling.
//! - [`berry`]: classical chart unitaries, Dirac strings, transition function, projector.
//! - [`fock`]: truncated Fock-space operators.
//! - [`block`]: 2×2 block operators on `C² ⊗ F`.
//! - [`jc`]: the quantum charts, singular sectors, projector and closed-form propagator.
//! - [`grassmann`]: local coordinates of the projectors.
//! - [`oracle`]: eigendecomposition-based checks independent of the closed forms.
//! - [`cli`]: report generation behind the `hjc` binary.

pub mod algebra;
pub mod berry;
pub mod block;
pub mod cli;
pub mod error;
pub mod fock;
pub mod grassmann;
pub mod jc;
pub mod oracle;
pub mod tolerance;

pub use algebra::{AlgebraElement, AlgebraTag};
pub use berry::{BasePoint, ChartDecomposition, ChartTag, Matrix2K, PointClass};
pub use block::BlockOperator;
pub use error::{HjcError, Result};
pub use fock::{FockOperator, SafeSubspace};
pub use jc::{JCParams, SectorReport};
pub use tolerance::Tolerances;
