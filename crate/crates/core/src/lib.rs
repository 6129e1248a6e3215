//! Exact arithmetic for even lattices, 2-reflective hyperbolic lattices and
//! the Borcherds product `Δ₁` attached to `2U(12) ⊕ ⟨−2⟩`.
//!
//! The core types are generic over an exact integer scalar (see
//! [`scalar::Int`]); the aliases below fix the common choices.

pub mod error;
pub mod linalg;
pub mod scalar;
pub mod lattice;
pub mod dsl;
pub mod reflect;
pub mod jacobi;
pub mod borcherds;
pub mod mirror;

pub use borcherds::{verify_identity, IdentityReport, IdentityVerdict, QrsSeries};
pub use dsl::{parse, parse_lattice, LatticeExpr};
pub use error::{Error, Result};
pub use jacobi::{phi03_quotient, product_phi03, QrSeries};
pub use lattice::{find_basis_change, invariants_match, LatticeVector, Signature};
pub use mirror::{mirror_quotient, period_vector, MirrorPair, PeriodVector};
pub use reflect::{classify, vinberg_enumerate, ChamberReport, ReflectivityKind, ReflectivityVerdict, VinbergBudget};
pub use scalar::Int;

pub use num_bigint::BigInt;

/// Arbitrary-precision lattice, the default for all public entry points.
pub type Lattice = lattice::Lattice<BigInt>;
/// Machine-integer lattice for small, hot computations.
pub type SmallLattice = lattice::Lattice<i64>;
pub type Vector = lattice::LatticeVector<BigInt>;
pub type SmallVector = lattice::LatticeVector<i64>;
