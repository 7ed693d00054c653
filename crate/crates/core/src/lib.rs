//! Exact diagonalization of the adiabatic interpolation `H(t) = (1-t) H(0) + t H(1)`
//! for single-solution random 3-SAT, together with the eigenlevel statistics
//! built on top of it: spacing distributions, entanglement of eigenstates,
//! minimal-gap ensembles and the solution-probability flow.
//!
//! Basis convention used throughout: computational basis index `i` in `[0, 2^n)`,
//! bit `k` of `i` (least significant first) is the value of variable/qubit `k`.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod eigen;
pub mod entangle;
pub mod error;
pub mod gaps;
pub mod hamiltonian;
pub mod sat;
pub mod spectral;

pub use eigen::{eig_full, eig_lowest, eigvals_full, eigvals_lowest, EigenSystem};
pub use entangle::{ReducedDensity, StateVector};
pub use error::{Error, Result};
pub use gaps::{EnsembleGapStats, GapRecord, ScalingRow, ScalingTable};
pub use hamiltonian::{DiagonalFinal, SymmetricOperator};
pub use sat::{Assignment, Clause, Literal, SatInstance};
pub use spectral::{ReferenceLaw, SpacingSample, SpectralWindow};

/// Largest variable count handled by exhaustive enumeration.
pub const MAX_ENUM_VARS: usize = 24;

/// Largest qubit count for which dense `N x N` storage is allowed.
pub const MAX_DENSE_QUBITS: usize = 14;
