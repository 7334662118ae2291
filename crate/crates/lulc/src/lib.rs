//! Exact computational kernel for local-unitary questions about stabilizer
//! states, built on GF(2) linear algebra.
//!
//! The chain of reductions implemented here:
//!
//! * stabilizer groups and codes in binary symplectic form ([`pauli`],
//!   [`stabilizer`]),
//! * dense state vectors and projectors for cross-checking ([`statevec`]),
//! * the standard form of a maximal stabilizer state: an affine support
//!   plus fourth-root-of-unity amplitudes governed by a quadratic form over
//!   GF(2) ([`standardform`]),
//! * whether a sign pattern on a subspace is realizable by diagonal local
//!   phases, at a given root-of-unity level or with unconstrained complex
//!   phases ([`quadform`]),
//! * purification of stabilizer codes to stabilizer states ([`purify`]),
//! * single-qubit Clifford machinery, semi-Clifford decompositions, and
//!   brute-force local-equivalence oracles ([`equiv`]).

pub mod equiv;
pub mod gf2;
pub mod pauli;
pub mod purify;
pub mod quadform;
pub mod stabilizer;
pub mod standardform;
pub mod statevec;

pub use equiv::{dlu_check, is_semi_clifford, SingleQubitUnitary};
pub use gf2::{BitMatrix, BitVec};
pub use pauli::PauliOp;
pub use purify::{purify, Purification};
pub use quadform::{PhaseSystem, QuadraticForm};
pub use stabilizer::StabilizerGroup;
pub use standardform::StandardForm;
