//! Exact linear algebra over GF(2): packed vectors, row reduction, kernels,
//! and canonical subspace enumeration. Everything downstream (Pauli algebra,
//! stabilizer groups, standard forms, the quadratic-form solvers) reduces to
//! these primitives.

mod bitmatrix;
mod bitvec;
mod subspaces;

pub use bitmatrix::{BitMatrix, Rref};
pub use bitvec::BitVec;
pub use subspaces::{enumerate_subspaces, subspace_count, SubspaceIter};
