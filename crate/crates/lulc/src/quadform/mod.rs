//! Quadratic forms over GF(2) and the phase-representability solvers built
//! on them: exact linear algebra over Z/2^l (Howell form), over the
//! integers (Smith form), an independent brute-force referee, and the
//! exhaustive counterexample search that cross-checks them all.

pub mod form;
pub mod howell;
pub mod search;
pub mod snf;
pub mod solvers;

pub use form::{FormError, QuadraticForm};
pub use howell::{howell_solve, HowellError, HowellForm};
pub use search::{
    counterexample_search, sampled_search, SearchConfig, SearchHit, SearchReport, MAX_EXHAUSTIVE_N,
    MAX_SAMPLED_N,
};
pub use snf::{smith_normal_form, IntMatrix, SmithDecomposition};
pub use solvers::{
    complex_representable, dyadic_witness_search, z2l_representable, PhaseAssignment, PhaseSystem,
    QuadformError, MAX_LEVEL,
};
