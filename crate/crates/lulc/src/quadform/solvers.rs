//! Phase representability of a quadratic form on a subspace.
//!
//! Fix a subspace S of F2^n and a quadratic form Q. We look for per-position
//! phases c_i of modulus one with prod_i c_i^{s_i} = (-1)^{Q(s)} for every
//! s in S. Writing c_i = exp(i pi a_i) turns this into a linear congruence
//! system: sum_i a_i s_i = Q(s) (mod 2), with the s_i lifted to integers.
//! Three solvers answer it in different phase rings:
//!
//! * `z2l_representable`: a_i restricted to multiples of 1/2^(l-1), i.e.
//!   2^l-th roots of unity, solved exactly over Z/2^l by Howell elimination.
//! * `complex_representable`: a_i arbitrary real, decided by exact integer
//!   linear algebra (left kernel plus a Smith-form divisibility check), with
//!   a rational witness whenever the answer is yes.
//! * `dyadic_witness_search`: brute force over a fixed grid a_i = j/2^d,
//!   independent of the algebra above; used to cross-check the other two.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::form::QuadraticForm;
use super::howell::howell_solve;
use super::snf::{smith_normal_form, IntMatrix};
use crate::gf2::{BitMatrix, BitVec};

/// Roots-of-unity levels accepted by `z2l_representable`.
pub const MAX_LEVEL: u32 = 6;
/// Subspace enumeration cap for the Howell-based solver.
pub const MAX_ROOT_POINTS: u64 = 4096;
/// Subspace enumeration cap for the Smith-form solver (it keeps dense
/// unimodular transforms of that size).
pub const MAX_KERNEL_POINTS: u64 = 256;
/// Cap on total enumeration bits (grid bits times positions) for the
/// brute-force witness search.
pub const MAX_DYADIC_BITS: u32 = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuadformError {
    #[error("subspace basis rows are dependent")]
    DependentBasis,
    #[error("form dimension {form} does not match ambient dimension {ambient}")]
    DimensionMismatch { form: usize, ambient: usize },
    #[error("level {0} out of range 1..={MAX_LEVEL}")]
    LevelOutOfRange(u32),
    #[error("instance needs {points} enumeration points, the guard is {max}")]
    TooLarge { points: u64, max: u64 },
    #[error("{found} values supplied, expected {expected} (one per subspace element)")]
    ValueCount { expected: u64, found: usize },
    #[error("values are not generated by any quadratic form on the subspace")]
    ValuesNotQuadratic,
}

/// Exponent index to coordinate vector: bit i of `idx` is coordinate i.
pub(crate) fn exponent_bits(idx: u64, len: usize) -> BitVec {
    let mut v = BitVec::zeros(len);
    for i in 0..len {
        if idx >> i & 1 == 1 {
            v.set(i, true);
        }
    }
    v
}

/// A quadratic form together with the subspace it is evaluated on. Only the
/// restriction of the form to the subspace matters for representability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseSystem {
    n: usize,
    s_basis: BitMatrix,
    q: QuadraticForm,
}

#[derive(Serialize, Deserialize)]
struct PhaseSystemParts {
    #[serde(rename = "S")]
    s: Vec<String>,
    theta: BitMatrix,
    lambda: BitVec,
}

impl PhaseSystem {
    pub fn new(s_basis: BitMatrix, q: QuadraticForm) -> Result<Self, QuadformError> {
        let n = s_basis.n_cols();
        if q.m() != n {
            return Err(QuadformError::DimensionMismatch {
                form: q.m(),
                ambient: n,
            });
        }
        if s_basis.rank() != s_basis.n_rows() {
            return Err(QuadformError::DependentBasis);
        }
        Ok(PhaseSystem { n, s_basis, q })
    }

    /// Builds the system from the values of `(-1)^Q` on the subspace,
    /// listed in exponent order over the given basis rows (index bit i is
    /// the coefficient of row i; `values[idx]` is true where the sign is -1).
    ///
    /// The values must extend to a quadratic form; the reconstruction is
    /// fitted on the low-weight exponents and then checked everywhere.
    pub fn from_values(s_basis: BitMatrix, values: &[bool]) -> Result<Self, QuadformError> {
        let k = s_basis.n_rows();
        let n = s_basis.n_cols();
        if s_basis.rank() != k {
            return Err(QuadformError::DependentBasis);
        }
        if k >= 20 || values.len() as u64 != 1 << k {
            return Err(QuadformError::ValueCount {
                expected: 1u64.checked_shl(k as u32).unwrap_or(u64::MAX),
                found: values.len(),
            });
        }
        if values[0] {
            // the empty product is 1, so no phase choice can make f(0) = -1
            return Err(QuadformError::ValuesNotQuadratic);
        }
        let coord = QuadraticForm::fit(k, |c| values[c.to_index_le() as usize]);
        for (idx, &v) in values.iter().enumerate() {
            if coord.evaluate(&exponent_bits(idx as u64, k)) != v {
                return Err(QuadformError::ValuesNotQuadratic);
            }
        }
        // Transport the coordinate form to the ambient space through a left
        // inverse of c -> c . basis. With T . basis in reduced echelon form,
        // the echelon coordinates of a span element are its entries at the
        // pivot columns, and c = coords . T recovers the basis coordinates.
        let red = s_basis.rref();
        debug_assert_eq!(red.rank, k);
        let pivots = red.pivots.clone();
        let transform = red.transform.clone();
        let project = |y: &BitVec| -> BitVec {
            let coords = BitVec::from_bools(&pivots.iter().map(|&p| y.get(p)).collect::<Vec<_>>());
            transform.combine_rows(&coords)
        };
        let ambient = QuadraticForm::fit(n, |y| coord.evaluate(&project(y)));
        PhaseSystem::new(s_basis, ambient)
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn k(&self) -> usize {
        self.s_basis.n_rows()
    }

    #[must_use]
    pub fn s_basis(&self) -> &BitMatrix {
        &self.s_basis
    }

    #[must_use]
    pub fn q(&self) -> &QuadraticForm {
        &self.q
    }

    /// Subspace elements in exponent order with the form evaluated on each.
    #[must_use]
    pub fn points(&self) -> (Vec<BitVec>, Vec<bool>) {
        let k = self.k();
        assert!(k < 63, "exponent enumeration overflow");
        let mut elements = Vec::with_capacity(1 << k);
        let mut values = Vec::with_capacity(1 << k);
        for idx in 0..1u64 << k {
            let s = self.s_basis.combine_rows(&exponent_bits(idx, k));
            values.push(self.q.evaluate(&s));
            elements.push(s);
        }
        (elements, values)
    }

    /// `(-1)^Q` on the subspace in exponent order; `from_values` of this
    /// vector rebuilds an equivalent system.
    #[must_use]
    pub fn values(&self) -> Vec<bool> {
        self.points().1
    }
}

impl Serialize for PhaseSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PhaseSystemParts {
            s: self.s_basis.rows().iter().map(|r| r.to_string()).collect(),
            theta: self.q.theta().clone(),
            lambda: self.q.lambda().clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PhaseSystem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let parts = PhaseSystemParts::deserialize(deserializer)?;
        let n = parts.lambda.len();
        let rows = parts
            .s
            .iter()
            .map(|r| BitVec::parse(r).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        for row in &rows {
            if row.len() != n {
                return Err(D::Error::custom("basis row length does not match lambda"));
            }
        }
        let q = QuadraticForm::new(parts.theta, parts.lambda).map_err(D::Error::custom)?;
        PhaseSystem::new(BitMatrix::from_rows(rows, n), q).map_err(D::Error::custom)
    }
}

/// Phases drawn from the 2^l-th roots of unity: position i carries
/// `c_i = exp(i pi b_i / 2^(l-1))`, so l=1 means signs and l=2 means
/// fourth roots {1, i, -1, -i}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseAssignment {
    pub level: u32,
    pub b: Vec<u64>,
}

impl PhaseAssignment {
    #[must_use]
    pub fn phases(&self) -> Vec<Complex64> {
        let denom = f64::from(1u32 << (self.level - 1));
        self.b
            .iter()
            .map(|&bi| Complex64::from_polar(1.0, std::f64::consts::PI * bi as f64 / denom))
            .collect()
    }
}

pub(crate) fn z2l_points(
    points: &[BitVec],
    values: &[bool],
    n: usize,
    level: u32,
) -> Option<Vec<u64>> {
    let rows: Vec<Vec<u64>> = points
        .iter()
        .map(|s| (0..n).map(|i| u64::from(s.get(i))).collect())
        .collect();
    let rhs: Vec<u64> = values
        .iter()
        .map(|&v| u64::from(v) << (level - 1))
        .collect();
    howell_solve(&rows, &rhs, level).expect("guarded shape and level")
}

/// Phase assignment by 2^l-th roots of unity, or `None` if the congruence
/// system has no solution at this level. Any returned assignment satisfies
/// the congruence on every element of the subspace: the solver verifies the
/// candidate by substitution before handing it back.
pub fn z2l_representable(
    ps: &PhaseSystem,
    level: u32,
) -> Result<Option<PhaseAssignment>, QuadformError> {
    if !(1..=MAX_LEVEL).contains(&level) {
        return Err(QuadformError::LevelOutOfRange(level));
    }
    check_points_guard(ps.k(), MAX_ROOT_POINTS)?;
    let (points, values) = ps.points();
    Ok(z2l_points(&points, &values, ps.n(), level).map(|b| PhaseAssignment { level, b }))
}

fn check_points_guard(k: usize, max: u64) -> Result<(), QuadformError> {
    let points = 1u64.checked_shl(k as u32).unwrap_or(u64::MAX);
    if points > max {
        return Err(QuadformError::TooLarge { points, max });
    }
    Ok(())
}

pub(crate) fn complex_points(
    points: &[BitVec],
    values: &[bool],
    n: usize,
) -> Option<Vec<BigRational>> {
    let rows = points.len();
    let mut m = IntMatrix::zeros(rows, n);
    for (r, s) in points.iter().enumerate() {
        for i in s.ones() {
            m.set(r, i, BigInt::one());
        }
    }
    let q: Vec<BigInt> = values.iter().map(|&v| BigInt::from(u8::from(v))).collect();

    // Solvability of "M a = q (mod 2), a real": absorbing the congruence into
    // an unknown integer vector kappa, the system M a = q + 2 kappa must be
    // consistent over the rationals, i.e. q + 2 kappa must be orthogonal to
    // the left kernel of M. With U a saturated integer kernel basis this
    // says U q is even and U kappa = -U q / 2 has an integer solution.
    let decomp = smith_normal_form(&m);
    let kernel = decomp.left_kernel_basis();
    let mut w = Vec::with_capacity(kernel.n_rows());
    for r in 0..kernel.n_rows() {
        let dot: BigInt = (0..rows).map(|j| kernel.get(r, j) * &q[j]).sum();
        if dot.is_odd() {
            return None;
        }
        w.push(-(dot / BigInt::from(2)));
    }
    let kappa = smith_normal_form(&kernel).solve_integer(&w)?;
    let rhs: Vec<BigInt> = q.iter().zip(&kappa).map(|(qi, ki)| qi + 2 * ki).collect();
    let a = decomp
        .solve_rational(&rhs)
        .expect("rhs is orthogonal to the left kernel by construction");
    // phases repeat with period 2 in the exponent; reduce into [0, 2)
    let two = BigRational::from(BigInt::from(2));
    let a: Vec<BigRational> = a
        .into_iter()
        .map(|ai| {
            let f = (&ai / &two).floor() * &two;
            ai - f
        })
        .collect();
    for (s, &v) in points.iter().zip(values) {
        let mut acc = BigRational::zero();
        for i in s.ones() {
            acc += &a[i];
        }
        acc -= BigRational::from(BigInt::from(u8::from(v)));
        assert!(
            acc.is_integer() && acc.to_integer().is_even(),
            "phase witness fails the defining congruence"
        );
    }
    Some(a)
}

/// Decides whether arbitrary modulus-one phases can represent the signs
/// `(-1)^Q` on the subspace. `Some(a)` holds phase exponents in units of pi
/// (so `c_i = exp(i pi a_i)`), reduced into `[0, 2)`; `None` means no choice
/// of phases works. Decided by exact integer arithmetic throughout.
pub fn complex_representable(ps: &PhaseSystem) -> Result<Option<Vec<BigRational>>, QuadformError> {
    check_points_guard(ps.k(), MAX_KERNEL_POINTS)?;
    let (points, values) = ps.points();
    Ok(complex_points(&points, &values, ps.n()))
}

pub(crate) fn dyadic_points(
    points: &[BitVec],
    values: &[bool],
    n: usize,
    log2_denom: u32,
) -> Option<Vec<u64>> {
    let modulus = 1u64 << (log2_denom + 1);
    // per constraint: mask of participating positions and the target residue
    let mut by_top: Vec<Vec<(u64, u64)>> = vec![Vec::new(); n];
    for (s, &v) in points.iter().zip(values) {
        let target = u64::from(v) << log2_denom;
        match s.ones().max() {
            Some(top) => by_top[top].push((s.to_index_le(), target)),
            None => {
                if target != 0 {
                    return None;
                }
            }
        }
    }

    // depth-first over j_0, j_1, ...; a constraint is checked as soon as its
    // highest position is assigned, which prunes most of the grid
    fn descend(
        var: usize,
        n: usize,
        modulus: u64,
        by_top: &[Vec<(u64, u64)>],
        j: &mut Vec<u64>,
    ) -> bool {
        if var == n {
            return true;
        }
        for cand in 0..modulus {
            j[var] = cand;
            let ok = by_top[var].iter().all(|&(mask, target)| {
                let sum: u64 = (0..=var)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| j[i])
                    .sum();
                sum % modulus == target
            });
            if ok && descend(var + 1, n, modulus, by_top, j) {
                return true;
            }
        }
        false
    }

    let mut j = vec![0u64; n];
    descend(0, n, modulus, &by_top, &mut j).then_some(j)
}

/// Brute-force witness search over the phase grid `c_i = exp(i pi j_i / 2^d)`
/// with `d = log2_denom`, exhausting all `j` in `{0, ..., 2^(d+1) - 1}^n`.
/// One-sided by construction: a returned witness is checked on every
/// element, while `None` only rules out this particular grid.
///
/// Shares nothing with the Howell or Smith-form solvers, which makes it a
/// fully independent referee for both.
pub fn dyadic_witness_search(
    ps: &PhaseSystem,
    log2_denom: u32,
) -> Result<Option<Vec<u64>>, QuadformError> {
    check_points_guard(ps.k(), MAX_ROOT_POINTS)?;
    let bits = (log2_denom + 1).saturating_mul(ps.n() as u32);
    if bits > MAX_DYADIC_BITS {
        return Err(QuadformError::TooLarge {
            points: 1u64.checked_shl(bits).unwrap_or(u64::MAX),
            max: 1 << MAX_DYADIC_BITS,
        });
    }
    let (points, values) = ps.points();
    Ok(dyadic_points(&points, &values, ps.n(), log2_denom))
}
