//! Amplitude standard form of stabilizer states.
//!
//! A stabilizer state is, up to global phase, determined by four pieces of
//! data: an affine support `S + t` (subspace basis in reduced echelon form
//! plus the lexicographically smallest support point `t`), a sign vector
//! `mu` and a quadratic form `q` on the subspace coordinates. The amplitude
//! at `y + t` with coordinate vector `c` is
//!
//! `2^(-k/2) * i^(mu.c mod 2) * (-1)^(q(c))`.
//!
//! `extract` recovers the data from a dense vector by fitting that formula
//! (and thereby doubles as a stabilizer-state test), `synthesize` evaluates
//! it, and `standardize` removes the base point and sign vector by applying
//! explicit X and phase gates, tracking the induced correction of `q`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};
use crate::quadform::QuadraticForm;
use crate::statevec::{StateVector, MAX_STATE_QUBITS};

/// Relative distance to the nearest element of {1, i, -1, -i} times the
/// common modulus at which an amplitude is still classified.
pub const AMPLITUDE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StandardFormError {
    #[error("support is not an affine subspace")]
    SupportNotAffine,
    #[error("amplitudes are not fourth roots of unity times a common constant")]
    AmplitudeNotFourthRootTimesConstant,
    #[error("amplitude exponents do not fit any quadratic form")]
    InconsistentQuadraticFit,
    #[error("invalid standard form data: {0}")]
    InvalidData(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    n: usize,
    s_basis: BitMatrix,
    t: BitVec,
    mu: BitVec,
    q: QuadraticForm,
}

#[derive(Serialize, Deserialize)]
struct StandardFormParts {
    #[serde(rename = "S")]
    s: Vec<String>,
    t: BitVec,
    mu: BitVec,
    theta: BitMatrix,
    lambda: BitVec,
}

impl StandardForm {
    /// Validates the canonical-form invariants: echelon basis, base point
    /// reduced against it (equivalently, lexicographically smallest in its
    /// coset), matching dimensions.
    pub fn new(
        s_basis: BitMatrix,
        t: BitVec,
        mu: BitVec,
        q: QuadraticForm,
    ) -> Result<Self, StandardFormError> {
        let n = s_basis.n_cols();
        let k = s_basis.n_rows();
        if n == 0 {
            return Err(StandardFormError::InvalidData(
                "need at least one qubit".into(),
            ));
        }
        if !s_basis.is_rref_basis() {
            return Err(StandardFormError::InvalidData(
                "basis is not in reduced echelon form".into(),
            ));
        }
        if t.len() != n {
            return Err(StandardFormError::InvalidData(
                "base point length mismatch".into(),
            ));
        }
        if s_basis.reduce_vec(&t) != t {
            return Err(StandardFormError::InvalidData(
                "base point is not the smallest element of its coset".into(),
            ));
        }
        if mu.len() != k {
            return Err(StandardFormError::InvalidData("mu length mismatch".into()));
        }
        if q.m() != k {
            return Err(StandardFormError::InvalidData(
                "form dimension mismatch".into(),
            ));
        }
        Ok(StandardForm {
            n,
            s_basis,
            t,
            mu,
            q,
        })
    }

    #[must_use]
    pub fn n_qubits(&self) -> usize {
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
    pub fn t(&self) -> &BitVec {
        &self.t
    }

    #[must_use]
    pub fn mu(&self) -> &BitVec {
        &self.mu
    }

    #[must_use]
    pub fn q(&self) -> &QuadraticForm {
        &self.q
    }
}

impl Serialize for StandardForm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StandardFormParts {
            s: self.s_basis.rows().iter().map(|r| r.to_string()).collect(),
            t: self.t.clone(),
            mu: self.mu.clone(),
            theta: self.q.theta().clone(),
            lambda: self.q.lambda().clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StandardForm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let parts = StandardFormParts::deserialize(deserializer)?;
        let n = parts.t.len();
        let rows = parts
            .s
            .iter()
            .map(|r| BitVec::parse(r).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        for row in &rows {
            if row.len() != n {
                return Err(D::Error::custom("basis row length does not match t"));
            }
        }
        let q = QuadraticForm::new(parts.theta, parts.lambda).map_err(D::Error::custom)?;
        StandardForm::new(BitMatrix::from_rows(rows, n), parts.t, parts.mu, q)
            .map_err(D::Error::custom)
    }
}

fn i_power(v: u8) -> Complex64 {
    match v % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn exponent_vec(idx: usize, len: usize) -> BitVec {
    crate::quadform::solvers::exponent_bits(idx as u64, len)
}

/// Dense state with the standard-form amplitudes.
///
/// # Panics
/// Panics if the qubit count exceeds the dense-vector guard.
#[must_use]
pub fn synthesize(sf: &StandardForm) -> StateVector {
    let n = sf.n;
    let k = sf.k();
    assert!(
        n <= MAX_STATE_QUBITS,
        "state synthesis capped at {MAX_STATE_QUBITS} qubits"
    );
    let modulus = 0.5f64.powi(i32::try_from(k).expect("small k")).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for c_idx in 0..1usize << k {
        let c = exponent_vec(c_idx, k);
        let y = sf.s_basis.combine_rows(&c);
        let x = y.xor(&sf.t);
        let v = u8::from(sf.mu.dot(&c)) + 2 * u8::from(sf.q.evaluate(&c));
        amps[x.to_basis_index()] = i_power(v).scale(modulus);
    }
    StateVector::new(n, amps).expect("unit norm by construction")
}

/// Reads the standard form back off a dense vector; errors identify the
/// first broken stabilizer-state property. Succeeds exactly when the
/// amplitudes fit the standard-form formula to within the classification
/// tolerance, so it doubles as a stabilizer-state test.
pub fn extract(psi: &StateVector) -> Result<StandardForm, StandardFormError> {
    let n = psi.n_qubits();
    let amps = psi.amps();
    let max_abs = amps.iter().map(|a| a.norm()).fold(0.0f64, f64::max);
    // valid supports have all moduli equal, so any cut strictly between 0
    // and the common value works; half the maximum is robust both ways
    let support: Vec<usize> = (0..amps.len())
        .filter(|&i| amps[i].norm() > 0.5 * max_abs)
        .collect();

    // the smallest index is in every candidate coset exactly once
    let t = BitVec::from_basis_index(n, support[0]);
    let diffs: Vec<BitVec> = support
        .iter()
        .map(|&i| BitVec::from_basis_index(n, i).xor(&t))
        .collect();
    let red = BitMatrix::from_rows(diffs.clone(), n).rref();
    let k = red.rank;
    if support.len() != 1 << k {
        return Err(StandardFormError::SupportNotAffine);
    }
    let s_basis = BitMatrix::from_rows(red.matrix.rows()[..k].to_vec(), n);

    // common modulus and global phase from the base point
    let modulus = 0.5f64.powi(i32::try_from(k).expect("small k")).sqrt();
    let at_t = amps[support[0]];
    if (at_t.norm() - modulus).abs() > AMPLITUDE_TOL * modulus {
        return Err(StandardFormError::AmplitudeNotFourthRootTimesConstant);
    }
    let phase = at_t / at_t.norm();

    // fourth-root exponent of each support amplitude, indexed by coordinates
    let mut v_by_c = vec![0u8; 1 << k];
    for (idx, diff) in support.iter().zip(&diffs) {
        let unit = amps[*idx] / (phase * modulus);
        let (mut best, mut best_dist) = (0u8, f64::INFINITY);
        for v in 0..4u8 {
            let d = (unit - i_power(v)).norm();
            if d < best_dist {
                best = v;
                best_dist = d;
            }
        }
        if best_dist > AMPLITUDE_TOL {
            return Err(StandardFormError::AmplitudeNotFourthRootTimesConstant);
        }
        let c = s_basis
            .coordinates(diff)
            .expect("support differences span the computed basis");
        v_by_c[c.to_index_le() as usize] = best;
    }

    // fit mu and the form on the basis vectors and their pairwise sums
    let mut mu = BitVec::zeros(k);
    let mut q = QuadraticForm::zero(k);
    for j in 0..k {
        let v = v_by_c[1 << j];
        mu.set(j, v & 1 == 1);
        q.set_linear(j, v >> 1 & 1 == 1);
    }
    for i in 0..k {
        for j in i + 1..k {
            let v = v_by_c[1 << i | 1 << j];
            let parity = (mu.get(i) ^ mu.get(j)) as u8;
            let diff = (v + 4 - parity) % 4;
            if !diff.is_multiple_of(2) {
                return Err(StandardFormError::InconsistentQuadraticFit);
            }
            let cross = ((diff / 2) & 1 == 1) ^ q.lambda().get(i) ^ q.lambda().get(j);
            q.set_cross(i, j, cross);
        }
    }
    // the fit used only low-weight coordinates; a genuine stabilizer state
    // must match at every support point
    for (c_idx, &v) in v_by_c.iter().enumerate() {
        let c = exponent_vec(c_idx, k);
        let predicted = u8::from(mu.dot(&c)) + 2 * u8::from(q.evaluate(&c));
        if predicted % 4 != v {
            return Err(StandardFormError::InconsistentQuadraticFit);
        }
    }
    StandardForm::new(s_basis, t, mu, q)
}

/// The gates applied during standardization: an X layer moving the base
/// point to zero, then the adjoint phase-gate layer cancelling `mu`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateRecord {
    pub t: BitVec,
    pub d: BitVec,
}

/// Maps the state of `sf` to standard position: support through zero and no
/// imaginary amplitude signs. Returns the transformed state, the corrected
/// quadratic form it satisfies, and the gates that were applied.
///
/// The phase layer turns `i^(mu.c)` into a sign, and the sign it leaves
/// behind twists the form: with `u = d & y(c)` the correction is the second
/// elementary symmetric polynomial of `u`, quadratic in `c`.
#[must_use]
pub fn standardize(sf: &StandardForm) -> (StateVector, QuadraticForm, GateRecord) {
    let k = sf.k();
    let d = sf
        .s_basis
        .solve(&sf.mu)
        .expect("independent basis rows always admit a sign preimage");
    let state = synthesize(sf).apply_x(&sf.t).apply_phase_gates(&d, true);
    let correction = QuadraticForm::fit(k, |c| {
        let u = d.and(&sf.s_basis.combine_rows(c));
        let w = u.count_ones();
        w * w.saturating_sub(1) / 2 % 2 == 1
    });
    let q_twisted = sf.q.add(&correction);
    (state, q_twisted, GateRecord { t: sf.t.clone(), d })
}
