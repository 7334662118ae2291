//! Dense state vectors and density operators.
//!
//! This is the floating-point boundary of the crate: everything here exists
//! to cross-check the exact symplectic computations against literal matrix
//! algebra on small systems. Amplitude indices read qubit 0 as the most
//! significant bit, matching `BitVec::to_basis_index`.
//!
//! State synthesis from a maximal stabilizer group accumulates projector
//! columns in Gaussian integers, so amplitudes are exact up to the single
//! final normalization.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};
use crate::stabilizer::StabilizerGroup;

/// Qubit guard for state synthesis.
pub const MAX_STATE_QUBITS: usize = 14;
/// Qubit guard for dense projectors.
pub const MAX_PROJECTOR_QUBITS: usize = 10;
/// Qubit guard for partial traces.
pub const MAX_TRACE_QUBITS: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum StateVecError {
    #[error("{n} qubits exceed the dense guard of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("group has {k} generators on {n} qubits; a state needs k = n")]
    NotMaximal { n: usize, k: usize },
    #[error("amplitude vector has length {found}, expected {expected}")]
    BadLength { expected: usize, found: usize },
    #[error("state norm {0} is not 1 within 1e-6")]
    NotNormalized(f64),
}

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Normalized n-qubit state vector.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes, checking length and norm; the vector is rescaled
    /// to unit norm to absorb serialization round-off.
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self, StateVecError> {
        if amps.len() != 1 << n {
            return Err(StateVecError::BadLength {
                expected: 1 << n,
                found: amps.len(),
            });
        }
        let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(StateVecError::NotNormalized(norm));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(StateVector { n, amps })
    }

    #[must_use]
    pub fn basis_state(n: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    #[must_use]
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    #[must_use]
    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    #[must_use]
    pub fn norm(&self) -> f64 {
        self.amps
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }

    /// `<self|other>`.
    ///
    /// # Panics
    /// Panics on qubit-count mismatch.
    #[must_use]
    pub fn inner_product(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.n, other.n, "inner product across sizes");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// True when the states agree up to a global phase: `|<a|b>| = 1`.
    #[must_use]
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        (self.inner_product(other).norm() - 1.0).abs() <= tol
    }

    /// Rescales so the first nonzero amplitude in index order is real
    /// positive.
    #[must_use]
    pub fn canonical_phase(&self) -> StateVector {
        let lead = self
            .amps
            .iter()
            .find(|a| a.norm() > 1e-9)
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0));
        let scale = lead.conj() / lead.norm();
        StateVector {
            n: self.n,
            amps: self.amps.iter().map(|a| a * scale).collect(),
        }
    }

    /// Applies a Pauli operator: a permutation of amplitudes with fourth
    /// roots of unity as coefficients.
    ///
    /// # Panics
    /// Panics on qubit-count mismatch.
    #[must_use]
    pub fn apply_pauli(&self, op: &crate::pauli::PauliOp) -> StateVector {
        assert_eq!(self.n, op.n_qubits(), "operator size mismatch");
        let zm = op.z().to_basis_index();
        let xm = op.x().to_basis_index();
        let base = u32::from(op.phase_exp()) + op.z().and(op.x()).count_ones() as u32;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            let target = idx ^ xm;
            let phase = (base + 2 * ((zm & target).count_ones() & 1)) % 4;
            out[target] = I_POWERS[phase as usize] * a;
        }
        StateVector {
            n: self.n,
            amps: out,
        }
    }

    /// `X(t)`: permutes basis states by XOR with `t`.
    #[must_use]
    pub fn apply_x(&self, t: &BitVec) -> StateVector {
        assert_eq!(self.n, t.len(), "mask length mismatch");
        let mask = t.to_basis_index();
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            out[idx ^ mask] = a;
        }
        StateVector {
            n: self.n,
            amps: out,
        }
    }

    /// `Z(z)`: phase `(-1)^{z.b}` on basis state `b`.
    #[must_use]
    pub fn apply_z(&self, z: &BitVec) -> StateVector {
        assert_eq!(self.n, z.len(), "mask length mismatch");
        let mask = z.to_basis_index();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(idx, &a)| {
                if (idx & mask).count_ones() & 1 == 1 {
                    -a
                } else {
                    a
                }
            })
            .collect();
        StateVector { n: self.n, amps }
    }

    /// `diag(1, i)` on every qubit where `d` is set (or its adjoint): phase
    /// `i^{+-|d AND b|}` with the exponent counted as an integer, not mod 2.
    #[must_use]
    pub fn apply_phase_gates(&self, d: &BitVec, dagger: bool) -> StateVector {
        assert_eq!(self.n, d.len(), "mask length mismatch");
        let mask = d.to_basis_index();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(idx, &a)| {
                let w = (idx & mask).count_ones() % 4;
                let e = if dagger { (4 - w) % 4 } else { w };
                I_POWERS[e as usize] * a
            })
            .collect();
        StateVector { n: self.n, amps }
    }

    /// Applies a 2x2 matrix to one qubit.
    #[must_use]
    pub fn apply_single_qubit(&self, qubit: usize, u: &[[Complex64; 2]; 2]) -> StateVector {
        assert!(qubit < self.n, "qubit index out of range");
        let bit = 1usize << (self.n - 1 - qubit);
        let mut out = self.amps.clone();
        for idx in 0..self.amps.len() {
            if idx & bit == 0 {
                let a0 = self.amps[idx];
                let a1 = self.amps[idx | bit];
                out[idx] = u[0][0] * a0 + u[0][1] * a1;
                out[idx | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        StateVector {
            n: self.n,
            amps: out,
        }
    }

    /// Reduced density operator on the kept qubits (ascending, 0-based).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityOperator, StateVecError> {
        if self.n > MAX_TRACE_QUBITS {
            return Err(StateVecError::TooLarge {
                n: self.n,
                max: MAX_TRACE_QUBITS,
            });
        }
        assert!(
            keep.windows(2).all(|w| w[0] < w[1]) && keep.iter().all(|&q| q < self.n),
            "keep list must be ascending distinct qubit indices"
        );
        let nk = keep.len();
        let mut kept_of = vec![0usize; self.amps.len()];
        let mut env_of = vec![0usize; self.amps.len()];
        for idx in 0..self.amps.len() {
            let mut kept = 0usize;
            let mut env = 0usize;
            let mut kpos = 0;
            for q in 0..self.n {
                let b = idx >> (self.n - 1 - q) & 1;
                if kpos < nk && keep[kpos] == q {
                    kept = kept << 1 | b;
                    kpos += 1;
                } else {
                    env = env << 1 | b;
                }
            }
            kept_of[idx] = kept;
            env_of[idx] = env;
        }
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); 1 << (self.n - nk)];
        for idx in 0..self.amps.len() {
            buckets[env_of[idx]].push(idx);
        }
        let dim = 1usize << nk;
        let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
        for bucket in &buckets {
            for &i in bucket {
                for &j in bucket {
                    mat[kept_of[i] * dim + kept_of[j]] += self.amps[i] * self.amps[j].conj();
                }
            }
        }
        Ok(DensityOperator { n: nk, mat })
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("StateVector", 2)?;
        s.serialize_field("n", &self.n)?;
        let pairs: Vec<[f64; 2]> = self.amps.iter().map(|a| [a.re, a.im]).collect();
        s.serialize_field("amps", &pairs)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            amps: Vec<[f64; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let amps = raw
            .amps
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::new(raw.n, amps).map_err(D::Error::custom)
    }
}

/// Dense operator on n qubits, row-major.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    n: usize,
    mat: Vec<Complex64>,
}

impl DensityOperator {
    #[must_use]
    pub fn zeros(n: usize) -> Self {
        DensityOperator {
            n,
            mat: vec![Complex64::new(0.0, 0.0); 1 << (2 * n)],
        }
    }

    #[must_use]
    pub fn from_outer(psi: &StateVector) -> Self {
        let dim = psi.amps.len();
        let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                mat[r * dim + c] = psi.amps[r] * psi.amps[c].conj();
            }
        }
        DensityOperator { n: psi.n, mat }
    }

    #[must_use]
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.mat[r * self.dim() + c]
    }

    pub fn add_scaled(&mut self, other: &DensityOperator, scale: f64) {
        assert_eq!(self.n, other.n, "operator size mismatch");
        for (a, b) in self.mat.iter_mut().zip(&other.mat) {
            *a += b * scale;
        }
    }

    #[must_use]
    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    #[must_use]
    pub fn max_abs_diff(&self, other: &DensityOperator) -> f64 {
        assert_eq!(self.n, other.n, "operator size mismatch");
        self.mat
            .iter()
            .zip(&other.mat)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    #[must_use]
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let dim = self.dim();
        (0..dim).all(|r| (0..dim).all(|c| (self.get(r, c) - self.get(c, r).conj()).norm() <= tol))
    }

    /// Matrix product; cubic in the dimension, keep n small.
    #[must_use]
    pub fn matmul(&self, other: &DensityOperator) -> DensityOperator {
        assert_eq!(self.n, other.n, "operator size mismatch");
        let dim = self.dim();
        let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.get(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..dim {
                    mat[r * dim + c] += a * other.get(k, c);
                }
            }
        }
        DensityOperator { n: self.n, mat }
    }

    #[must_use]
    pub fn scaled(&self, s: f64) -> DensityOperator {
        DensityOperator {
            n: self.n,
            mat: self.mat.iter().map(|a| a * s).collect(),
        }
    }

    /// Rank by Gaussian elimination with partial pivoting; entries below
    /// `tol` count as zero.
    #[must_use]
    pub fn numeric_rank(&self, tol: f64) -> usize {
        let dim = self.dim();
        let mut m = self.mat.clone();
        let mut rank = 0;
        for col in 0..dim {
            let pivot = (rank..dim)
                .max_by(|&a, &b| m[a * dim + col].norm().total_cmp(&m[b * dim + col].norm()))
                .unwrap();
            if m[pivot * dim + col].norm() <= tol {
                continue;
            }
            for j in 0..dim {
                m.swap(rank * dim + j, pivot * dim + j);
            }
            let inv = m[rank * dim + col].inv();
            for i in rank + 1..dim {
                let factor = m[i * dim + col] * inv;
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in col..dim {
                    let sub = factor * m[rank * dim + j];
                    m[i * dim + j] -= sub;
                }
            }
            rank += 1;
            if rank == dim {
                break;
            }
        }
        rank
    }

    /// Partial trace onto the kept qubits (ascending, 0-based).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator, StateVecError> {
        if self.n > MAX_TRACE_QUBITS {
            return Err(StateVecError::TooLarge {
                n: self.n,
                max: MAX_TRACE_QUBITS,
            });
        }
        assert!(
            keep.windows(2).all(|w| w[0] < w[1]) && keep.iter().all(|&q| q < self.n),
            "keep list must be ascending distinct qubit indices"
        );
        let nk = keep.len();
        let dim = self.dim();
        let mut kept_of = vec![0usize; dim];
        let mut env_of = vec![0usize; dim];
        for idx in 0..dim {
            let mut kept = 0usize;
            let mut env = 0usize;
            let mut kpos = 0;
            for q in 0..self.n {
                let b = idx >> (self.n - 1 - q) & 1;
                if kpos < nk && keep[kpos] == q {
                    kept = kept << 1 | b;
                    kpos += 1;
                } else {
                    env = env << 1 | b;
                }
            }
            kept_of[idx] = kept;
            env_of[idx] = env;
        }
        let odim = 1usize << nk;
        let mut mat = vec![Complex64::new(0.0, 0.0); odim * odim];
        for r in 0..dim {
            for c in 0..dim {
                if env_of[r] == env_of[c] {
                    mat[kept_of[r] * odim + kept_of[c]] += self.mat[r * dim + c];
                }
            }
        }
        Ok(DensityOperator { n: nk, mat })
    }
}

/// The code projector `2^{-n} sum_{g in S} g` as a dense operator.
pub fn projector_from_group(group: &StabilizerGroup) -> Result<DensityOperator, StateVecError> {
    let n = group.n_qubits();
    if n > MAX_PROJECTOR_QUBITS {
        return Err(StateVecError::TooLarge {
            n,
            max: MAX_PROJECTOR_QUBITS,
        });
    }
    let elements = group.elements().map_err(|_| StateVecError::TooLarge {
        n,
        max: MAX_PROJECTOR_QUBITS,
    })?;
    let dim = 1usize << n;
    let weight = 1.0 / dim as f64;
    let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
    for g in &elements {
        let zm = g.z().to_basis_index();
        let xm = g.x().to_basis_index();
        let base = u32::from(g.phase_exp()) + g.z().and(g.x()).count_ones() as u32;
        for col in 0..dim {
            let row = col ^ xm;
            let phase = (base + 2 * ((zm & row).count_ones() & 1)) % 4;
            mat[row * dim + col] += I_POWERS[phase as usize] * weight;
        }
    }
    Ok(DensityOperator { n, mat })
}

/// The unique state stabilized by a maximal group, with the first nonzero
/// amplitude in index order real positive.
///
/// Accumulates one projector column exactly in Gaussian integers; only the
/// final normalization is floating point.
pub fn synthesize_state(group: &StabilizerGroup) -> Result<StateVector, StateVecError> {
    let n = group.n_qubits();
    if n > MAX_STATE_QUBITS {
        return Err(StateVecError::TooLarge {
            n,
            max: MAX_STATE_QUBITS,
        });
    }
    if !group.is_maximal() {
        return Err(StateVecError::NotMaximal { n, k: group.k() });
    }
    let elements = group.elements().map_err(|_| StateVecError::TooLarge {
        n,
        max: MAX_STATE_QUBITS,
    })?;
    let packed: Vec<(u32, usize, usize)> = elements
        .iter()
        .map(|g| {
            (
                u32::from(g.phase_exp()) + g.z().and(g.x()).count_ones() as u32,
                g.z().to_basis_index(),
                g.x().to_basis_index(),
            )
        })
        .collect();

    // the support of the state is one coset of the span of x parts, and the
    // canonical representative of that coset (zeros at all pivots) is its
    // numerically smallest point, so scanning canonical representatives in
    // ascending order finds the support start directly
    let x_rows: Vec<BitVec> = group.generators().iter().map(|g| g.x().clone()).collect();
    let x_red = BitMatrix::from_rows(x_rows, n).rref();
    let pivots = &x_red.pivots;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();

    let dim = 1usize << n;
    let mut acc: Vec<(i64, i64)> = vec![(0, 0); dim];
    let mut touched: Vec<usize> = Vec::with_capacity(elements.len());
    for pattern in 0u64..1 << free.len() {
        let mut candidate = BitVec::zeros(n);
        for (j, &pos) in free.iter().enumerate() {
            if pattern >> (free.len() - 1 - j) & 1 != 0 {
                candidate.set(pos, true);
            }
        }
        let idx = candidate.to_basis_index();
        for &t in &touched {
            acc[t] = (0, 0);
        }
        touched.clear();
        for &(base, zm, xm) in &packed {
            let target = idx ^ xm;
            let phase = (base + 2 * ((zm & target).count_ones() & 1)) % 4;
            if acc[target] == (0, 0) {
                touched.push(target);
            }
            let (re, im) = acc[target];
            acc[target] = match phase {
                0 => (re + 1, im),
                1 => (re, im + 1),
                2 => (re - 1, im),
                _ => (re, im - 1),
            };
        }
        if touched.iter().all(|&t| acc[t] == (0, 0)) {
            continue;
        }
        let norm_sq: i64 = touched
            .iter()
            .map(|&t| acc[t].0 * acc[t].0 + acc[t].1 * acc[t].1)
            .sum();
        let norm = (norm_sq as f64).sqrt();
        debug_assert!(
            acc[idx].1 == 0 && acc[idx].0 > 0,
            "projector column must be real positive at its first support point"
        );
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for &t in &touched {
            amps[t] = Complex64::new(acc[t].0 as f64 / norm, acc[t].1 as f64 / norm);
        }
        return Ok(StateVector { n, amps });
    }
    unreachable!("a maximal stabilizer projector has rank one")
}
