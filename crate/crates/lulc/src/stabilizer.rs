//! Stabilizer groups: validated generator sets, per-qubit subgroup
//! structure, and the local-unitary invariants that structure exposes.
//!
//! A stabilizer group on n qubits is an abelian subgroup of the Pauli group
//! whose elements are Hermitian with independent generators; such a group
//! never contains -I. All subgroup computations here run on generator
//! exponent vectors in F2^k, not on enumerated elements, so they stay cheap
//! far beyond the sizes where element enumeration is feasible.

use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::PauliOp;

/// Largest generator count for which element enumeration is allowed.
pub const MAX_ENUMERATION_GENERATORS: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StabilizerError {
    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("generators are dependent as symplectic vectors")]
    DependentGenerators,
    #[error("generator {0} has a non-Hermitian sign (i or -i)")]
    NonHermitianSign(usize),
    #[error("generator {index} acts on {found} qubits, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("operation would enumerate 2^{0} elements, over the guard of 2^{MAX_ENUMERATION_GENERATORS}")]
    TooLarge(usize),
}

/// Quotient structure of the subgroup generated by all single-qubit-trivial
/// subgroups. The index of that subgroup in the full group is 1, 2 or 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiCase {
    /// Index 1: the local subgroups already generate everything.
    Full,
    /// Index 2.
    Index2,
    /// Index 4: forces the four-element full-support structure.
    Index4,
}

impl PiCase {
    #[must_use]
    pub fn label(self) -> &'static str {
        match self {
            PiCase::Full => "i",
            PiCase::Index2 => "ii",
            PiCase::Index4 => "iii",
        }
    }
}

impl Serialize for PiCase {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// Local-unitary invariants of a stabilizer group: the quantities preserved
/// by any tensor product of single-qubit unitaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub group_order: u64,
    /// Order of the subgroup acting trivially on each qubit.
    pub qubit_orders: Vec<u64>,
    /// Index of that subgroup in the full group; always 1, 2 or 4.
    pub qubit_indices: Vec<u64>,
    pub pi_index: u64,
    pub pi_case: PiCase,
    pub is_two_m_code: bool,
}

/// Validated stabilizer group presented by k independent generators.
#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOp>,
}

impl StabilizerGroup {
    /// Validates and wraps a generator list. An empty list is the trivial
    /// group `{I}` on `n` qubits.
    pub fn new(n: usize, generators: Vec<PauliOp>) -> Result<Self, StabilizerError> {
        for (i, g) in generators.iter().enumerate() {
            if g.n_qubits() != n {
                return Err(StabilizerError::LengthMismatch {
                    index: i,
                    expected: n,
                    found: g.n_qubits(),
                });
            }
            if !g.is_hermitian() {
                return Err(StabilizerError::NonHermitianSign(i));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if !generators[i].commutes_with(&generators[j]) {
                    return Err(StabilizerError::NonCommuting(i, j));
                }
            }
        }
        let group = StabilizerGroup { n, generators };
        if group.symplectic_matrix().rank() != group.generators.len() {
            return Err(StabilizerError::DependentGenerators);
        }
        Ok(group)
    }

    #[must_use]
    pub fn trivial(n: usize) -> Self {
        StabilizerGroup {
            n,
            generators: Vec::new(),
        }
    }

    #[must_use]
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Number of generators; the group has `2^k` elements.
    #[must_use]
    pub fn k(&self) -> usize {
        self.generators.len()
    }

    #[must_use]
    pub fn is_maximal(&self) -> bool {
        self.k() == self.n
    }

    #[must_use]
    pub fn generators(&self) -> &[PauliOp] {
        &self.generators
    }

    /// k x 2n matrix with rows `(z | x)` of each generator.
    #[must_use]
    pub fn symplectic_matrix(&self) -> BitMatrix {
        let rows: Vec<BitVec> = self
            .generators
            .iter()
            .map(|g| g.z().concat(g.x()))
            .collect();
        BitMatrix::from_rows(rows, 2 * self.n)
    }

    /// The element `prod_j g_j^{a_j}` with its exact sign.
    ///
    /// # Panics
    /// Panics if `exponents.len() != k`.
    #[must_use]
    pub fn element(&self, exponents: &BitVec) -> PauliOp {
        assert_eq!(exponents.len(), self.k(), "exponent vector length mismatch");
        let mut acc = PauliOp::identity(self.n);
        for j in exponents.ones() {
            acc = acc.mul(&self.generators[j]);
        }
        acc
    }

    /// All `2^k` elements, indexed by exponent vector read little-endian.
    pub fn elements(&self) -> Result<Vec<PauliOp>, StabilizerError> {
        let k = self.k();
        if k > MAX_ENUMERATION_GENERATORS {
            return Err(StabilizerError::TooLarge(k));
        }
        let mut out = Vec::with_capacity(1 << k);
        out.push(PauliOp::identity(self.n));
        for idx in 1usize..1 << k {
            let low = idx.trailing_zeros() as usize;
            let prev = idx & (idx - 1);
            out.push(out[prev].mul(&self.generators[low]));
        }
        Ok(out)
    }

    /// Exponent-space basis of the subgroup acting as the identity on
    /// `qubit` (0-based): kernel of the 2 x k matrix of that qubit's
    /// z and x bits across generators.
    #[must_use]
    pub fn local_kernel(&self, qubit: usize) -> BitMatrix {
        assert!(qubit < self.n, "qubit index out of range");
        let k = self.k();
        let mut m = BitMatrix::zeros(2, k);
        for (j, g) in self.generators.iter().enumerate() {
            m.set(0, j, g.z().get(qubit));
            m.set(1, j, g.x().get(qubit));
        }
        m.kernel()
    }

    /// The subgroup of elements trivial on `qubit`, and its index in the
    /// full group.
    #[must_use]
    pub fn subgroup_at(&self, qubit: usize) -> (StabilizerGroup, u64) {
        let kernel = self.local_kernel(qubit);
        let gens: Vec<PauliOp> = kernel.rows().iter().map(|a| self.element(a)).collect();
        let sub = StabilizerGroup::new(self.n, gens).expect("subgroup of a valid group is valid");
        let index = 1u64 << (self.k() - kernel.n_rows());
        (sub, index)
    }

    /// Index of the qubit-trivial subgroup; 1, 2 or 4.
    #[must_use]
    pub fn qubit_index(&self, qubit: usize) -> u64 {
        let (_, index) = self.subgroup_at(qubit);
        index
    }

    /// The subgroup generated by all qubit-trivial subgroups, its index in
    /// the full group, and which of the three possible quotient shapes it is.
    #[must_use]
    pub fn pi_subgroup(&self) -> (StabilizerGroup, u64, PiCase) {
        let k = self.k();
        let mut stacked = BitMatrix::zeros(0, k);
        for q in 0..self.n {
            for row in self.local_kernel(q).rows() {
                stacked.push_row(row.clone());
            }
        }
        let red = stacked.rref();
        let basis: Vec<BitVec> = red.matrix.rows()[..red.rank].to_vec();
        let gens: Vec<PauliOp> = basis.iter().map(|a| self.element(a)).collect();
        let pi = StabilizerGroup::new(self.n, gens)
            .expect("span of subgroups of a valid group is valid");
        let index = 1u64 << (k - red.rank);
        let case = match index {
            1 => PiCase::Full,
            2 => PiCase::Index2,
            4 => PiCase::Index4,
            other => unreachable!("quotient by the local span has index {other}, bound is 4"),
        };
        (pi, index, case)
    }

    /// True when the group stabilizes a [[2m, 2m-2, 2]] code: exactly four
    /// elements on an even number of qubits, with all three nontrivial
    /// elements acting on every qubit (they then differ qubit-wise in
    /// pairs automatically).
    #[must_use]
    pub fn is_two_m_code(&self) -> bool {
        if self.k() != 2 || !self.n.is_multiple_of(2) || self.n == 0 {
            return false;
        }
        let g1 = &self.generators[0];
        let g2 = &self.generators[1];
        let g3 = g1.mul(g2);
        [g1.clone(), g2.clone(), g3]
            .iter()
            .all(|g| g.weight() == self.n)
    }

    /// All local-unitary invariants in one report.
    #[must_use]
    pub fn lu_invariants(&self) -> InvariantReport {
        let (_, pi_index, pi_case) = self.pi_subgroup();
        let mut qubit_orders = Vec::with_capacity(self.n);
        let mut qubit_indices = Vec::with_capacity(self.n);
        for q in 0..self.n {
            let kernel_dim = self.local_kernel(q).n_rows();
            qubit_orders.push(1u64 << kernel_dim);
            qubit_indices.push(1u64 << (self.k() - kernel_dim));
        }
        InvariantReport {
            group_order: 1u64 << self.k(),
            qubit_orders,
            qubit_indices,
            pi_index,
            pi_case,
            is_two_m_code: self.is_two_m_code(),
        }
    }

    /// Uniform-ish random stabilizer group with `k` generators: isotropic
    /// completion one vector at a time (each new vector drawn from the
    /// symplectic complement of the current set), then random signs.
    ///
    /// # Panics
    /// Panics if `k > n`.
    pub fn random<R: rand::Rng>(rng: &mut R, n: usize, k: usize) -> StabilizerGroup {
        assert!(k <= n, "an isotropic subspace has dimension at most n");
        let mut chosen: Vec<BitVec> = Vec::with_capacity(k);
        while chosen.len() < k {
            // rows of the constraint matrix are the symplectically swapped
            // chosen vectors, so its kernel is exactly the commutant
            let mut constraints = BitMatrix::zeros(0, 2 * n);
            for v in &chosen {
                let z = v.slice(0, n);
                let x = v.slice(n, 2 * n);
                constraints.push_row(x.concat(&z));
            }
            let commutant = if chosen.is_empty() {
                BitMatrix::identity(2 * n)
            } else {
                constraints.kernel()
            };
            let span = BitMatrix::from_rows(chosen.clone(), 2 * n);
            loop {
                let coeffs = BitVec::from_bools(
                    &(0..commutant.n_rows())
                        .map(|_| rng.gen_bool(0.5))
                        .collect::<Vec<_>>(),
                );
                let candidate = commutant.combine_rows(&coeffs);
                let mut test = span.clone();
                test.push_row(candidate.clone());
                if test.rank() == chosen.len() + 1 {
                    chosen.push(candidate);
                    break;
                }
            }
        }
        let generators: Vec<PauliOp> = chosen
            .iter()
            .map(|v| {
                PauliOp::from_zx(
                    u8::from(rng.gen_bool(0.5)) * 2,
                    v.slice(0, n),
                    v.slice(n, 2 * n),
                )
            })
            .collect();
        StabilizerGroup::new(n, generators).expect("isotropic completion yields a valid group")
    }
}

impl fmt::Debug for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StabilizerGroup(n={}", self.n)?;
        for g in &self.generators {
            write!(f, ", {g}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for StabilizerGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("StabilizerGroup", 2)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field(
            "generators",
            &self
                .generators
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
        )?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for StabilizerGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            generators: Vec<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let gens: Result<Vec<PauliOp>, _> = raw.generators.iter().map(|s| s.parse()).collect();
        let gens = gens.map_err(D::Error::custom)?;
        StabilizerGroup::new(raw.n, gens).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn group(n: usize, gens: &[&str]) -> StabilizerGroup {
        StabilizerGroup::new(n, gens.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        let xx: PauliOp = "+XX".parse().unwrap();
        let zi: PauliOp = "+ZI".parse().unwrap();
        assert_eq!(
            StabilizerGroup::new(2, vec![xx.clone(), zi]).unwrap_err(),
            StabilizerError::NonCommuting(0, 1)
        );
        let ixx: PauliOp = "+iXX".parse().unwrap();
        assert_eq!(
            StabilizerGroup::new(2, vec![ixx]).unwrap_err(),
            StabilizerError::NonHermitianSign(0)
        );
        let mxx: PauliOp = "-XX".parse().unwrap();
        assert_eq!(
            StabilizerGroup::new(2, vec![xx.clone(), mxx]).unwrap_err(),
            StabilizerError::DependentGenerators
        );
        let x: PauliOp = "+X".parse().unwrap();
        assert!(matches!(
            StabilizerGroup::new(2, vec![x]).unwrap_err(),
            StabilizerError::LengthMismatch { index: 0, .. }
        ));
    }

    #[test]
    fn elements_of_epr_group() {
        let s = group(2, &["+XX", "+ZZ"]);
        let elems = s.elements().unwrap();
        let strs: Vec<String> = elems.iter().map(ToString::to_string).collect();
        assert_eq!(strs, vec!["+II", "+XX", "+ZZ", "-YY"]);
    }

    #[test]
    fn element_signs_are_exact() {
        // ZZ * XX = (ZX) tensor (ZX) = (iY)(iY) = -YY
        let s = group(2, &["+ZZ", "+XX"]);
        let e = s.element(&BitVec::parse("11").unwrap());
        assert_eq!(e.to_string(), "-YY");
    }

    #[test]
    fn no_minus_identity_in_random_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let n = 1 + (rng.gen::<u64>() % 5) as usize;
            let k = (rng.gen::<u64>() % (n as u64 + 1)) as usize;
            let s = StabilizerGroup::random(&mut rng, n, k);
            for e in s.elements().unwrap() {
                if e.is_identity_up_to_phase() {
                    assert_eq!(e.phase_exp(), 0);
                }
            }
        }
    }

    #[test]
    fn subgroup_at_matches_element_filter() {
        // generator-level kernel vs brute-force filtering of all elements
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..40 {
            let n = 1 + (rng.gen::<u64>() % 5) as usize;
            let k = (rng.gen::<u64>() % (n as u64 + 1)) as usize;
            let s = StabilizerGroup::random(&mut rng, n, k);
            let elems = s.elements().unwrap();
            for q in 0..n {
                let (sub, index) = s.subgroup_at(q);
                let trivial: Vec<&PauliOp> = elems
                    .iter()
                    .filter(|e| !e.z().get(q) && !e.x().get(q))
                    .collect();
                assert_eq!(trivial.len() as u64 * index, 1u64 << k);
                let sub_elems = sub.elements().unwrap();
                assert_eq!(sub_elems.len(), trivial.len());
                for t in trivial {
                    assert!(sub_elems.contains(t), "missing {t} in local subgroup");
                }
            }
        }
    }

    #[test]
    fn qubit_index_is_one_two_or_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..200 {
            let n = 1 + (rng.gen::<u64>() % 6) as usize;
            let k = (rng.gen::<u64>() % (n as u64 + 1)) as usize;
            let s = StabilizerGroup::random(&mut rng, n, k);
            for q in 0..n {
                assert!([1, 2, 4].contains(&s.qubit_index(q)));
            }
        }
    }

    #[test]
    fn epr_local_subgroups_are_trivial() {
        let s = group(2, &["+XX", "+ZZ"]);
        for q in 0..2 {
            let (sub, index) = s.subgroup_at(q);
            assert_eq!(index, 4);
            assert_eq!(sub.k(), 0);
        }
        let (pi, pi_index, case) = s.pi_subgroup();
        assert_eq!(pi.k(), 0);
        assert_eq!(pi_index, 4);
        assert_eq!(case, PiCase::Index4);
        assert!(s.is_two_m_code());
    }

    #[test]
    fn pi_index_four_forces_four_element_full_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..150 {
            let n = 1 + (rng.gen::<u64>() % 5) as usize;
            let k = (rng.gen::<u64>() % (n as u64 + 1)) as usize;
            let s = StabilizerGroup::random(&mut rng, n, k);
            let (pi, index, case) = s.pi_subgroup();
            assert!([1, 2, 4].contains(&index));
            if case == PiCase::Index4 {
                assert_eq!(index, 4);
                assert_eq!(s.k(), 2, "index 4 only happens for four-element groups");
                assert!(s.is_two_m_code());
                assert_eq!(pi.k(), 0);
            }
        }
    }

    #[test]
    fn trivial_group_report() {
        let s = StabilizerGroup::trivial(2);
        let rep = s.lu_invariants();
        assert_eq!(rep.group_order, 1);
        assert_eq!(rep.qubit_orders, vec![1, 1]);
        assert_eq!(rep.qubit_indices, vec![1, 1]);
        assert_eq!(rep.pi_index, 1);
        assert!(!rep.is_two_m_code);
    }

    #[test]
    fn two_m_detection_rejects_low_weight() {
        assert!(!group(2, &["+XI", "+IZ"]).is_two_m_code());
        assert!(group(4, &["+XXXX", "+ZZZZ"]).is_two_m_code());
        // full-support pair on odd n cannot commute, so no odd case exists
    }

    #[test]
    fn invariants_stable_under_change_of_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..30 {
            let n = 2 + (rng.gen::<u64>() % 4) as usize;
            let k = 1 + (rng.gen::<u64>() % n as u64) as usize;
            let s = StabilizerGroup::random(&mut rng, n, k);
            // random invertible exponent transform: same group, new basis
            let transform = loop {
                let mut m = BitMatrix::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        m.set(i, j, rng.gen_bool(0.5));
                    }
                }
                if m.rank() == k {
                    break m;
                }
            };
            let gens: Vec<PauliOp> = (0..k).map(|i| s.element(transform.row(i))).collect();
            let s2 = StabilizerGroup::new(n, gens).unwrap();
            assert_eq!(s.lu_invariants(), s2.lu_invariants());
        }
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let s = group(2, &["+XX", "+ZZ"]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"n":2,"generators":["+XX","+ZZ"]}"#);
        let back: StabilizerGroup = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"n":2,"generators":["+XX","+ZI"]}"#;
        assert!(serde_json::from_str::<StabilizerGroup>(bad).is_err());
    }

    #[test]
    fn enumeration_guard() {
        let n = MAX_ENUMERATION_GENERATORS + 1;
        let gens: Vec<PauliOp> = (0..n)
            .map(|i| {
                let mut z = BitVec::zeros(n);
                z.set(i, true);
                PauliOp::z_type(z)
            })
            .collect();
        let s = StabilizerGroup::new(n, gens).unwrap();
        assert_eq!(s.elements().unwrap_err(), StabilizerError::TooLarge(n));
    }
}
