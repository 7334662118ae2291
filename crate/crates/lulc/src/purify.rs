//! Purification of a stabilizer code into a maximal group on an
//! enlarged register.
//!
//! A group with `k` generators on `n` qubits leaves `l = n - k`
//! logical degrees of freedom open.  Adding `l` ancilla qubits and the
//! right entangling generators produces a single stabilizer state on
//! `n + l` qubits whose reduced state on the original register is the
//! normalized code projector.  The construction needs two ingredients:
//! Z-type operators that extend the code to a maximal group, and for
//! each of those a "hopping" operator that anticommutes with it alone.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::PauliOp;
use crate::stabilizer::{StabilizerError, StabilizerGroup};

/// Errors produced while purifying a stabilizer group.
#[derive(Debug, Error)]
pub enum PurifyError {
    /// A group assembled along the way failed validation.  The input
    /// type already guarantees commuting independent generators, so
    /// this indicates an internal inconsistency rather than bad input.
    #[error("purification produced an invalid group: {0}")]
    InvalidGroup(#[from] StabilizerError),
}

/// A code together with its canonical purifying state.
///
/// `big_state` lives on `n + l` qubits: the original register first,
/// then one ancilla per missing generator.  Its generator list is, in
/// order, the code generators tensored with the identity, the
/// extension operators `Z(z_j)` paired with `Z` on ancilla `j`, and
/// the hopping operators `h_j` paired with `X` on ancilla `j`.
#[derive(Debug, Clone)]
pub struct Purification {
    code: StabilizerGroup,
    z_list: Vec<BitVec>,
    h_list: Vec<PauliOp>,
    big_state: StabilizerGroup,
}

impl Purification {
    #[must_use]
    pub fn code(&self) -> &StabilizerGroup {
        &self.code
    }

    /// Z-masks whose operators extend the code to a maximal group.
    #[must_use]
    pub fn z_list(&self) -> &[BitVec] {
        &self.z_list
    }

    /// Hermitian operators on the original register; `h_j` anticommutes
    /// with `Z(z_j)` and commutes with every other extended generator,
    /// so conjugation by it flips exactly the `j`-th extension sign.
    #[must_use]
    pub fn h_list(&self) -> &[PauliOp] {
        &self.h_list
    }

    /// The maximal group of the purifying state on `n + l` qubits.
    #[must_use]
    pub fn big_state(&self) -> &StabilizerGroup {
        &self.big_state
    }

    /// Number of ancilla qubits, `n - k`.
    #[must_use]
    pub fn n_ancillas(&self) -> usize {
        self.z_list.len()
    }
}

impl Serialize for Purification {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Purification", 4)?;
        s.serialize_field("code", &self.code)?;
        s.serialize_field(
            "z_list",
            &self
                .z_list
                .iter()
                .map(BitVec::to_string)
                .collect::<Vec<_>>(),
        )?;
        s.serialize_field(
            "h_list",
            &self
                .h_list
                .iter()
                .map(PauliOp::to_string)
                .collect::<Vec<_>>(),
        )?;
        s.serialize_field("big_state", &self.big_state)?;
        s.end()
    }
}

/// Reduces `cand` against an echelon basis and inserts the remainder
/// if it is nonzero, keeping rows ordered by leading column.  Returns
/// whether the rank grew.
fn echelon_insert(ech: &mut Vec<BitVec>, cand: &BitVec) -> bool {
    let mut v = cand.clone();
    for row in ech.iter() {
        let lead = row.first_one().expect("echelon rows are nonzero");
        if v.get(lead) {
            v.xor_assign(row);
        }
    }
    match v.first_one() {
        None => false,
        Some(lead) => {
            let pos = ech
                .iter()
                .position(|r| r.first_one().expect("echelon rows are nonzero") > lead)
                .unwrap_or(ech.len());
            ech.insert(pos, v);
            true
        }
    }
}

/// Z-masks `z_1, ..., z_l` such that appending `Z(z_j)` to the
/// generators of `group` yields a maximal stabilizer group.
///
/// `Z(z)` commutes with a generator `(z_g | x_g)` iff `z . x_g = 0`,
/// so candidates live in the kernel of the matrix of generator
/// x-parts.  Generators whose x-part is a combination of the others
/// already contribute pure-Z products to that kernel; the returned
/// masks extend those products to a full kernel basis, which counts
/// out to exactly `n - k` new operators.
pub fn extend_to_maximal(group: &StabilizerGroup) -> Result<Vec<BitVec>, PurifyError> {
    let n = group.n_qubits();
    let k = group.k();
    let x_matrix = BitMatrix::from_rows(
        group.generators().iter().map(|g| g.x().clone()).collect(),
        n,
    );
    let z_matrix = BitMatrix::from_rows(
        group.generators().iter().map(|g| g.z().clone()).collect(),
        n,
    );
    let red = x_matrix.rref();

    // Transform rows past the rank name the generator products whose
    // x-parts cancel; their z-parts seed the echelon basis.
    let mut ech: Vec<BitVec> = Vec::new();
    for i in red.rank..k {
        let grew = echelon_insert(&mut ech, &z_matrix.combine_rows(red.transform.row(i)));
        debug_assert!(grew, "independent generators give independent z-parts");
    }

    let kernel = x_matrix.kernel();
    let mut z_list = Vec::with_capacity(n - k);
    for i in 0..kernel.n_rows() {
        if echelon_insert(&mut ech, kernel.row(i)) {
            z_list.push(kernel.row(i).clone());
        }
    }
    debug_assert_eq!(z_list.len(), n - k);

    // Building the extended group revalidates commutation and
    // independence of the whole set.
    extended_group(group, &z_list)?;
    Ok(z_list)
}

/// The group generated by `group` plus `Z(z)` for each listed mask.
fn extended_group(
    group: &StabilizerGroup,
    z_list: &[BitVec],
) -> Result<StabilizerGroup, PurifyError> {
    let mut gens = group.generators().to_vec();
    gens.extend(z_list.iter().cloned().map(PauliOp::z_type));
    Ok(StabilizerGroup::new(group.n_qubits(), gens)?)
}

/// A Hermitian operator that anticommutes with generator `index` of
/// `group` and commutes with every other generator.
///
/// The commutation profile of an unknown `(z | x)` against generator
/// `(z_g | x_g)` is the dot product with `(x_g | z_g)`, so the profile
/// is a linear system over the swapped generator rows.  Independence
/// of the generators makes it solvable for any right-hand side.
///
/// # Panics
/// Panics if `index` is out of range.
#[must_use]
pub fn anticommuting_partner(group: &StabilizerGroup, index: usize) -> PauliOp {
    let n = group.n_qubits();
    let k = group.k();
    assert!(index < k, "generator index out of range");
    let swapped = BitMatrix::from_rows(
        group
            .generators()
            .iter()
            .map(|g| g.x().concat(g.z()))
            .collect(),
        2 * n,
    );
    let sol = swapped
        .solve(&BitVec::singleton(k, index))
        .expect("independent generators span all commutation profiles");
    PauliOp::from_zx(0, sol.slice(0, n), sol.slice(n, 2 * n))
}

/// Purifies `group` into a stabilizer state on `n + l` qubits whose
/// reduced state on the first `n` qubits is the normalized code
/// projector.
///
/// The hopping operators start as anticommuting partners of the
/// extension generators inside the extended maximal group.  A partner
/// pass then multiplies `h_m` by `Z(z_j)` wherever `h_j` and `h_m`
/// anticommute; `Z(z_j)` commutes with the whole extended group, so
/// the fix changes no commutation profile while making the hopping
/// operators pairwise commute.
pub fn purify(group: &StabilizerGroup) -> Result<Purification, PurifyError> {
    let n = group.n_qubits();
    let k = group.k();
    let l = n - k;

    let z_list = extend_to_maximal(group)?;
    let extended = extended_group(group, &z_list)?;

    let mut h_list: Vec<PauliOp> = (0..l)
        .map(|j| anticommuting_partner(&extended, k + j))
        .collect();
    for j in 0..l {
        for m in j + 1..l {
            if h_list[j].symplectic_product(&h_list[m]) {
                let fixed = h_list[m].mul(&PauliOp::z_type(z_list[j].clone()));
                // Keep the Hermitian representative with leading phase 0;
                // either sign flips the same extension generator.
                h_list[m] = PauliOp::from_zx(0, fixed.z().clone(), fixed.x().clone());
            }
        }
    }

    let big_gens: Vec<PauliOp> = if l == 0 {
        group.generators().to_vec()
    } else {
        let anc_id = PauliOp::identity(l);
        let mut gens = Vec::with_capacity(n + l);
        for g in group.generators() {
            gens.push(g.tensor(&anc_id));
        }
        for (j, z) in z_list.iter().enumerate() {
            gens.push(PauliOp::z_type(z.concat(&BitVec::singleton(l, j))));
        }
        for (j, h) in h_list.iter().enumerate() {
            gens.push(h.tensor(&PauliOp::x_type(BitVec::singleton(l, j))));
        }
        gens
    };
    let big_state = StabilizerGroup::new(n + l, big_gens)?;
    debug_assert!(big_state.is_maximal());

    Ok(Purification {
        code: group.clone(),
        z_list,
        h_list,
        big_state,
    })
}
