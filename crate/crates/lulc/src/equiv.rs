//! Local-equivalence machinery: the single-qubit Clifford group, semi-
//! Clifford classification and decomposition, a brute-force local-Clifford
//! oracle, and the diagonal local-unitary check for stabilizer states.
//!
//! The diagonal check reduces a state pair to standard form and asks
//! whether per-qubit phases `c_i` can satisfy `prod_i c_i^{x_i} =
//! (-1)^{Q(x)}` over the shared support subspace, where `Q` is the sum of
//! the two standardized quadratic forms.  Solving at fourth roots of unity
//! answers the same question for diagonal local Cliffords.

use std::sync::LazyLock;

use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf2::BitVec;
use crate::pauli::PauliOp;
use crate::quadform::{
    complex_representable, z2l_representable, PhaseAssignment, PhaseSystem, QuadformError,
    QuadraticForm,
};
use crate::stabilizer::StabilizerGroup;
use crate::standardform::{extract, standardize, StandardFormError};
use crate::statevec::StateVector;

/// Largest register size accepted by the 24^n enumeration oracle.
pub const MAX_BRUTEFORCE_QUBITS: usize = 3;

const UNITARY_TOL: f64 = 1e-10;
const AXIS_TOL: f64 = 1e-8;

/// Errors from the equivalence layer.
#[derive(Debug, Error)]
pub enum EquivError {
    #[error("matrix is not unitary within 1e-10")]
    NotUnitary,
    #[error("no Pauli axis is carried to a Pauli, the unitary is not semi-Clifford")]
    NotSemiClifford,
    #[error("{n} qubits exceeds the enumeration limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("not a stabilizer state: {0}")]
    NotStabilizerState(#[from] StandardFormError),
    #[error(transparent)]
    Solver(#[from] QuadformError),
}

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (col, entry) in row.iter_mut().enumerate() {
            *entry = a[r][0] * b[0][col] + a[r][1] * b[1][col];
        }
    }
    out
}

fn mat_adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

fn mat_max_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut worst = 0.0_f64;
    for r in 0..2 {
        for col in 0..2 {
            worst = worst.max((a[r][col] - b[r][col]).norm());
        }
    }
    worst
}

fn mat_scaled(a: &Mat2, s: Complex64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

/// A 2x2 unitary, validated to 1e-10 at construction.
///
/// Serializes as two rows of `[re, im]` pairs; deserialization re-runs the
/// unitarity check.
#[derive(Clone, Copy, Debug)]
pub struct SingleQubitUnitary {
    m: Mat2,
}

impl SingleQubitUnitary {
    pub fn new(m: Mat2) -> Result<Self, EquivError> {
        let prod = mat_mul(&mat_adjoint(&m), &m);
        let eye = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        if mat_max_diff(&prod, &eye) > UNITARY_TOL {
            return Err(EquivError::NotUnitary);
        }
        Ok(SingleQubitUnitary { m })
    }

    #[must_use]
    pub fn identity() -> Self {
        SingleQubitUnitary {
            m: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        }
    }

    #[must_use]
    pub fn hadamard() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        SingleQubitUnitary {
            m: [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]],
        }
    }

    /// The phase gate diag(1, i).
    #[must_use]
    pub fn phase_s() -> Self {
        SingleQubitUnitary {
            m: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
        }
    }

    #[must_use]
    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    #[must_use]
    pub fn mul(&self, other: &SingleQubitUnitary) -> SingleQubitUnitary {
        SingleQubitUnitary {
            m: mat_mul(&self.m, &other.m),
        }
    }

    #[must_use]
    pub fn adjoint(&self) -> SingleQubitUnitary {
        SingleQubitUnitary {
            m: mat_adjoint(&self.m),
        }
    }

    #[must_use]
    pub fn max_abs_diff(&self, other: &SingleQubitUnitary) -> f64 {
        mat_max_diff(&self.m, &other.m)
    }

    #[must_use]
    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.m[0][1].norm() <= tol && self.m[1][0].norm() <= tol
    }

    /// Rescales by a global phase so the first entry of significant
    /// modulus (row-major) is real positive.  A unitary row always has an
    /// entry of modulus at least `1/sqrt(2)`, so the cutoff is safe.
    #[must_use]
    pub fn canonicalized(&self) -> SingleQubitUnitary {
        let lead = [self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]]
            .into_iter()
            .find(|e| e.norm() > 0.25)
            .expect("a unitary has an entry of large modulus");
        SingleQubitUnitary {
            m: mat_scaled(&self.m, lead.conj() / lead.norm()),
        }
    }

    /// Projective equality: `|tr(self^dagger other)| / 2 = 1` exactly when
    /// the two differ by a global phase.
    #[must_use]
    pub fn approx_eq_up_to_phase(&self, other: &SingleQubitUnitary, tol: f64) -> bool {
        let p = mat_mul(&mat_adjoint(&self.m), &other.m);
        ((p[0][0] + p[1][1]).norm() / 2.0 - 1.0).abs() <= tol
    }
}

impl Serialize for SingleQubitUnitary {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .m
            .iter()
            .map(|row| row.iter().map(|e| [e.re, e.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SingleQubitUnitary {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = <[[[f64; 2]; 2]; 2]>::deserialize(deserializer)?;
        let m = [
            [c(raw[0][0][0], raw[0][0][1]), c(raw[0][1][0], raw[0][1][1])],
            [c(raw[1][0][0], raw[1][0][1]), c(raw[1][1][0], raw[1][1][1])],
        ];
        SingleQubitUnitary::new(m).map_err(D::Error::custom)
    }
}

/// The 24 single-qubit Cliffords modulo global phase, generated by closure
/// from the Hadamard and diag(1, i).  Element 0 is the identity and element
/// 1 is the Hadamard; every element is phase-canonicalized.
#[must_use]
pub fn clifford_group_1q() -> &'static [SingleQubitUnitary] {
    static TABLE: LazyLock<Vec<SingleQubitUnitary>> = LazyLock::new(|| {
        let gens = [
            SingleQubitUnitary::hadamard(),
            SingleQubitUnitary::phase_s(),
        ];
        let mut elems = vec![SingleQubitUnitary::identity().canonicalized()];
        let mut frontier = elems.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for e in &frontier {
                for g in &gens {
                    let cand = g.mul(e).canonicalized();
                    if !elems.iter().any(|known| known.max_abs_diff(&cand) < 1e-6) {
                        elems.push(cand);
                        next.push(cand);
                    }
                }
            }
            frontier = next;
        }
        assert_eq!(elems.len(), 24, "single-qubit Clifford group has order 24");
        elems
    });
    &TABLE
}

/// A Pauli axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

fn axis_matrix(axis: Axis) -> Mat2 {
    match axis {
        Axis::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        Axis::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        Axis::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
    }
}

/// The signed Pauli that `u axis u^dagger` equals within 1e-8, if any.
/// `true` means the negative sign.
#[must_use]
pub fn pauli_image(u: &SingleQubitUnitary, axis: Axis) -> Option<(bool, Axis)> {
    let conj = mat_mul(&mat_mul(&u.m, &axis_matrix(axis)), &mat_adjoint(&u.m));
    for target in [Axis::X, Axis::Y, Axis::Z] {
        for negative in [false, true] {
            let sign = if negative { -1.0 } else { 1.0 };
            let want = mat_scaled(&axis_matrix(target), c(sign, 0.0));
            if mat_max_diff(&conj, &want) <= AXIS_TOL {
                return Some((negative, target));
            }
        }
    }
    None
}

/// Classification of a single-qubit unitary by its conjugation action on
/// the Pauli axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiCliffordReport {
    /// Some axis is carried to a signed Pauli.
    pub semi: bool,
    /// All three axes are; equivalent to Clifford membership mod phase.
    pub clifford: bool,
    /// The first preserved axis in the order Z, X, Y.
    pub fixed_axis: Option<Axis>,
}

/// Classifies `u`.  Unitarity is enforced by the input type, so the
/// classification itself cannot fail.
#[must_use]
pub fn is_semi_clifford(u: &SingleQubitUnitary) -> SemiCliffordReport {
    let order = [Axis::Z, Axis::X, Axis::Y];
    let images = order.map(|axis| pauli_image(u, axis));
    let fixed = order
        .iter()
        .zip(&images)
        .find(|(_, img)| img.is_some())
        .map(|(axis, _)| *axis);
    SemiCliffordReport {
        semi: fixed.is_some(),
        clifford: images.iter().all(Option::is_some),
        fixed_axis: fixed,
    }
}

/// A factorization U = C D C' with Clifford outer factors and a diagonal
/// middle.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CliffordDecomposition {
    pub c: SingleQubitUnitary,
    pub d: SingleQubitUnitary,
    pub c_prime: SingleQubitUnitary,
}

/// Factors a semi-Clifford unitary as Clifford x diagonal x Clifford.
///
/// If `u` carries axis `sigma` to the signed Pauli `s tau`, pick table
/// Cliffords with `c1 Z c1* = sigma` and `c2 tau c2* = s Z`; then
/// `c2 u c1` commutes with Z, hence is diagonal, and the factors multiply
/// back to `u` with no phase slack.  Diagonal inputs decompose as
/// (I, u, I) because the identity is searched first.
pub fn semi_clifford_decompose(
    u: &SingleQubitUnitary,
) -> Result<CliffordDecomposition, EquivError> {
    let report = is_semi_clifford(u);
    let Some(axis) = report.fixed_axis else {
        return Err(EquivError::NotSemiClifford);
    };
    let (negative, target) = pauli_image(u, axis).expect("the fixed axis maps to a Pauli");
    let table = clifford_group_1q();
    let c1 = table
        .iter()
        .find(|e| pauli_image(e, Axis::Z) == Some((false, axis)))
        .expect("Cliffords act transitively on the axes");
    let c2 = table
        .iter()
        .find(|e| pauli_image(e, target) == Some((negative, Axis::Z)))
        .expect("Cliffords act transitively on signed Paulis");
    let d = c2.mul(u).mul(c1);
    debug_assert!(d.is_diagonal(AXIS_TOL));
    Ok(CliffordDecomposition {
        c: c2.adjoint(),
        d,
        c_prime: c1.adjoint(),
    })
}

/// Conjugation table: for each Clifford element and each single-qubit
/// `(z, x)` letter of the Hermitian Pauli basis, the image letter and the
/// exact power of i it picks up.  Derived numerically once and rounded;
/// entries of the conjugated matrices are exact units up to roundoff.
static CONJ_TABLEAU: LazyLock<Vec<[(u8, bool, bool); 4]>> = LazyLock::new(|| {
    let i_unit = c(0.0, 1.0);
    let letter = |z: bool, x: bool| -> Mat2 {
        let op = PauliOp::from_zx(0, BitVec::from_bools(&[z]), BitVec::from_bools(&[x]));
        let col0 = StateVector::basis_state(1, 0).apply_pauli(&op);
        let col1 = StateVector::basis_state(1, 1).apply_pauli(&op);
        [
            [col0.amps()[0], col1.amps()[0]],
            [col0.amps()[1], col1.amps()[1]],
        ]
    };
    clifford_group_1q()
        .iter()
        .map(|u| {
            std::array::from_fn(|idx| {
                let (z, x) = (idx & 2 != 0, idx & 1 != 0);
                let conj = mat_mul(&mat_mul(&u.m, &letter(z, x)), &mat_adjoint(&u.m));
                for z2 in [false, true] {
                    for x2 in [false, true] {
                        for p in 0..4u8 {
                            let want = mat_scaled(&letter(z2, x2), i_unit.powu(u32::from(p)));
                            if mat_max_diff(&conj, &want) <= AXIS_TOL {
                                debug_assert!(
                                    p % 2 == 0,
                                    "Hermitian letters map to signed letters"
                                );
                                return (p, z2, x2);
                            }
                        }
                    }
                }
                unreachable!("Clifford conjugation permutes the Pauli letters");
            })
        })
        .collect()
});

/// Conjugates `op` by the tensor product of table Cliffords, one index per
/// qubit.  Exact: the result's sign comes from the integer tableau, not
/// from floating-point accumulation.
///
/// # Panics
/// Panics if `elems.len() != op.n_qubits()` or an index is out of range.
#[must_use]
pub fn conjugate_op(op: &PauliOp, elems: &[usize]) -> PauliOp {
    let n = op.n_qubits();
    assert_eq!(elems.len(), n, "one Clifford index per qubit");
    let tableau = &*CONJ_TABLEAU;
    let mut phase = op.phase_exp();
    let mut z = BitVec::zeros(n);
    let mut x = BitVec::zeros(n);
    for q in 0..n {
        let idx = usize::from(op.z().get(q)) * 2 + usize::from(op.x().get(q));
        let (p, z2, x2) = tableau[elems[q]][idx];
        phase = (phase + p) % 4;
        z.set(q, z2);
        x.set(q, x2);
    }
    PauliOp::from_zx(phase, z, x)
}

/// Conjugates every generator; local Clifford conjugation preserves group
/// validity, so the result needs no fallible rebuild.
#[must_use]
pub fn local_clifford_conjugate(group: &StabilizerGroup, elems: &[usize]) -> StabilizerGroup {
    let gens = group
        .generators()
        .iter()
        .map(|g| conjugate_op(g, elems))
        .collect();
    StabilizerGroup::new(group.n_qubits(), gens)
        .expect("conjugation preserves commutation and independence")
}

fn descend(
    state: &StateVector,
    qubit: usize,
    table: &[SingleQubitUnitary],
    target: &StateVector,
    threshold: f64,
    picks: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if qubit == state.n_qubits() {
        return (state.inner_product(target).norm() >= threshold).then(|| picks.clone());
    }
    for (i, u) in table.iter().enumerate() {
        picks.push(i);
        let next = state.apply_single_qubit(qubit, u.matrix());
        if let Some(found) = descend(&next, qubit + 1, table, target, threshold, picks) {
            return Some(found);
        }
        picks.pop();
    }
    None
}

/// Searches all `24^n` local Clifford products for one carrying `psi` to
/// `psi_prime` up to global phase, returning the lexicographically first
/// index tuple into [`clifford_group_1q`].  The first qubit's 24 choices
/// run on separate threads; the merge keeps the deterministic order.
///
/// # Panics
/// Panics if the two states have different sizes.
pub fn lc_equivalent_bruteforce(
    psi: &StateVector,
    psi_prime: &StateVector,
) -> Result<Option<Vec<usize>>, EquivError> {
    assert_eq!(psi.n_qubits(), psi_prime.n_qubits(), "state sizes differ");
    let n = psi.n_qubits();
    if n > MAX_BRUTEFORCE_QUBITS {
        return Err(EquivError::TooLarge {
            n,
            max: MAX_BRUTEFORCE_QUBITS,
        });
    }
    let threshold = 1.0 - 1e-8;
    if n == 0 {
        let hit = psi.inner_product(psi_prime).norm() >= threshold;
        return Ok(hit.then(Vec::new));
    }
    let table = clifford_group_1q();
    let results: Vec<Option<Vec<usize>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..table.len())
            .map(|first| {
                scope.spawn(move || {
                    let state = psi.apply_single_qubit(0, table[first].matrix());
                    let mut picks = vec![first];
                    descend(&state, 1, table, psi_prime, threshold, &mut picks)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    Ok(results.into_iter().flatten().next())
}

/// Outcome category of a diagonal local-unitary comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DluReason {
    Ok,
    SMismatch,
    TMismatch,
    AmplitudeMismatch,
}

/// Verdict of [`dlu_check`].
///
/// `q` is the ambient quadratic form whose signs the per-qubit phases must
/// reproduce on the support subspace; it is the zero form when the check
/// fails before the amplitude stage.  `clifford_rep` present implies
/// `complex_rep`, never the converse.
#[derive(Clone, Debug)]
pub struct DluVerdict {
    pub related: bool,
    pub reason: DluReason,
    pub q: QuadraticForm,
    pub complex_rep: bool,
    pub clifford_rep: Option<PhaseAssignment>,
}

impl Serialize for DluVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DluVerdict", 5)?;
        s.serialize_field("related", &self.related)?;
        s.serialize_field("reason", &self.reason)?;
        s.serialize_field("Q", &self.q)?;
        s.serialize_field("complex_rep", &self.complex_rep)?;
        s.serialize_field("clifford_rep", &self.clifford_rep)?;
        s.end()
    }
}

fn mismatch_verdict(n: usize, reason: DluReason) -> DluVerdict {
    DluVerdict {
        related: false,
        reason,
        q: QuadraticForm::zero(n),
        complex_rep: false,
        clifford_rep: None,
    }
}

/// Decides whether two stabilizer states are related by a diagonal local
/// unitary, and separately whether a diagonal local Clifford suffices.
///
/// Both states are put in standard form.  A diagonal map cannot change the
/// support, so differing subspaces or offsets refute immediately.
/// Otherwise the standardized forms `q` and `q'` are summed, lifted to the
/// ambient variables, and handed to the phase solvers: unconstrained unit
/// phases decide `related`, fourth roots of unity fill `clifford_rep`.
pub fn dlu_check(psi: &StateVector, psi_prime: &StateVector) -> Result<DluVerdict, EquivError> {
    assert_eq!(psi.n_qubits(), psi_prime.n_qubits(), "state sizes differ");
    let n = psi.n_qubits();
    let sf = extract(psi)?;
    let sf2 = extract(psi_prime)?;
    if sf.s_basis() != sf2.s_basis() {
        return Ok(mismatch_verdict(n, DluReason::SMismatch));
    }
    if sf.t() != sf2.t() {
        return Ok(mismatch_verdict(n, DluReason::TMismatch));
    }
    let (_, q1, _) = standardize(&sf);
    let (_, q2, _) = standardize(&sf2);
    let q = q1.add(&q2).lifted(sf.s_basis());
    let ps = PhaseSystem::new(sf.s_basis().clone(), q.clone())
        .expect("an extracted basis is independent and sized to the register");
    let complex = complex_representable(&ps)?;
    let clifford = z2l_representable(&ps, 2)?;
    debug_assert!(clifford.is_none() || complex.is_some());
    let related = complex.is_some();
    Ok(DluVerdict {
        related,
        reason: if related {
            DluReason::Ok
        } else {
            DluReason::AmplitudeMismatch
        },
        q,
        complex_rep: related,
        clifford_rep: clifford,
    })
}
