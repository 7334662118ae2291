//! Hermitian Pauli operators in binary symplectic form.
//!
//! An operator is stored as `i^phase_exp * W(z, x)` where
//! `W(z, x) = (tensor over qubits) i^{z_i x_i} Z^{z_i} X^{x_i}`.
//! `W` is Hermitian for every `(z, x)`, so an operator is Hermitian exactly
//! when `phase_exp` is even. Note `W(1,1) = iZX = -Y`, so the letter `Y`
//! carries an extra factor of `i^2` relative to its `(z, x) = (1, 1)` bits.
//!
//! Products only ever touch phases through a 4x4 table of Z4 increments,
//! generated once from literal 2x2 complex matrix products, so no phase
//! convention is hand-transcribed anywhere.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num_complex::Complex;
use thiserror::Error;

use crate::gf2::BitVec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PauliError {
    #[error("operators act on different qubit counts ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty Pauli string")]
    Empty,
    #[error("invalid character {0:?} in Pauli string")]
    InvalidCharacter(char),
}

type GaussInt = Complex<i64>;
type Mat2 = [[GaussInt; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[GaussInt::new(0, 0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat_scale(m: &Mat2, s: GaussInt) -> Mat2 {
    let mut out = *m;
    for row in &mut out {
        for e in row {
            *e *= s;
        }
    }
    out
}

/// The 2x2 matrix of `W(z, x)` with Gaussian integer entries.
fn w_matrix(z: bool, x: bool) -> Mat2 {
    let zero = GaussInt::new(0, 0);
    let one = GaussInt::new(1, 0);
    let i = GaussInt::new(0, 1);
    let z_mat = [[one, zero], [zero, -one]];
    let x_mat = [[zero, one], [one, zero]];
    let mut m = [[one, zero], [zero, one]];
    if z {
        m = mat_mul(&m, &z_mat);
    }
    if x {
        m = mat_mul(&m, &x_mat);
    }
    if z && x {
        m = mat_scale(&m, i);
    }
    m
}

/// `PHASE_TABLE[a][b] = t` with `W(a) W(b) = i^t W(a ^ b)`, indices `z*2 + x`.
static PHASE_TABLE: LazyLock<[[u8; 4]; 4]> = LazyLock::new(|| {
    let i = GaussInt::new(0, 1);
    let mut table = [[0u8; 4]; 4];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            let prod = mat_mul(
                &w_matrix(a & 2 != 0, a & 1 != 0),
                &w_matrix(b & 2 != 0, b & 1 != 0),
            );
            let c = a ^ b;
            let target = w_matrix(c & 2 != 0, c & 1 != 0);
            let t = (0..4)
                .find(|&t| {
                    let mut scaled = target;
                    for _ in 0..t {
                        scaled = mat_scale(&scaled, i);
                    }
                    scaled == prod
                })
                .expect("every W product is a fourth root of unity times a W");
            *entry = t;
        }
    }
    table
});

/// n-qubit Pauli operator `i^phase_exp * W(z, x)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    phase_exp: u8,
    z: BitVec,
    x: BitVec,
}

impl PauliOp {
    #[must_use]
    pub fn identity(n: usize) -> Self {
        PauliOp {
            phase_exp: 0,
            z: BitVec::zeros(n),
            x: BitVec::zeros(n),
        }
    }

    /// # Panics
    /// Panics if `z` and `x` have different lengths.
    #[must_use]
    pub fn from_zx(phase_exp: u8, z: BitVec, x: BitVec) -> Self {
        assert_eq!(z.len(), x.len(), "z and x must have equal length");
        PauliOp {
            phase_exp: phase_exp % 4,
            z,
            x,
        }
    }

    /// Z-type operator `Z(z) = W(z, 0)` with positive sign.
    #[must_use]
    pub fn z_type(z: BitVec) -> Self {
        let n = z.len();
        PauliOp {
            phase_exp: 0,
            z,
            x: BitVec::zeros(n),
        }
    }

    /// X-type operator `X(x) = W(0, x)` with positive sign.
    #[must_use]
    pub fn x_type(x: BitVec) -> Self {
        let n = x.len();
        PauliOp {
            phase_exp: 0,
            z: BitVec::zeros(n),
            x,
        }
    }

    #[must_use]
    pub fn n_qubits(&self) -> usize {
        self.z.len()
    }

    #[must_use]
    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    #[must_use]
    pub fn z(&self) -> &BitVec {
        &self.z
    }

    #[must_use]
    pub fn x(&self) -> &BitVec {
        &self.x
    }

    /// True when the operator is the identity up to phase.
    #[must_use]
    pub fn is_identity_up_to_phase(&self) -> bool {
        self.z.is_zero() && self.x.is_zero()
    }

    #[must_use]
    pub fn is_hermitian(&self) -> bool {
        self.phase_exp.is_multiple_of(2)
    }

    /// Qubits on which the operator acts nontrivially: z OR x.
    #[must_use]
    pub fn support(&self) -> BitVec {
        let mut out = self.z.xor(&self.x);
        out.xor_assign(&self.z.and(&self.x));
        out
    }

    #[must_use]
    pub fn weight(&self) -> usize {
        self.support().count_ones()
    }

    /// Symplectic product `z . x' + x . z'` over GF(2); zero iff the two
    /// operators commute.
    ///
    /// # Panics
    /// Panics on qubit-count mismatch; operators from a validated group
    /// always agree on `n`.
    #[must_use]
    pub fn symplectic_product(&self, other: &PauliOp) -> bool {
        assert_eq!(
            self.n_qubits(),
            other.n_qubits(),
            "symplectic product across different qubit counts"
        );
        self.z.dot(&other.x) ^ self.x.dot(&other.z)
    }

    #[must_use]
    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        !self.symplectic_product(other)
    }

    /// Exact operator product, phases tracked in Z4.
    ///
    /// # Panics
    /// Panics on qubit-count mismatch.
    #[must_use]
    pub fn mul(&self, other: &PauliOp) -> PauliOp {
        assert_eq!(
            self.n_qubits(),
            other.n_qubits(),
            "product across different qubit counts"
        );
        let table = &*PHASE_TABLE;
        let mut phase = u32::from(self.phase_exp) + u32::from(other.phase_exp);
        for i in 0..self.n_qubits() {
            let a = usize::from(self.z.get(i)) * 2 + usize::from(self.x.get(i));
            let b = usize::from(other.z.get(i)) * 2 + usize::from(other.x.get(i));
            phase += u32::from(table[a][b]);
        }
        PauliOp {
            phase_exp: (phase % 4) as u8,
            z: self.z.xor(&other.z),
            x: self.x.xor(&other.x),
        }
    }

    /// Conjugate transpose; `W` is Hermitian so only the phase flips.
    #[must_use]
    pub fn adjoint(&self) -> PauliOp {
        PauliOp {
            phase_exp: (4 - self.phase_exp) % 4,
            z: self.z.clone(),
            x: self.x.clone(),
        }
    }

    /// Same operator with `delta` added to the phase exponent.
    #[must_use]
    pub fn with_extra_phase(&self, delta: u8) -> PauliOp {
        PauliOp {
            phase_exp: (self.phase_exp + delta) % 4,
            z: self.z.clone(),
            x: self.x.clone(),
        }
    }

    /// Tensor product; `W` factorizes qubit-wise so phases simply add.
    #[must_use]
    pub fn tensor(&self, other: &PauliOp) -> PauliOp {
        PauliOp {
            phase_exp: (self.phase_exp + other.phase_exp) % 4,
            z: self.z.concat(&other.z),
            x: self.x.concat(&other.x),
        }
    }

    /// The letter at `qubit` together with the phase adjustment it carries:
    /// `W(z_i, x_i) = i^adj * letter`.
    fn letter_at(&self, qubit: usize) -> (char, u8) {
        match (self.z.get(qubit), self.x.get(qubit)) {
            (false, false) => ('I', 0),
            (false, true) => ('X', 0),
            (true, false) => ('Z', 0),
            (true, true) => ('Y', 2),
        }
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut prefix = u32::from(self.phase_exp);
        let mut letters = String::with_capacity(self.n_qubits());
        for q in 0..self.n_qubits() {
            let (ch, adj) = self.letter_at(q);
            prefix += u32::from(adj);
            letters.push(ch);
        }
        f.write_str(match prefix % 4 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })?;
        f.write_str(&letters)
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({self})")
    }
}

impl FromStr for PauliOp {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, PauliError> {
        let mut chars = s.chars().peekable();
        let mut phase: u8 = match chars.peek() {
            Some('+') => {
                chars.next();
                0
            }
            Some('-') => {
                chars.next();
                2
            }
            Some(_) => 0,
            None => return Err(PauliError::Empty),
        };
        if chars.peek() == Some(&'i') {
            chars.next();
            phase += 1;
        }
        let mut z_bits = Vec::new();
        let mut x_bits = Vec::new();
        for ch in chars {
            let (zb, xb, adj) = match ch {
                'I' => (false, false, 0),
                'X' => (false, true, 0),
                'Z' => (true, false, 0),
                'Y' => (true, true, 2),
                other => return Err(PauliError::InvalidCharacter(other)),
            };
            z_bits.push(zb);
            x_bits.push(xb);
            phase += adj;
        }
        if z_bits.is_empty() {
            return Err(PauliError::Empty);
        }
        Ok(PauliOp {
            phase_exp: phase % 4,
            z: BitVec::from_bools(&z_bits),
            x: BitVec::from_bools(&x_bits),
        })
    }
}
