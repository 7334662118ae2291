//! Quadratic forms over GF(2) in the strictly-upper-triangular convention:
//! `q(x) = sum_{i<j} theta_ij x_i x_j + lambda . x`.
//!
//! Over GF(2) a square equals the variable itself, so diagonal terms are
//! linear and belong in `lambda`; the representation below is therefore
//! unique, and two forms are equal as functions iff they are equal as data.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("theta must be square with zero diagonal and lower triangle")]
    InvalidTheta,
    #[error("lambda has length {found}, expected {expected}")]
    LambdaLength { expected: usize, found: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticForm {
    m: usize,
    theta: BitMatrix,
    lambda: BitVec,
}

impl QuadraticForm {
    #[must_use]
    pub fn zero(m: usize) -> Self {
        QuadraticForm {
            m,
            theta: BitMatrix::zeros(m, m),
            lambda: BitVec::zeros(m),
        }
    }

    /// Validates shape: `theta` square, strictly upper triangular.
    pub fn new(theta: BitMatrix, lambda: BitVec) -> Result<Self, FormError> {
        let m = theta.n_cols();
        if theta.n_rows() != m {
            return Err(FormError::InvalidTheta);
        }
        for i in 0..m {
            for j in 0..=i {
                if theta.get(i, j) {
                    return Err(FormError::InvalidTheta);
                }
            }
        }
        if lambda.len() != m {
            return Err(FormError::LambdaLength {
                expected: m,
                found: lambda.len(),
            });
        }
        Ok(QuadraticForm { m, theta, lambda })
    }

    /// Number of free coefficients of a form on `m` variables.
    #[must_use]
    pub fn coefficient_count(m: usize) -> usize {
        m * m.saturating_sub(1) / 2 + m
    }

    /// Unpacks coefficients from the low bits of `bits`: cross terms first
    /// in row-major upper-triangular order (0,1), (0,2), ..., (1,2), ...,
    /// then the linear terms. Enumerating `bits` over `0..2^coefficient_count`
    /// walks every form on `m` variables exactly once.
    ///
    /// # Panics
    /// Panics if the coefficients do not fit in a `u64`.
    #[must_use]
    pub fn from_coefficient_bits(m: usize, bits: u64) -> QuadraticForm {
        assert!(Self::coefficient_count(m) <= 64, "too many coefficients");
        let mut form = QuadraticForm::zero(m);
        let mut cursor = 0;
        for i in 0..m {
            for j in i + 1..m {
                if bits >> cursor & 1 == 1 {
                    form.set_cross(i, j, true);
                }
                cursor += 1;
            }
        }
        for i in 0..m {
            if bits >> cursor & 1 == 1 {
                form.set_linear(i, true);
            }
            cursor += 1;
        }
        form
    }

    #[must_use]
    pub fn m(&self) -> usize {
        self.m
    }

    #[must_use]
    pub fn theta(&self) -> &BitMatrix {
        &self.theta
    }

    #[must_use]
    pub fn lambda(&self) -> &BitVec {
        &self.lambda
    }

    /// Sets the coefficient of `x_i x_j`, `i != j`.
    ///
    /// # Panics
    /// Panics if `i == j` or either index is out of range.
    pub fn set_cross(&mut self, i: usize, j: usize, value: bool) {
        assert_ne!(i, j, "diagonal terms are linear over GF(2); use lambda");
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        self.theta.set(lo, hi, value);
    }

    pub fn set_linear(&mut self, i: usize, value: bool) {
        self.lambda.set(i, value);
    }

    /// # Panics
    /// Panics if `x.len() != m`.
    #[must_use]
    pub fn evaluate(&self, x: &BitVec) -> bool {
        assert_eq!(x.len(), self.m, "argument length mismatch");
        let mut acc = self.lambda.dot(x);
        for i in x.ones() {
            acc ^= self.theta.row(i).dot(x);
        }
        acc
    }

    /// Pointwise sum of forms; matches XOR of the data.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    #[must_use]
    pub fn add(&self, other: &QuadraticForm) -> QuadraticForm {
        assert_eq!(self.m, other.m, "dimension mismatch");
        let mut theta = self.theta.clone();
        for i in 0..self.m {
            for j in i + 1..self.m {
                if other.theta.get(i, j) {
                    theta.set(i, j, !theta.get(i, j));
                }
            }
        }
        QuadraticForm {
            m: self.m,
            theta,
            lambda: self.lambda.xor(&other.lambda),
        }
    }

    /// Reconstructs the unique quadratic form agreeing with `f` on the zero
    /// vector (where `f` must vanish), the unit vectors and their pairwise
    /// sums. If `f` really is quadratic the agreement extends everywhere.
    #[must_use]
    pub fn fit<F: Fn(&BitVec) -> bool>(m: usize, f: F) -> QuadraticForm {
        let mut form = QuadraticForm::zero(m);
        let singles: Vec<bool> = (0..m).map(|i| f(&BitVec::singleton(m, i))).collect();
        for (i, &v) in singles.iter().enumerate() {
            form.lambda.set(i, v);
        }
        for i in 0..m {
            for j in i + 1..m {
                let mut x = BitVec::singleton(m, i);
                x.set(j, true);
                form.theta.set(i, j, f(&x) ^ singles[i] ^ singles[j]);
            }
        }
        form
    }

    /// The form on coordinates induced by restricting to the row span of
    /// `basis`: `restricted(c) = self(c . basis)`.
    ///
    /// # Panics
    /// Panics if `basis.n_cols() != m`.
    #[must_use]
    pub fn restricted(&self, basis: &BitMatrix) -> QuadraticForm {
        assert_eq!(basis.n_cols(), self.m, "basis column count mismatch");
        QuadraticForm::fit(basis.n_rows(), |c| self.evaluate(&basis.combine_rows(c)))
    }

    /// Lifts a coordinate form through an RREF basis: the result agrees with
    /// `self` on coordinates, i.e. `lifted(c . basis) = self(c)`. Pivot
    /// columns of the basis carry the coordinates, so the lift just re-indexes
    /// coefficients to pivot positions.
    ///
    /// # Panics
    /// Panics if `basis` is not an RREF basis with `m` rows.
    #[must_use]
    pub fn lifted(&self, basis: &BitMatrix) -> QuadraticForm {
        assert!(basis.is_rref_basis(), "lift requires an RREF basis");
        assert_eq!(basis.n_rows(), self.m, "basis row count mismatch");
        let n = basis.n_cols();
        let pivots: Vec<usize> = basis
            .rows()
            .iter()
            .map(|r| r.first_one().expect("RREF basis rows are nonzero"))
            .collect();
        let mut out = QuadraticForm::zero(n);
        for i in 0..self.m {
            out.lambda.set(pivots[i], self.lambda.get(i));
            for j in i + 1..self.m {
                if self.theta.get(i, j) {
                    out.set_cross(pivots[i], pivots[j], true);
                }
            }
        }
        out
    }
}

/// Serialized shape shared by standard forms and phase systems.
#[derive(Serialize, Deserialize)]
pub(crate) struct FormParts {
    pub theta: BitMatrix,
    pub lambda: BitVec,
}

impl From<&QuadraticForm> for FormParts {
    fn from(q: &QuadraticForm) -> Self {
        FormParts {
            theta: q.theta.clone(),
            lambda: q.lambda.clone(),
        }
    }
}

impl TryFrom<FormParts> for QuadraticForm {
    type Error = FormError;

    fn try_from(parts: FormParts) -> Result<Self, FormError> {
        QuadraticForm::new(parts.theta, parts.lambda)
    }
}

impl Serialize for QuadraticForm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FormParts::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadraticForm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        QuadraticForm::try_from(FormParts::deserialize(deserializer)?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_form(rng: &mut ChaCha8Rng, m: usize) -> QuadraticForm {
        let mut q = QuadraticForm::zero(m);
        for i in 0..m {
            if rng.gen_bool(0.5) {
                q.set_linear(i, true);
            }
            for j in i + 1..m {
                if rng.gen_bool(0.5) {
                    q.set_cross(i, j, true);
                }
            }
        }
        q
    }

    #[test]
    fn evaluate_known_form() {
        // q = x0 x1 + x2 on F2^3
        let mut q = QuadraticForm::zero(3);
        q.set_cross(0, 1, true);
        q.set_linear(2, true);
        assert!(q.evaluate(&BitVec::parse("110").unwrap()));
        assert!(q.evaluate(&BitVec::parse("001").unwrap()));
        assert!(!q.evaluate(&BitVec::parse("111").unwrap()));
        assert!(!q.evaluate(&BitVec::parse("000").unwrap()));
    }

    #[test]
    fn constructor_rejects_lower_triangle() {
        let mut theta = BitMatrix::zeros(2, 2);
        theta.set(1, 0, true);
        assert_eq!(
            QuadraticForm::new(theta, BitVec::zeros(2)).unwrap_err(),
            FormError::InvalidTheta
        );
    }

    #[test]
    fn add_is_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..30 {
            let m = rng.gen_range(1..6);
            let a = random_form(&mut rng, m);
            let b = random_form(&mut rng, m);
            let sum = a.add(&b);
            for idx in 0..1u32 << m {
                let x = BitVec::from_bools(&(0..m).map(|i| idx >> i & 1 != 0).collect::<Vec<_>>());
                assert_eq!(sum.evaluate(&x), a.evaluate(&x) ^ b.evaluate(&x));
            }
        }
    }

    #[test]
    fn restriction_then_lift_round_trips_on_the_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..30 {
            let n = rng.gen_range(2..6);
            let k = rng.gen_range(1..=n);
            let basis = loop {
                let mut m = BitMatrix::zeros(k, n);
                for i in 0..k {
                    for j in 0..n {
                        m.set(i, j, rng.gen_bool(0.5));
                    }
                }
                let red = m.rref();
                if red.rank == k {
                    break BitMatrix::from_rows(red.matrix.rows()[..k].to_vec(), n);
                }
            };
            let ambient = random_form(&mut rng, n);
            let coords = ambient.restricted(&basis);
            let lifted = coords.lifted(&basis);
            for idx in 0..1u32 << k {
                let c = BitVec::from_bools(&(0..k).map(|i| idx >> i & 1 != 0).collect::<Vec<_>>());
                let y = basis.combine_rows(&c);
                assert_eq!(coords.evaluate(&c), ambient.evaluate(&y));
                assert_eq!(lifted.evaluate(&y), ambient.evaluate(&y));
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let mut q = QuadraticForm::zero(3);
        q.set_cross(0, 2, true);
        q.set_linear(1, true);
        let text = serde_json::to_string(&q).unwrap();
        assert_eq!(text, r#"{"theta":["001","000","000"],"lambda":"010"}"#);
        let back: QuadraticForm = serde_json::from_str(&text).unwrap();
        assert_eq!(back, q);
        assert!(
            serde_json::from_str::<QuadraticForm>(r#"{"theta":["00","10"],"lambda":"00"}"#)
                .is_err()
        );
    }

    proptest! {
        #[test]
        fn fit_recovers_any_quadratic_function(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = rng.gen_range(1..6);
            let q = random_form(&mut rng, m);
            let fitted = QuadraticForm::fit(m, |x| q.evaluate(x));
            prop_assert_eq!(&fitted, &q);
            // and the fit agrees beyond the fitting points
            for idx in 0..1u32 << m {
                let x = BitVec::from_bools(
                    &(0..m).map(|i| idx >> i & 1 != 0).collect::<Vec<_>>(),
                );
                prop_assert_eq!(fitted.evaluate(&x), q.evaluate(&x));
            }
        }
    }
}
