//! Row-major matrices over GF(2) with reduced row echelon machinery.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bitvec::BitVec;

/// Matrix over GF(2), stored as a list of packed rows of equal length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

/// Outcome of reduced row echelon elimination.
///
/// `matrix` is in RREF: pivot columns strictly increase, each pivot column
/// has a single one, zero rows sit at the bottom. `transform` satisfies
/// `transform * original = matrix` and is square invertible.
pub struct Rref {
    pub matrix: BitMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub transform: BitMatrix,
}

impl BitMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows.
    ///
    /// # Panics
    /// Panics if the rows disagree on length. `cols` disambiguates the
    /// zero-row case.
    #[must_use]
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        BitMatrix { rows, cols }
    }

    /// Parses rows of `0`/`1` strings.
    pub fn parse(rows: &[&str]) -> Result<Self, String> {
        let parsed: Result<Vec<BitVec>, String> = rows.iter().map(|r| BitVec::parse(r)).collect();
        let parsed = parsed?;
        let cols = parsed.first().map_or(0, BitVec::len);
        if parsed.iter().any(|r| r.len() != cols) {
            return Err("rows of unequal length".into());
        }
        Ok(BitMatrix { rows: parsed, cols })
    }

    #[must_use]
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    #[must_use]
    pub fn n_cols(&self) -> usize {
        self.cols
    }

    #[must_use]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    #[must_use]
    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    #[must_use]
    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones() {
                out.rows[j].set(i, true);
            }
        }
        out
    }

    /// Matrix-vector product `self * v`.
    ///
    /// # Panics
    /// Panics if `v.len() != n_cols`.
    #[must_use]
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        BitVec::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// Row-vector-matrix product `c * self`, i.e. the combination of rows
    /// selected by the ones of `c`.
    ///
    /// # Panics
    /// Panics if `c.len() != n_rows`.
    #[must_use]
    pub fn combine_rows(&self, c: &BitVec) -> BitVec {
        assert_eq!(c.len(), self.rows.len(), "dimension mismatch");
        let mut out = BitVec::zeros(self.cols);
        for i in c.ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    /// Reduced row echelon form with the recorded row transform.
    #[must_use]
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut t = BitMatrix::identity(self.rows.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            let Some(pivot) = (r..m.rows.len()).find(|&i| m.rows[i].get(col)) else {
                continue;
            };
            m.rows.swap(r, pivot);
            t.rows.swap(r, pivot);
            for i in 0..m.rows.len() {
                if i != r && m.rows[i].get(col) {
                    let (row_r, row_i) = borrow_two(&mut m.rows, r, i);
                    row_i.xor_assign(row_r);
                    let (t_r, t_i) = borrow_two(&mut t.rows, r, i);
                    t_i.xor_assign(t_r);
                }
            }
            pivots.push(col);
            r += 1;
            if r == m.rows.len() {
                break;
            }
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
            transform: t,
        }
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : self * x = 0}` as rows, one per free column, in RREF.
    #[must_use]
    pub fn kernel(&self) -> BitMatrix {
        let red = self.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in red.pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for (free, pivot) in pivot_of_col.iter().enumerate() {
            if pivot.is_some() {
                continue;
            }
            let mut x = BitVec::singleton(self.cols, free);
            for (r, &pc) in red.pivots.iter().enumerate() {
                if red.matrix.rows[r].get(free) {
                    x.set(pc, true);
                }
            }
            basis.push(x);
        }
        // free columns ascending already yields RREF rows (pivot = free column)
        BitMatrix::from_rows(basis, self.cols)
    }

    /// One solution of `self * x = b`, if any.
    ///
    /// # Panics
    /// Panics if `b.len() != n_rows`.
    #[must_use]
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.rows.len(), "dimension mismatch");
        let red = self.rref();
        let tb = red.transform.mul_vec(b);
        // rows past the rank are zero; inconsistent if their rhs is not
        if (red.rank..self.rows.len()).any(|i| tb.get(i)) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &c) in red.pivots.iter().enumerate() {
            if tb.get(r) {
                x.set(c, true);
            }
        }
        Some(x)
    }

    /// Checks that the rows form a reduced row echelon basis with no zero rows.
    #[must_use]
    pub fn is_rref_basis(&self) -> bool {
        let mut last = None;
        for (i, row) in self.rows.iter().enumerate() {
            let Some(lead) = row.first_one() else {
                return false;
            };
            if let Some(prev) = last {
                if lead <= prev {
                    return false;
                }
            }
            last = Some(lead);
            if (0..self.rows.len()).any(|j| j != i && self.rows[j].get(lead)) {
                return false;
            }
        }
        true
    }

    /// Reduces `v` to the canonical representative of its coset modulo the
    /// row space. With an RREF basis the result has zeros at all pivot
    /// columns, which is the numerically smallest coset element under the
    /// bit-0-most-significant reading.
    #[must_use]
    pub fn reduce_vec(&self, v: &BitVec) -> BitVec {
        let mut out = v.clone();
        for row in &self.rows {
            if let Some(lead) = row.first_one() {
                if out.get(lead) {
                    out.xor_assign(row);
                }
            }
        }
        out
    }

    /// Coordinates of `v` in the row span of an RREF basis, if present.
    ///
    /// # Panics
    /// Panics if the rows are not an RREF basis.
    #[must_use]
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        assert!(self.is_rref_basis(), "coordinates need an RREF basis");
        let mut c = BitVec::zeros(self.rows.len());
        let mut rem = v.clone();
        for (i, row) in self.rows.iter().enumerate() {
            let lead = row.first_one().expect("no zero rows in an RREF basis");
            if rem.get(lead) {
                c.set(i, true);
                rem.xor_assign(row);
            }
        }
        rem.is_zero().then_some(c)
    }
}

fn borrow_two<T>(v: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&hi[0], &mut lo[b])
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix[{}x{}]", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows.iter().map(BitVec::to_string))
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<String>::deserialize(deserializer)?;
        let strs: Vec<&str> = rows.iter().map(String::as_str).collect();
        BitMatrix::parse(&strs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(0.5) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[test]
    fn rref_of_known_matrix() {
        let m = BitMatrix::parse(&["110", "011", "101"]).unwrap();
        let red = m.rref();
        // rows sum to zero, so rank 2
        assert_eq!(red.rank, 2);
        assert_eq!(red.pivots, vec![0, 1]);
        assert_eq!(red.matrix.row(0).to_string(), "101");
        assert_eq!(red.matrix.row(1).to_string(), "011");
        assert!(red.matrix.row(2).is_zero());
    }

    #[test]
    fn rref_transform_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..8);
            let m = random_matrix(&mut rng, rows, cols);
            let red = m.rref();
            for i in 0..rows {
                let mut selector = BitVec::zeros(rows);
                for j in red.transform.row(i).ones() {
                    selector.set(j, true);
                }
                assert_eq!(m.combine_rows(&selector), *red.matrix.row(i));
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..8);
            let m = random_matrix(&mut rng, rows, cols);
            let ker = m.kernel();
            assert_eq!(ker.n_rows(), cols - m.rank());
            for v in ker.rows() {
                assert!(m.mul_vec(v).is_zero());
            }
            assert_eq!(ker.rank(), ker.n_rows());
        }
    }

    #[test]
    fn solve_round_trip_and_inconsistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut seen_none = false;
        for _ in 0..200 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..7);
            let m = random_matrix(&mut rng, rows, cols);
            let b = BitVec::from_bools(&(0..rows).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
            match m.solve(&b) {
                Some(x) => assert_eq!(m.mul_vec(&x), b),
                None => {
                    seen_none = true;
                    // exhaustive confirmation that no solution exists
                    for xi in 0..1u32 << cols {
                        let x = BitVec::from_bools(
                            &(0..cols).map(|j| xi >> j & 1 != 0).collect::<Vec<_>>(),
                        );
                        assert_ne!(m.mul_vec(&x), b);
                    }
                }
            }
        }
        assert!(seen_none, "test never exercised the inconsistent branch");
    }

    #[test]
    fn coset_reduction_is_numeric_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let cols = rng.gen_range(1..7);
            let rows = rng.gen_range(1..=cols);
            let basis = random_matrix(&mut rng, rows, cols).rref();
            let basis = BitMatrix::from_rows(basis.matrix.rows()[..basis.rank].to_vec(), cols);
            let v = BitVec::from_bools(&(0..cols).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
            let canon = basis.reduce_vec(&v);
            let mut best = usize::MAX;
            for ci in 0..1u32 << basis.n_rows() {
                let c = BitVec::from_bools(
                    &(0..basis.n_rows())
                        .map(|j| ci >> j & 1 != 0)
                        .collect::<Vec<_>>(),
                );
                best = best.min(basis.combine_rows(&c).xor(&v).to_basis_index());
            }
            assert_eq!(canon.to_basis_index(), best);
        }
    }

    #[test]
    fn coordinates_identify_span_members() {
        let basis = BitMatrix::parse(&["1010", "0110"]).unwrap();
        assert!(basis.is_rref_basis());
        let v = basis.row(0).xor(basis.row(1));
        let c = basis.coordinates(&v).unwrap();
        assert_eq!(c.to_string(), "11");
        assert!(basis.coordinates(&BitVec::parse("0001").unwrap()).is_none());
    }
}
