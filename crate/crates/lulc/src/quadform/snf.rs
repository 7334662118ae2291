//! Dense integer matrices and the Smith normal form.
//!
//! Entries are arbitrary-precision: the elimination is run with exact
//! arithmetic and the unimodular transforms are accumulated alongside, so
//! `a = p * d * q` holds exactly and both inverses are available without a
//! separate inversion step.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    #[must_use]
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        IntMatrix {
            n_rows,
            n_cols,
            data: vec![BigInt::zero(); n_rows * n_cols],
        }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// # Panics
    /// Panics if the rows are empty or ragged.
    #[must_use]
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let n_rows = rows.len();
        assert!(n_rows > 0, "need at least one row");
        let n_cols = rows[0].len();
        let mut m = IntMatrix::zeros(n_rows, n_cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    #[must_use]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[must_use]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n_cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n_cols + j] = v;
    }

    /// # Panics
    /// Panics if inner dimensions disagree.
    #[must_use]
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n_cols, other.n_rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.n_cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    #[must_use]
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n_cols, "dimension mismatch");
        (0..self.n_rows)
            .map(|i| (0..self.n_cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    #[must_use]
    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.n_cols..(i + 1) * self.n_cols].to_vec()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n_cols {
            self.data.swap(a * self.n_cols + j, b * self.n_cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.n_rows {
            self.data.swap(i * self.n_cols + a, i * self.n_cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.n_cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.n_rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// row_i += c * row_j
    fn add_row_multiple(&mut self, i: usize, j: usize, c: &BigInt) {
        for col in 0..self.n_cols {
            let v = self.get(i, col) + c * self.get(j, col);
            self.set(i, col, v);
        }
    }

    /// col_i += c * col_j
    fn add_col_multiple(&mut self, i: usize, j: usize, c: &BigInt) {
        for row in 0..self.n_rows {
            let v = self.get(row, i) + c * self.get(row, j);
            self.set(row, i, v);
        }
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.n_rows, self.n_cols)?;
        for i in 0..self.n_rows {
            let row: Vec<String> = (0..self.n_cols)
                .map(|j| self.get(i, j).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `a = p * d * q` with `p`, `q` unimodular; `d` is diagonal with
/// nonnegative entries, each dividing the next.
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    pub q_inv: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// A particular integer solution of `a x = b`, if one exists.
    ///
    /// Substituting `x = q_inv y` turns the system into `d y = p_inv b`,
    /// which is solvable iff each pivot divides its right-hand entry and the
    /// rhs vanishes past the rank.
    #[must_use]
    pub fn solve_integer(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let rhs = self.p_inv.mul_vec(b);
        let n = self.q.n_rows();
        let mut y = vec![BigInt::zero(); n];
        for (i, r) in rhs.iter().enumerate() {
            if i < self.rank {
                let d = self.d.get(i, i);
                let (quot, rem) = r.div_mod_floor(d);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = quot;
            } else if !r.is_zero() {
                return None;
            }
        }
        Some(self.q_inv.mul_vec(&y))
    }

    /// A particular rational solution of `a x = b`, if one exists.
    #[must_use]
    pub fn solve_rational(&self, b: &[BigInt]) -> Option<Vec<BigRational>> {
        let rhs = self.p_inv.mul_vec(b);
        let n = self.q.n_rows();
        let mut y = vec![BigRational::zero(); n];
        for (i, r) in rhs.iter().enumerate() {
            if i < self.rank {
                y[i] = BigRational::new(r.clone(), self.d.get(i, i).clone());
            } else if !r.is_zero() {
                return None;
            }
        }
        let mut x = vec![BigRational::zero(); n];
        for (i, xi) in x.iter_mut().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                *xi += BigRational::from(self.q_inv.get(i, j).clone()) * yj;
            }
        }
        Some(x)
    }

    /// Basis of the integer left kernel `{u : u a = 0}`: the rows of `p_inv`
    /// past the rank. The basis is saturated because `p_inv` is unimodular.
    #[must_use]
    pub fn left_kernel_basis(&self) -> IntMatrix {
        let m = self.p_inv.n_rows();
        let mut out = IntMatrix::zeros(m - self.rank, m);
        for i in self.rank..m {
            for j in 0..m {
                out.set(i - self.rank, j, self.p_inv.get(i, j).clone());
            }
        }
        out
    }
}

/// Smith normal form by repeated pivoting on a minimal-magnitude entry.
///
/// Every row operation `b <- l b` updates `p <- p l^-1`, `p_inv <- l p_inv`
/// (columns, dually for `q`), so `a = p b q` is a loop invariant and the
/// final `b` is `d`.
#[must_use]
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.n_rows, a.n_cols);
    let mut b = a.clone();
    let mut p = IntMatrix::identity(m);
    let mut p_inv = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);
    let mut q_inv = IntMatrix::identity(n);

    // elementary operations, applied to b and mirrored into the transforms
    macro_rules! row_swap {
        ($i:expr, $j:expr) => {{
            b.swap_rows($i, $j);
            p.swap_cols($i, $j);
            p_inv.swap_rows($i, $j);
        }};
    }
    macro_rules! col_swap {
        ($i:expr, $j:expr) => {{
            b.swap_cols($i, $j);
            q.swap_rows($i, $j);
            q_inv.swap_cols($i, $j);
        }};
    }
    macro_rules! row_add {
        // row_i += c * row_j
        ($i:expr, $j:expr, $c:expr) => {{
            let c: BigInt = $c;
            b.add_row_multiple($i, $j, &c);
            p.add_col_multiple($j, $i, &(-&c));
            p_inv.add_row_multiple($i, $j, &c);
        }};
    }
    macro_rules! col_add {
        // col_i += c * col_j
        ($i:expr, $j:expr, $c:expr) => {{
            let c: BigInt = $c;
            b.add_col_multiple($i, $j, &c);
            q.add_row_multiple($j, $i, &(-&c));
            q_inv.add_col_multiple($i, $j, &c);
        }};
    }

    let mut rank = 0;
    'pivots: for k in 0..m.min(n) {
        // minimal-magnitude nonzero entry of the trailing submatrix
        let mut best: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if !b.get(i, j).is_zero()
                    && best.is_none_or(|(bi, bj)| b.get(i, j).abs() < b.get(bi, bj).abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break 'pivots };
        row_swap!(k, bi);
        col_swap!(k, bj);

        loop {
            if b.get(k, k).is_negative() {
                b.negate_row(k);
                p.negate_col(k);
                p_inv.negate_row(k);
            }
            // clear column k below the pivot by Euclidean steps
            let mut disturbed = false;
            for i in k + 1..m {
                if b.get(i, k).is_zero() {
                    continue;
                }
                let quot = b.get(i, k).div_floor(b.get(k, k));
                row_add!(i, k, -quot);
                if !b.get(i, k).is_zero() {
                    // remainder is a strictly smaller pivot candidate
                    row_swap!(k, i);
                    disturbed = true;
                    break;
                }
            }
            if disturbed {
                continue;
            }
            for j in k + 1..n {
                if b.get(k, j).is_zero() {
                    continue;
                }
                let quot = b.get(k, j).div_floor(b.get(k, k));
                col_add!(j, k, -quot);
                if !b.get(k, j).is_zero() {
                    col_swap!(k, j);
                    disturbed = true;
                    break;
                }
            }
            if disturbed {
                continue;
            }
            // pivot row and column are clear; force divisibility of the rest
            let mut fixup = None;
            'scan: for i in k + 1..m {
                for j in k + 1..n {
                    if !b.get(i, j).mod_floor(b.get(k, k)).is_zero() {
                        fixup = Some(i);
                        break 'scan;
                    }
                }
            }
            match fixup {
                Some(i) => row_add!(k, i, BigInt::one()),
                None => break,
            }
        }
        rank = k + 1;
    }

    debug_assert_eq!(&p.mul(&p_inv), &IntMatrix::identity(m));
    debug_assert_eq!(&q.mul(&q_inv), &IntMatrix::identity(n));
    SmithDecomposition {
        d: b,
        p,
        p_inv,
        q,
        q_inv,
        rank,
    }
}
