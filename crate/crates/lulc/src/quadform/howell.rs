//! Linear solving over the ring Z/2^l.
//!
//! Gaussian elimination alone is not enough here: 2 is a zero divisor, so a
//! row span is not determined by echelon pivots alone. The fix is the Howell
//! form, which augments elimination with annihilator rows (2^(l-v) times a
//! pivot row of valuation v) so that membership in the row span can be read
//! off greedily, column by column.
//!
//! Everything is tracked against the original rows: each working row carries
//! the coefficient vector that produced it, so expressing a target in the
//! span immediately yields a solution of the transposed linear system.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HowellError {
    #[error("modulus exponent {0} out of range (need 1..=32)")]
    LevelOutOfRange(u32),
    #[error("ragged or empty input rows")]
    BadShape,
}

/// 2-adic valuation, with `l` standing in for "zero".
fn valuation(x: u64, l: u32) -> u32 {
    if x == 0 {
        l
    } else {
        x.trailing_zeros()
    }
}

/// Inverse of an odd residue mod 2^l by Newton iteration.
fn odd_inverse(a: u64, mask: u64) -> u64 {
    debug_assert!(a & 1 == 1);
    let mut x = a;
    for _ in 0..6 {
        x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x))) & mask;
    }
    debug_assert!(a.wrapping_mul(x) & mask == 1);
    x
}

struct WorkRow {
    row: Vec<u64>,
    /// coefficients over the original rows: row = combo * original
    combo: Vec<u64>,
}

impl WorkRow {
    fn sub_scaled(&mut self, other: &WorkRow, c: u64, mask: u64) {
        for (a, b) in self.row.iter_mut().zip(&other.row) {
            *a = a.wrapping_sub(c.wrapping_mul(*b)) & mask;
        }
        for (a, b) in self.combo.iter_mut().zip(&other.combo) {
            *a = a.wrapping_sub(c.wrapping_mul(*b)) & mask;
        }
    }

    fn scale(&mut self, c: u64, mask: u64) {
        for a in &mut self.row {
            *a = a.wrapping_mul(c) & mask;
        }
        for a in &mut self.combo {
            *a = a.wrapping_mul(c) & mask;
        }
    }
}

/// Howell form of the row span of `rows` over Z/2^l.
pub struct HowellForm {
    l: u32,
    mask: u64,
    n_cols: usize,
    n_original: usize,
    work: Vec<WorkRow>,
    /// (row, column, valuation) per pivot, columns strictly increasing
    pivots: Vec<(usize, usize, u32)>,
}

impl HowellForm {
    pub fn new(rows: &[Vec<u64>], l: u32) -> Result<Self, HowellError> {
        if !(1..=32).contains(&l) {
            return Err(HowellError::LevelOutOfRange(l));
        }
        if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(HowellError::BadShape);
        }
        let mask = (1u64 << l) - 1;
        let n_cols = rows[0].len();
        let n_original = rows.len();
        let mut work: Vec<WorkRow> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut combo = vec![0u64; n_original];
                combo[i] = 1;
                WorkRow {
                    row: r.iter().map(|&x| x & mask).collect(),
                    combo,
                }
            })
            .collect();

        let mut pivots: Vec<(usize, usize, u32)> = Vec::new();
        let mut frontier = 0usize;
        for col in 0..n_cols {
            // minimal valuation at this column among rows below the frontier,
            // including annihilator rows appended by earlier columns
            let Some(best) = (frontier..work.len())
                .filter(|&i| work[i].row[col] != 0)
                .min_by_key(|&i| valuation(work[i].row[col], l))
            else {
                continue;
            };
            work.swap(frontier, best);
            let v = valuation(work[frontier].row[col], l);
            let unit = work[frontier].row[col] >> v;
            let inv = odd_inverse(unit, mask);
            work[frontier].scale(inv, mask);
            debug_assert_eq!(work[frontier].row[col], 1 << v);

            let (pivot_rows, rest) = work.split_at_mut(frontier + 1);
            let pivot = &pivot_rows[frontier];
            for other in rest.iter_mut() {
                if other.row[col] != 0 {
                    // divisible: v is minimal at this column
                    other.sub_scaled(pivot, other.row[col] >> v, mask);
                }
            }
            if v > 0 {
                // the annihilator keeps span membership decidable greedily:
                // 2^(l-v) * pivot has a zero at this column but may not
                let mut ann = WorkRow {
                    row: pivot.row.clone(),
                    combo: pivot.combo.clone(),
                };
                ann.scale(1 << (l - v), mask);
                if ann.row.iter().any(|&x| x != 0) {
                    work.push(ann);
                }
            }
            pivots.push((frontier, col, v));
            frontier += 1;
        }
        // reduce entries above each pivot into [0, 2^v)
        for &(pr, pc, pv) in &pivots {
            let step = 1u64 << pv;
            let (above, rest) = work.split_at_mut(pr);
            let pivot = &rest[0];
            for row in above.iter_mut() {
                let c = row.row[pc] / step;
                if c != 0 {
                    row.sub_scaled(pivot, c, mask);
                }
            }
        }
        debug_assert!(work[frontier..]
            .iter()
            .all(|r| r.row.iter().all(|&x| x == 0)));
        work.truncate(frontier);
        Ok(HowellForm {
            l,
            mask,
            n_cols,
            n_original,
            work,
            pivots,
        })
    }

    /// Coefficients over the original rows reproducing `target`, or `None`
    /// when `target` is outside the row span.
    ///
    /// Correctness of the greedy scan is exactly what the annihilator rows
    /// buy: at each pivot column the residual entry must be divisible by the
    /// pivot 2^v, and the quotient is the unique usable coefficient.
    #[must_use]
    pub fn express(&self, target: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(target.len(), self.n_cols, "target length mismatch");
        let mut residual: Vec<u64> = target.iter().map(|&x| x & self.mask).collect();
        let mut coeffs = vec![0u64; self.n_original];
        for &(pr, pc, pv) in &self.pivots {
            let a = residual[pc];
            if a == 0 {
                continue;
            }
            if a & ((1 << pv) - 1) != 0 {
                return None;
            }
            let c = a >> pv;
            let row = &self.work[pr];
            for (r, b) in residual.iter_mut().zip(&row.row) {
                *r = r.wrapping_sub(c.wrapping_mul(*b)) & self.mask;
            }
            for (acc, b) in coeffs.iter_mut().zip(&row.combo) {
                *acc = acc.wrapping_add(c.wrapping_mul(*b)) & self.mask;
            }
        }
        if residual.iter().any(|&x| x != 0) {
            return None;
        }
        Some(coeffs)
    }

    #[must_use]
    pub fn l(&self) -> u32 {
        self.l
    }
}

/// A particular solution of `a x = b` over Z/2^l, or `None` when the system
/// is unsolvable. Rows of `a` are equations; entries are reduced mod 2^l.
pub fn howell_solve(a: &[Vec<u64>], b: &[u64], l: u32) -> Result<Option<Vec<u64>>, HowellError> {
    if a.is_empty() || a.iter().any(|r| r.len() != a[0].len()) || a.len() != b.len() {
        return Err(HowellError::BadShape);
    }
    let n = a[0].len();
    if n == 0 {
        return Err(HowellError::BadShape);
    }
    // b must lie in the column span; transpose so columns become rows
    let transposed: Vec<Vec<u64>> = (0..n)
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect();
    let form = HowellForm::new(&transposed, l)?;
    let Some(x) = form.express(b) else {
        return Ok(None);
    };
    let mask = (1u64 << l) - 1;
    // substitution check; express() returning a wrong combination would be
    // an internal bug, but a solver must never hand back a non-solution
    let verified = a.iter().zip(b).all(|(row, &want)| {
        let acc = row.iter().zip(&x).fold(0u64, |s, (&c, &xi)| {
            s.wrapping_add(c.wrapping_mul(xi)) & mask
        });
        acc == want & mask
    });
    debug_assert!(verified, "express() produced a non-solution");
    Ok(if verified { Some(x) } else { None })
}
