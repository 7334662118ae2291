//! Canonical enumeration of linear subspaces of F2^n.
//!
//! Every k-dimensional subspace has exactly one RREF basis, so streaming
//! over (pivot column set, free-entry fill) pairs visits each subspace once.
//! The stream has a total order and can be restarted from any flat index,
//! which is what makes partitioned searches reproducible.

use super::bitmatrix::BitMatrix;

/// Number of k-dimensional subspaces of F2^n, the Gaussian binomial.
///
/// # Panics
/// Panics if `n > 20`; beyond that the count would not fit the return type
/// comfortably and nothing downstream could enumerate it anyway.
#[must_use]
pub fn subspace_count(n: usize, k: usize) -> u128 {
    assert!(n <= 20, "subspace counting capped at n = 20");
    if k > n {
        return 0;
    }
    // [n k] = [n-1 k-1] + 2^k [n-1 k]
    let mut table = vec![vec![0u128; k + 1]; n + 1];
    for row in table.iter_mut() {
        row[0] = 1;
    }
    for i in 1..=n {
        for j in 1..=k.min(i) {
            table[i][j] = table[i - 1][j - 1] + (1u128 << j) * table[i - 1][j];
        }
    }
    table[n][k]
}

/// Free entry positions of the RREF pattern with the given pivot columns:
/// row i may hold arbitrary bits at non-pivot columns right of pivot i.
/// Returned in the fixed fill order (row-major, columns ascending).
fn free_slots(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut slots = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for col in p + 1..n {
            if !pivots.contains(&col) {
                slots.push((i, col));
            }
        }
    }
    slots
}

fn build_basis(n: usize, pivots: &[usize], slots: &[(usize, usize)], fill: u128) -> BitMatrix {
    let mut m = BitMatrix::zeros(pivots.len(), n);
    for (i, &p) in pivots.iter().enumerate() {
        m.set(i, p, true);
    }
    for (bit, &(r, c)) in slots.iter().enumerate() {
        if fill >> bit & 1 != 0 {
            m.set(r, c, true);
        }
    }
    m
}

/// Advances a sorted pivot combination to lexicographic successor.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Restartable stream of all canonical RREF bases of k-dim subspaces of F2^n.
pub struct SubspaceIter {
    n: usize,
    pivots: Option<Vec<usize>>,
    slots: Vec<(usize, usize)>,
    fill: u128,
}

impl SubspaceIter {
    /// # Panics
    /// Panics if `n > 20`.
    #[must_use]
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n <= 20, "subspace enumeration capped at n = 20");
        let pivots = (k <= n).then(|| (0..k).collect::<Vec<usize>>());
        let slots = pivots
            .as_deref()
            .map_or_else(Vec::new, |p| free_slots(n, p));
        SubspaceIter {
            n,
            pivots,
            slots,
            fill: 0,
        }
    }

    /// Stream positioned at flat index `start` of the full order.
    ///
    /// # Panics
    /// Panics if `start > subspace_count(n, k)`.
    #[must_use]
    pub fn starting_at(n: usize, k: usize, start: u128) -> Self {
        let mut it = Self::new(n, k);
        let mut remaining = start;
        while let Some(pivots) = &it.pivots {
            let block = 1u128 << it.slots.len();
            if remaining < block {
                it.fill = remaining;
                return it;
            }
            remaining -= block;
            let mut combo = pivots.clone();
            if next_combination(&mut combo, n) {
                it.slots = free_slots(n, &combo);
                it.pivots = Some(combo);
                it.fill = 0;
            } else {
                it.pivots = None;
            }
        }
        assert_eq!(remaining, 0, "start index past the end of the stream");
        it
    }
}

impl Iterator for SubspaceIter {
    type Item = BitMatrix;

    fn next(&mut self) -> Option<BitMatrix> {
        let pivots = self.pivots.as_ref()?;
        let basis = build_basis(self.n, pivots, &self.slots, self.fill);
        self.fill += 1;
        if self.fill == 1u128 << self.slots.len() {
            self.fill = 0;
            let mut combo = pivots.clone();
            if next_combination(&mut combo, self.n) {
                self.slots = free_slots(self.n, &combo);
                self.pivots = Some(combo);
            } else {
                self.pivots = None;
            }
        }
        Some(basis)
    }
}

/// Collects the full stream; convenience for small n.
#[must_use]
pub fn enumerate_subspaces(n: usize, k: usize) -> Vec<BitMatrix> {
    SubspaceIter::new(n, k).collect()
}
