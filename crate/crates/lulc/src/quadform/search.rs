//! Exhaustive and sampled search for subspace/form pairs that separate the
//! phase rings: instances representable by arbitrary complex phases but not
//! by 2^l-th roots of unity at the target level.
//!
//! The exhaustive stream walks every canonical subspace of F2^n (all
//! dimensions) and every quadratic form on its coordinates. Instances are
//! numbered by a flat index in stream order, which makes the walk
//! partitionable: a worker processes the indices in its residue class and
//! results merge deterministically.
//!
//! Every candidate must additionally survive the independent brute-force
//! grid check before it is reported as a hit; candidates that cannot be
//! confirmed that way are only counted, never listed.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::form::QuadraticForm;
use super::solvers::{
    complex_points, dyadic_points, exponent_bits, z2l_points, MAX_DYADIC_BITS, MAX_LEVEL,
};
use crate::gf2::{subspace_count, BitMatrix, BitVec, SubspaceIter};

pub const MAX_EXHAUSTIVE_N: usize = 6;
pub const MAX_SAMPLED_N: usize = 10;
/// Sampled instances cap the subspace dimension so the exact solvers stay
/// inside their own enumeration guards.
pub const SAMPLED_K_CAP: usize = 8;

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub n: usize,
    /// target root-of-unity level; hits are complex-representable instances
    /// that this level cannot reach
    pub level: u32,
    pub partition_index: u64,
    pub partition_count: u64,
    pub workers: usize,
}

impl SearchConfig {
    #[must_use]
    pub fn new(n: usize) -> Self {
        SearchConfig {
            n,
            level: 2,
            partition_index: 0,
            partition_count: 1,
            workers: 1,
        }
    }

    fn validate(&self) {
        assert!(
            (1..=MAX_LEVEL).contains(&self.level),
            "target level out of range"
        );
        assert!(self.partition_count >= 1, "need at least one partition");
        assert!(
            self.partition_index < self.partition_count,
            "partition index out of range"
        );
        assert!(self.workers >= 1, "need at least one worker");
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    /// position in the instance stream (exhaustive) or the sample number
    pub flat_index: u64,
    #[serde(rename = "S")]
    pub s_basis: BitMatrix,
    /// the form on subspace coordinates
    #[serde(rename = "Q")]
    pub q: QuadraticForm,
    /// rational phase exponents in units of pi, as fraction strings
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: usize,
    pub level: u32,
    pub exhaustive: bool,
    pub subspaces_examined: u64,
    pub forms_examined: u64,
    pub hits: Vec<SearchHit>,
    /// candidates whose witness could not be re-verified on the brute-force
    /// grid (phases outside the grid, or grid too large for this n)
    pub unconfirmed: u64,
    pub partition_index: u64,
    pub partition_count: u64,
    pub wall_ms: u64,
}

impl SearchReport {
    /// Equality of everything except the timing field; this is the relation
    /// under which reruns and worker counts must be reproducible.
    #[must_use]
    pub fn same_outcome(&self, other: &SearchReport) -> bool {
        self.n == other.n
            && self.level == other.level
            && self.exhaustive == other.exhaustive
            && self.subspaces_examined == other.subspaces_examined
            && self.forms_examined == other.forms_examined
            && self.hits == other.hits
            && self.unconfirmed == other.unconfirmed
            && self.partition_index == other.partition_index
            && self.partition_count == other.partition_count
    }
}

enum Outcome {
    NotHit,
    Hit(Vec<String>),
    Unconfirmed,
}

/// Decides one instance and asserts the ring inclusions on it: a solution at
/// the target level must survive at the next level and must be complex
/// representable. A violation would mean one of the exact solvers is wrong,
/// so it is a panic, not a report entry.
fn examine(points: &[BitVec], values: &[bool], n: usize, level: u32) -> Outcome {
    let at_level = z2l_points(points, values, n, level);
    let complex = complex_points(points, values, n);
    if at_level.is_some() {
        assert!(
            z2l_points(points, values, n, level + 1).is_some(),
            "solution did not lift to the next level"
        );
        assert!(
            complex.is_some(),
            "root-of-unity solution without complex representability"
        );
        return Outcome::NotHit;
    }
    let Some(witness) = complex else {
        return Outcome::NotHit;
    };
    let grid_fits = 4 * (n as u32) <= MAX_DYADIC_BITS;
    if grid_fits && dyadic_points(points, values, n, 3).is_some() {
        Outcome::Hit(witness.iter().map(ToString::to_string).collect())
    } else {
        Outcome::Unconfirmed
    }
}

#[derive(Default)]
struct WorkerOut {
    forms: u64,
    hits: Vec<SearchHit>,
    unconfirmed: u64,
}

fn record(
    out: &mut WorkerOut,
    outcome: Outcome,
    flat: u64,
    basis: &BitMatrix,
    form: &QuadraticForm,
) {
    out.forms += 1;
    match outcome {
        Outcome::NotHit => {}
        Outcome::Unconfirmed => out.unconfirmed += 1,
        Outcome::Hit(witness) => out.hits.push(SearchHit {
            flat_index: flat,
            s_basis: basis.clone(),
            q: form.clone(),
            witness,
        }),
    }
}

fn walk_exhaustive(cfg: SearchConfig, worker: usize) -> WorkerOut {
    let stride = cfg.partition_count * cfg.workers as u64;
    let offset = cfg.partition_index + cfg.partition_count * worker as u64;
    let mut out = WorkerOut::default();
    let mut flat = 0u64;
    for k in 0..=cfg.n {
        let forms_per = 1u64 << QuadraticForm::coefficient_count(k);
        for basis in SubspaceIter::new(cfg.n, k) {
            let mut points: Option<Vec<BitVec>> = None;
            for fidx in 0..forms_per {
                if flat % stride == offset {
                    let points = points.get_or_insert_with(|| {
                        (0..1u64 << k)
                            .map(|idx| basis.combine_rows(&exponent_bits(idx, k)))
                            .collect()
                    });
                    let form = QuadraticForm::from_coefficient_bits(k, fidx);
                    let values: Vec<bool> = (0..1u64 << k)
                        .map(|c| form.evaluate(&exponent_bits(c, k)))
                        .collect();
                    let outcome = examine(points, &values, cfg.n, cfg.level);
                    record(&mut out, outcome, flat, &basis, &form);
                }
                flat += 1;
            }
        }
    }
    out
}

fn run_workers<F>(cfg: SearchConfig, walk: F) -> Vec<WorkerOut>
where
    F: Fn(SearchConfig, usize) -> WorkerOut + Copy + Send,
{
    if cfg.workers == 1 {
        return vec![walk(cfg, 0)];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..cfg.workers)
            .map(|w| scope.spawn(move || walk(cfg, w)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    })
}

fn merge(
    cfg: SearchConfig,
    exhaustive: bool,
    subspaces: u64,
    parts: Vec<WorkerOut>,
    started: Instant,
) -> SearchReport {
    let mut hits = Vec::new();
    let mut forms = 0;
    let mut unconfirmed = 0;
    for part in parts {
        forms += part.forms;
        unconfirmed += part.unconfirmed;
        hits.extend(part.hits);
    }
    hits.sort_by_key(|h| h.flat_index);
    SearchReport {
        n: cfg.n,
        level: cfg.level,
        exhaustive,
        subspaces_examined: subspaces,
        forms_examined: forms,
        hits,
        unconfirmed,
        partition_index: cfg.partition_index,
        partition_count: cfg.partition_count,
        wall_ms: u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX),
    }
}

/// Exhaustive search over every subspace of F2^n and every form on its
/// coordinates. The report is deterministic apart from `wall_ms`, for any
/// worker count, and partitioned runs cover the stream exactly once.
///
/// # Panics
/// Panics if `n > 6`, the level is out of range, or the partition layout is
/// inconsistent.
#[must_use]
pub fn counterexample_search(cfg: &SearchConfig) -> SearchReport {
    let cfg = *cfg;
    cfg.validate();
    assert!(
        cfg.n <= MAX_EXHAUSTIVE_N,
        "exhaustive search capped at n = 6"
    );
    let started = Instant::now();
    let subspaces: u64 = (0..=cfg.n)
        .map(|k| u64::try_from(subspace_count(cfg.n, k)).expect("count fits"))
        .sum();
    let parts = run_workers(cfg, walk_exhaustive);
    merge(cfg, true, subspaces, parts, started)
}

/// One random instance per sample index, independent of partitioning: the
/// generator is re-seeded per sample from `(seed, index)`.
fn sample_instance(n: usize, seed: u64, index: u64) -> (BitMatrix, QuadraticForm) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let k = rng.gen_range(0..=n.min(SAMPLED_K_CAP));
    let basis = loop {
        let mut m = BitMatrix::zeros(k, n);
        for i in 0..k {
            for j in 0..n {
                m.set(i, j, rng.gen_bool(0.5));
            }
        }
        if m.rank() == k {
            let red = m.rref();
            break BitMatrix::from_rows(red.matrix.rows()[..k].to_vec(), n);
        }
    };
    let mask = if QuadraticForm::coefficient_count(k) == 64 {
        u64::MAX
    } else {
        (1u64 << QuadraticForm::coefficient_count(k)) - 1
    };
    let form = QuadraticForm::from_coefficient_bits(k, rng.gen::<u64>() & mask);
    (basis, form)
}

/// Randomized variant for dimensions beyond exhaustive reach: `samples`
/// random (subspace, form) instances, deterministic in `seed` and
/// partitionable exactly like the exhaustive stream.
///
/// # Panics
/// Panics if `n > 10` or the configuration is inconsistent.
#[must_use]
pub fn sampled_search(cfg: &SearchConfig, samples: u64, seed: u64) -> SearchReport {
    let cfg = *cfg;
    cfg.validate();
    assert!(cfg.n <= MAX_SAMPLED_N, "sampled search capped at n = 10");
    let started = Instant::now();
    let walk = move |cfg: SearchConfig, worker: usize| {
        let stride = cfg.partition_count * cfg.workers as u64;
        let offset = cfg.partition_index + cfg.partition_count * worker as u64;
        let mut out = WorkerOut::default();
        for index in 0..samples {
            if index % stride != offset {
                continue;
            }
            let (basis, form) = sample_instance(cfg.n, seed, index);
            let k = basis.n_rows();
            let points: Vec<BitVec> = (0..1u64 << k)
                .map(|idx| basis.combine_rows(&exponent_bits(idx, k)))
                .collect();
            let values: Vec<bool> = (0..1u64 << k)
                .map(|c| form.evaluate(&exponent_bits(c, k)))
                .collect();
            let outcome = examine(&points, &values, cfg.n, cfg.level);
            record(&mut out, outcome, index, &basis, &form);
        }
        out
    };
    let parts = run_workers(cfg, walk);
    merge(cfg, false, samples, parts, started)
}
