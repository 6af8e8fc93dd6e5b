//! Entropy, mutual information, and the permutation-model correction, all in
//! bits.
//!
//! The correction `m0` is the expected mutual information between `x` and a
//! uniformly random permutation of `y`. Under permutation each cell count is
//! hypergeometric given the marginals, so the expectation is computed exactly
//! as a per-cell sum instead of enumerating permutations. A brute-force
//! permutation oracle ([`oracle_expected_mi`]) is provided to validate that
//! computation independently.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{contingency, ContingencyTable, DataError, Labeling};

/// ln p below this is treated as an underflowed probability; terms that small
/// contribute less than 1e-300 bits and are skipped.
const LN_TINY: f64 = -700.0;

fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// Neumaier-compensated accumulator; long per-cell sums stay reproducible and
/// keep their low-order bits.
#[derive(Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if libm::fabs(self.sum) >= libm::fabs(value) {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Table of `ln k!` for `k <= n`, built once and shared across scorings so
/// repeated correction evaluations cost no log-gamma calls.
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn new(n: u64) -> LnFactorials {
        let mut table = Vec::with_capacity(n as usize + 1);
        for k in 0..=n {
            table.push(libm::lgamma((k + 1) as f64));
        }
        LnFactorials { table }
    }

    pub fn max_n(&self) -> u64 {
        self.table.len() as u64 - 1
    }

    fn ln_factorial(&self, k: u64) -> f64 {
        self.table[k as usize]
    }

    fn ln_choose(&self, n: u64, k: u64) -> f64 {
        debug_assert!(k <= n);
        self.ln_factorial(n) - self.ln_factorial(k) - self.ln_factorial(n - k)
    }
}

/// Shannon entropy in bits of a distribution given as positive counts
/// summing to `n`.
pub fn entropy(counts: &[u64], n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let mut h = 0.0;
    for &c in counts {
        debug_assert!(c > 0, "entropy over counts with empty categories");
        let p = c as f64 / nf;
        h -= p * log2(p);
    }
    h.max(0.0)
}

/// Mutual information of a contingency table, in bits.
pub fn mutual_information(t: &ContingencyTable) -> f64 {
    let nf = t.n() as f64;
    let a = t.row_marginals();
    let b = t.col_marginals();
    let mut acc = Accumulator::default();
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            let c = t.count(i, j);
            if c == 0 {
                continue;
            }
            let cf = c as f64;
            acc.add((cf / nf) * log2(cf * nf / (a[i] as f64 * b[j] as f64)));
        }
    }
    acc.value().max(0.0)
}

/// Mutual information normalized by the target entropy, clamped to `[0, 1]`.
/// Zero when the target is constant.
pub fn fraction_of_information(t: &ContingencyTable) -> f64 {
    let h_y = entropy(t.col_marginals(), t.n());
    if h_y == 0.0 {
        return 0.0;
    }
    (mutual_information(t) / h_y).min(1.0)
}

/// Exact expected mutual information in bits between labelings with the
/// given positive marginals, under a uniformly random permutation of the
/// second one.
///
/// Each cell count is hypergeometric with population `n`, `b[j]` successes
/// and `a[i]` draws. Per cell, the first in-support term is computed in log
/// space from `lnf` and subsequent terms follow by the probability ratio
/// recurrence, so the whole sum costs `O(n * max(|a|, |b|))`. Cells are
/// visited in ascending `(i, j, k)` order with compensated accumulation,
/// which makes the result reproducible bit-for-bit.
pub fn expected_mi_from_marginals(a: &[u64], b: &[u64], n: u64, lnf: &LnFactorials) -> f64 {
    if a.len() <= 1 || b.len() <= 1 {
        return 0.0;
    }
    // Exact identities: when one side is a key (all marginals 1), every
    // permutation yields full information about the other side.
    if a.iter().all(|&c| c == 1) {
        return entropy(b, n);
    }
    if b.iter().all(|&c| c == 1) {
        return entropy(a, n);
    }
    debug_assert!(lnf.max_n() >= n);
    let nf = n as f64;
    let mut acc = Accumulator::default();
    for &ai in a {
        let af = ai as f64;
        for &bj in b {
            let bf = bj as f64;
            let k_max = ai.min(bj);
            // k = 0 contributes nothing, so seeding can start at 1.
            let k_start = (ai + bj).saturating_sub(n).max(1);
            debug_assert!(k_start <= k_max);
            let mut lnp = lnf.ln_choose(bj, k_start) + lnf.ln_choose(n - bj, ai - k_start)
                - lnf.ln_choose(n, ai);
            let mut p = if lnp > LN_TINY {
                Some(libm::exp(lnp))
            } else {
                None
            };
            for k in k_start..=k_max {
                let kf = k as f64;
                if let Some(pv) = p {
                    acc.add(pv * (kf / nf) * log2(kf * nf / (af * bf)));
                }
                if k < k_max {
                    let ratio =
                        ((bf - kf) * (af - kf)) / ((kf + 1.0) * ((n + k + 1 - ai - bj) as f64));
                    match &mut p {
                        Some(pv) => *pv *= ratio,
                        // Still in the underflowed left tail: advance in log
                        // space until the probability becomes representable.
                        None => {
                            lnp += libm::log(ratio);
                            if lnp > LN_TINY {
                                p = Some(libm::exp(lnp));
                            }
                        }
                    }
                }
            }
        }
    }
    acc.value().max(0.0)
}

/// Expected mutual information of the table's marginals under a uniformly
/// random permutation of the target, in bits.
pub fn expected_mi_permutation(t: &ContingencyTable) -> f64 {
    let lnf = LnFactorials::new(t.n());
    expected_mi_from_marginals(t.row_marginals(), t.col_marginals(), t.n(), &lnf)
}

/// Closed-form upper bound on the permutation expectation for an
/// `x_domain x y_domain` table over `n >= 2` rows.
pub fn m0_upper_bound(x_domain: usize, y_domain: usize, n: u64) -> f64 {
    debug_assert!(n >= 2);
    let (af, bf, nf) = (x_domain as f64, y_domain as f64, n as f64);
    log2((nf + af * bf - af - bf) / (nf - 1.0))
}

/// All scores of one candidate against the target, in one pass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreBundle {
    /// Target entropy in bits.
    pub h_y: f64,
    /// Mutual information in bits.
    pub mi: f64,
    /// Fraction of information `mi / h_y`, in `[0, 1]`.
    pub fraction: f64,
    /// Permutation-expected mutual information in bits.
    pub m0: f64,
    /// Expected fraction under permutation `m0 / h_y`, in `[0, 1]`.
    pub b0: f64,
    /// Reliable fraction of information: `fraction - b0`.
    pub f0: f64,
}

impl ScoreBundle {
    const ZERO: ScoreBundle = ScoreBundle {
        h_y: 0.0,
        mi: 0.0,
        fraction: 0.0,
        m0: 0.0,
        b0: 0.0,
        f0: 0.0,
    };
}

/// Scores a table, reusing a shared `ln k!` table.
pub fn score_bundle_with(t: &ContingencyTable, lnf: &LnFactorials) -> ScoreBundle {
    let h_y = entropy(t.col_marginals(), t.n());
    if h_y == 0.0 {
        // Constant target: nothing to explain, all scores are zero.
        return ScoreBundle::ZERO;
    }
    let mi = mutual_information(t);
    let fraction = (mi / h_y).min(1.0);
    let m0 = expected_mi_from_marginals(t.row_marginals(), t.col_marginals(), t.n(), lnf);
    let b0 = (m0 / h_y).min(1.0);
    ScoreBundle {
        h_y,
        mi,
        fraction,
        m0,
        b0,
        f0: fraction - b0,
    }
}

/// Scores a table from scratch.
pub fn score_bundle(t: &ContingencyTable) -> ScoreBundle {
    score_bundle_with(t, &LnFactorials::new(t.n()))
}

/// How [`oracle_expected_mi`] averages over permutations.
#[derive(Clone, Copy, Debug)]
pub enum OracleMode {
    /// Average over all `n!` permutations; limited to `n <= 8`.
    Exact,
    /// Average over a seeded uniform sample of permutations.
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// Exact enumeration was requested for more rows than `n!` allows.
    TooManyRows { rows: usize, max: usize },
    /// A Monte-Carlo average over zero samples was requested.
    ZeroSamples,
    Data(DataError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyRows { rows, max } => {
                write!(f, "exact oracle limited to {max} rows, got {rows}")
            }
            OracleError::ZeroSamples => write!(f, "monte carlo oracle needs at least one sample"),
            OracleError::Data(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for OracleError {}

impl From<DataError> for OracleError {
    fn from(e: DataError) -> Self {
        OracleError::Data(e)
    }
}

const EXACT_ORACLE_MAX_ROWS: usize = 8;

/// Brute-force permutation average of the mutual information, used to
/// validate [`expected_mi_permutation`]. It shares nothing with the
/// hypergeometric computation: every permuted `y` is scored through a fresh
/// contingency table.
pub fn oracle_expected_mi(
    x: &Labeling,
    y: &Labeling,
    mode: OracleMode,
) -> Result<f64, OracleError> {
    match mode {
        OracleMode::Exact => {
            let n = y.len();
            if n > EXACT_ORACLE_MAX_ROWS {
                return Err(OracleError::TooManyRows {
                    rows: n,
                    max: EXACT_ORACLE_MAX_ROWS,
                });
            }
            let mut codes = y.codes().to_vec();
            let mut acc = Accumulator::default();
            let mut count = 0u64;
            let mut score = |codes: &[u32]| -> Result<(), OracleError> {
                let perm = Labeling::from_codes(codes.to_vec()).expect("permuted codes stay dense");
                acc.add(mutual_information(&contingency(x, &perm)?));
                count += 1;
                Ok(())
            };
            // Heap's algorithm over the code vector; permutations that move
            // equal codes repeat a table, which is exactly how the average
            // over all n! permutations is defined.
            score(&codes)?;
            let mut c = vec![0usize; n];
            let mut i = 0;
            while i < n {
                if c[i] < i {
                    if i % 2 == 0 {
                        codes.swap(0, i);
                    } else {
                        codes.swap(c[i], i);
                    }
                    score(&codes)?;
                    c[i] += 1;
                    i = 0;
                } else {
                    c[i] = 0;
                    i += 1;
                }
            }
            Ok(acc.value() / count as f64)
        }
        OracleMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(OracleError::ZeroSamples);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut codes = y.codes().to_vec();
            let mut acc = Accumulator::default();
            for _ in 0..samples {
                codes.shuffle(&mut rng);
                let perm = Labeling::from_codes(codes.clone()).expect("permuted codes stay dense");
                acc.add(mutual_information(&contingency(x, &perm)?));
            }
            Ok(acc.value() / samples as f64)
        }
    }
}
