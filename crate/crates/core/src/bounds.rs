//! Admissible upper bounds on the reliable fraction of information.
//!
//! Both bounds dominate the score of every superset of the candidate, so a
//! branch-and-bound search can discard a candidate's whole refinement subtree
//! when `alpha * bound` fails to beat the incumbent.

use crate::data::ContingencyTable;
use crate::info::{entropy, expected_mi_from_marginals, LnFactorials, ScoreBundle};

/// Tolerance for incumbent comparisons: a bound must beat the incumbent by
/// more than this to keep a branch alive, and scores within it are ties.
pub const SCORE_TOLERANCE: f64 = 1e-12;

/// Which admissible bound a search uses for pruning.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Cheap bound from the candidate's own correction.
    Mon,
    /// Tight bound from the candidate joined with the target.
    Spc,
    /// Check `Mon` first and compute `Spc` only when `Mon` fails to prune.
    Staged,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Mon => "mon",
            BoundKind::Spc => "spc",
            BoundKind::Staged => "staged",
        }
    }
}

fn clamp01(v: f64) -> f64 {
    v.max(0.0).min(1.0)
}

/// Cheap superset bound: the fraction can only grow toward 1 while the
/// correction never shrinks below the candidate's, so `1 - b0` caps every
/// superset's score. Zero when the target is constant.
pub fn f_mon(t: &ContingencyTable) -> f64 {
    f_mon_with(t, &LnFactorials::new(t.n()))
}

pub fn f_mon_with(t: &ContingencyTable, lnf: &LnFactorials) -> f64 {
    let h_y = entropy(t.col_marginals(), t.n());
    if h_y == 0.0 {
        return 0.0;
    }
    let m0 = expected_mi_from_marginals(t.row_marginals(), t.col_marginals(), t.n(), lnf);
    clamp01(1.0 - m0 / h_y)
}

/// The cheap bound read off an already-computed score bundle.
pub fn f_mon_from_bundle(s: &ScoreBundle) -> f64 {
    if s.h_y == 0.0 {
        return 0.0;
    }
    clamp01(1.0 - s.b0)
}

/// Tight superset bound: the score of any superset is at most the score of
/// the candidate joined with the target, which explains the target fully and
/// scores `1 - b0(joined)`. Zero when the target is constant.
pub fn f_spc(t: &ContingencyTable) -> f64 {
    f_spc_with(t, &LnFactorials::new(t.n()))
}

pub fn f_spc_with(t: &ContingencyTable, lnf: &LnFactorials) -> f64 {
    let h_y = entropy(t.col_marginals(), t.n());
    if h_y == 0.0 {
        return 0.0;
    }
    // The marginals of the candidate joined with the target are exactly the
    // table's non-zero cells, so the join is never materialized.
    let joined = t.nonzero_counts();
    let m0 = expected_mi_from_marginals(&joined, t.col_marginals(), t.n(), lnf);
    clamp01(1.0 - m0 / h_y)
}

/// True when `alpha * bound` fails to strictly beat the incumbent score.
pub fn prunes(bound: f64, alpha: f64, incumbent: f64) -> bool {
    alpha * bound <= incumbent + SCORE_TOLERANCE
}

/// Staged pruning check: tries the cheap bound first and computes the tight
/// one only when the cheap bound fails to prune.
pub fn staged_bound_prunes(t: &ContingencyTable, alpha: f64, incumbent: f64) -> bool {
    let lnf = LnFactorials::new(t.n());
    if prunes(f_mon_with(t, &lnf), alpha, incumbent) {
        return true;
    }
    prunes(f_spc_with(t, &lnf), alpha, incumbent)
}

/// Slack between the two bounds, `f_mon - f_spc`; never negative.
pub fn delta_gap(t: &ContingencyTable) -> f64 {
    let lnf = LnFactorials::new(t.n());
    f_mon_with(t, &lnf) - f_spc_with(t, &lnf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{contingency, joint_labeling, Labeling};
    use crate::info::score_bundle;

    fn table(x_codes: Vec<u32>, y_codes: Vec<u32>) -> ContingencyTable {
        let x = Labeling::from_codes(x_codes).unwrap();
        let y = Labeling::from_codes(y_codes).unwrap();
        contingency(&x, &y).unwrap()
    }

    /// 4l rows: x alternates between two values, the target pairs
    /// consecutive rows. Joining x with the target yields a key, so the
    /// tight bound collapses to zero while the cheap bound stays near one.
    fn alternating_pairs(l: usize) -> ContingencyTable {
        let n = 4 * l;
        let x: Vec<u32> = (0..n).map(|i| (i % 2) as u32).collect();
        let y: Vec<u32> = (0..n).map(|i| (i / 2) as u32).collect();
        table(x, y)
    }

    #[test]
    fn constant_candidate_has_full_cheap_bound() {
        let t = table(vec![0, 0, 0, 0], vec![0, 1, 0, 1]);
        assert_eq!(f_mon(&t), 1.0);
        assert!((f_spc(&t) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn key_candidate_collapses_both_bounds_to_zero() {
        let t = table(vec![0, 1, 2, 3], vec![0, 0, 1, 1]);
        assert_eq!(f_mon(&t), 0.0);
        assert_eq!(f_spc(&t), 0.0);
    }

    #[test]
    fn constant_target_zeroes_both_bounds() {
        let t = table(vec![0, 1, 0, 1], vec![0, 0, 0, 0]);
        assert_eq!(f_mon(&t), 0.0);
        assert_eq!(f_spc(&t), 0.0);
        assert_eq!(delta_gap(&t), 0.0);
    }

    #[test]
    fn tight_bound_never_exceeds_cheap_bound() {
        for l in [1, 2, 3, 5] {
            let t = alternating_pairs(l);
            assert!(delta_gap(&t) >= 0.0);
        }
    }

    #[test]
    fn alternating_pairs_separate_the_bounds() {
        for l in [2usize, 4, 8, 16] {
            let t = alternating_pairs(l);
            assert_eq!(f_spc(&t), 0.0);
            let want = 1.0 - 1.0 / ((2 * l) as f64).log2();
            assert!(delta_gap(&t) >= want);
        }
    }

    #[test]
    fn tight_bound_matches_explicit_join_with_target() {
        let x = Labeling::from_codes(vec![0, 0, 1, 1, 2, 2, 0, 1]).unwrap();
        let y = Labeling::from_codes(vec![0, 1, 0, 0, 1, 1, 0, 1]).unwrap();
        let t = contingency(&x, &y).unwrap();
        let joined = joint_labeling(&[&x, &y]).unwrap();
        let t_plus = contingency(&joined, &y).unwrap();
        let explicit = score_bundle(&t_plus).f0;
        assert!((f_spc(&t) - explicit).abs() < 1e-12);
    }

    #[test]
    fn staged_pruning_follows_the_incumbent() {
        let t = table(vec![0, 0, 0, 0], vec![0, 1, 0, 1]);
        assert!(!staged_bound_prunes(&t, 1.0, 0.0));
        assert!(staged_bound_prunes(&t, 1.0, 1.0));
        let key = table(vec![0, 1, 2, 3], vec![0, 0, 1, 1]);
        assert!(staged_bound_prunes(&key, 1.0, 0.0));
    }
}
