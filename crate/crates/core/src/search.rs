//! Searches over column subsets maximizing the reliable fraction of
//! information: best-first branch-and-bound (`opus`), greedy ascent
//! (`greedy`), and exhaustive enumeration (`exhaustive`).
//!
//! All three are deterministic: identical inputs and configuration produce
//! identical results except for `wall_time`. Ties between equally scoring
//! candidates always go to the smaller set, then the lexicographically
//! smallest column index sequence.

use alloc::collections::BinaryHeap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::bounds::{f_mon_from_bundle, f_spc_with, prunes, BoundKind, SCORE_TOLERANCE};
use crate::data::{contingency, joint_labeling, ContingencyTable, Dataset, Labeling};
use crate::info::{entropy, score_bundle, score_bundle_with, LnFactorials, ScoreBundle};

/// Monotonic elapsed-seconds source for time budgets and wall-time
/// reporting. The core crate has no clock of its own; std callers pass one
/// backed by a real timer.
pub trait Clock {
    fn elapsed(&self) -> f64;
}

/// Clock that always reads zero: time budgets never trigger and reported
/// wall times are zero.
pub struct NullClock;

impl Clock for NullClock {
    fn elapsed(&self) -> f64 {
        0.0
    }
}

/// Evaluates a batch of independent scoring jobs. Implementations may run
/// jobs in any order or in parallel, but results come back in job order, so
/// search outcomes never depend on the pool.
pub trait ScorePool: Sync {
    fn map<T: Send>(&self, jobs: usize, eval: &(dyn Fn(usize) -> T + Sync)) -> Vec<T>;
}

/// Runs every job on the calling thread.
pub struct SequentialPool;

impl ScorePool for SequentialPool {
    fn map<T: Send>(&self, jobs: usize, eval: &(dyn Fn(usize) -> T + Sync)) -> Vec<T> {
        (0..jobs).map(eval).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Approximation factor in `(0, 1]`; at 1 the search is exact.
    pub alpha: f64,
    pub bound: BoundKind,
    /// Stop once this many candidates have been scored.
    pub node_budget: Option<u64>,
    /// Stop once the clock reads past this many seconds.
    pub time_budget: Option<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            alpha: 1.0,
            bound: BoundKind::Staged,
            node_budget: None,
            time_budget: None,
        }
    }
}

/// One frontier entry of the best-first search: a candidate set plus the
/// columns it may still absorb.
#[derive(Clone, Debug)]
pub struct SearchNode {
    pub candidate: Vec<usize>,
    pub augmentations: Vec<usize>,
    /// Admissible bound on every superset's score; queue priority.
    pub bound: f64,
    /// The candidate's own reliable fraction.
    pub score: f64,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct DiscoveryResult {
    /// Names of the best column set, ordered by column index.
    pub best_set: Vec<String>,
    /// Reliable fraction of `best_set`, recomputed from scratch at the end.
    pub f0: f64,
    /// Number of candidate sets scored.
    pub nodes_explored: u64,
    /// Seconds reported by the clock; zero under [`NullClock`].
    pub wall_time: f64,
    /// True when a node or time budget cut the search short.
    pub terminated_early: bool,
    pub method: &'static str,
    pub config: SearchConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchError {
    /// `alpha` outside `(0, 1]`.
    InvalidAlpha(f64),
    /// Exhaustive enumeration over more columns than the guard allows.
    TooManyColumns { got: usize, max: usize },
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::InvalidAlpha(a) => write!(f, "alpha must be in (0, 1], got {a}"),
            SearchError::TooManyColumns { got, max } => {
                write!(f, "exhaustive search limited to {max} columns, got {got}")
            }
        }
    }
}

impl core::error::Error for SearchError {}

const EXHAUSTIVE_MAX_COLUMNS: usize = 20;

/// Queue wrapper ordering nodes by smallest depth, then highest bound, then
/// lexicographically smallest candidate.
struct HeapEntry(SearchNode);

impl HeapEntry {
    fn key_cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .depth
            .cmp(&self.0.depth)
            .then_with(|| self.0.bound.total_cmp(&other.0.bound))
            .then_with(|| other.0.candidate.cmp(&self.0.candidate))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key_cmp(other)
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

/// Best candidate seen so far. Scores within [`SCORE_TOLERANCE`] count as
/// ties and go to the smaller set, then the lexicographically smaller one.
struct Incumbent {
    set: Vec<usize>,
    score: f64,
}

impl Incumbent {
    fn empty() -> Incumbent {
        Incumbent {
            set: Vec::new(),
            score: 0.0,
        }
    }

    fn offer(&mut self, set: &[usize], score: f64) {
        let better = if score > self.score + SCORE_TOLERANCE {
            true
        } else if score >= self.score - SCORE_TOLERANCE {
            set.len() < self.set.len() || (set.len() == self.set.len() && set < &self.set[..])
        } else {
            false
        };
        if better {
            self.set = set.to_vec();
            self.score = score;
        }
    }
}

/// Shared scoring state: the target, its entropy, and the `ln k!` table are
/// computed once per search.
struct Evaluator<'a> {
    data: &'a Dataset,
    lnf: LnFactorials,
    h_y: f64,
}

impl<'a> Evaluator<'a> {
    fn new(data: &'a Dataset) -> Evaluator<'a> {
        let n = data.n_rows() as u64;
        Evaluator {
            data,
            lnf: LnFactorials::new(n),
            h_y: entropy(&data.target().counts(), n),
        }
    }

    fn table_of(&self, x: &Labeling) -> ContingencyTable {
        contingency(x, self.data.target()).expect("dataset columns are aligned")
    }

    fn bundle_of(&self, x: &Labeling) -> ScoreBundle {
        score_bundle_with(&self.table_of(x), &self.lnf)
    }

    fn extend(&self, base: &Labeling, column: usize) -> Labeling {
        joint_labeling(&[base, self.data.column(column)]).expect("dataset columns are aligned")
    }

    /// True when the bound of `x` still allows improving on the incumbent.
    fn can_improve(&self, x: &Labeling, kind: BoundKind, alpha: f64, incumbent: f64) -> bool {
        let t = self.table_of(x);
        match kind {
            BoundKind::Mon => {
                !prunes(f_mon_from_bundle(&score_bundle_with(&t, &self.lnf)), alpha, incumbent)
            }
            BoundKind::Spc => !prunes(f_spc_with(&t, &self.lnf), alpha, incumbent),
            BoundKind::Staged => {
                !prunes(f_mon_from_bundle(&score_bundle_with(&t, &self.lnf)), alpha, incumbent)
                    && !prunes(f_spc_with(&t, &self.lnf), alpha, incumbent)
            }
        }
    }
}

fn child_set(parent: &[usize], column: usize) -> Vec<usize> {
    let mut set = parent.to_vec();
    let pos = set.partition_point(|&c| c < column);
    set.insert(pos, column);
    set
}

fn over_budget(config: &SearchConfig, nodes: u64, clock: &dyn Clock) -> bool {
    if config.node_budget.is_some_and(|nb| nodes >= nb) {
        return true;
    }
    config.time_budget.is_some_and(|tb| clock.elapsed() > tb)
}

fn finish(
    data: &Dataset,
    incumbent: Incumbent,
    nodes: u64,
    early: bool,
    method: &'static str,
    config: SearchConfig,
    clock: &dyn Clock,
) -> DiscoveryResult {
    let t = contingency(&data.joint_of(&incumbent.set), data.target())
        .expect("dataset columns are aligned");
    DiscoveryResult {
        best_set: incumbent
            .set
            .iter()
            .map(|&c| String::from(data.column_name(c)))
            .collect(),
        f0: score_bundle(&t).f0,
        nodes_explored: nodes,
        wall_time: clock.elapsed(),
        terminated_early: early,
        method,
        config,
    }
}

struct RefEval {
    f0: f64,
    f_mon: f64,
    f_spc: Option<f64>,
}

/// Best-first branch-and-bound search for the column set maximizing the
/// reliable fraction of information.
///
/// Guarantees a score of at least `alpha` times the optimum when it runs to
/// completion. Each popped node scores all its refinements, updates the
/// incumbent, prunes refinements whose scaled bound cannot beat it, sorts the
/// survivors by decreasing bound, and hands each survivor the augmentations
/// of the survivors sorted after it.
pub fn opus_with<P: ScorePool>(
    data: &Dataset,
    config: &SearchConfig,
    pool: &P,
    clock: &dyn Clock,
) -> Result<DiscoveryResult, SearchError> {
    if !(config.alpha > 0.0 && config.alpha <= 1.0) {
        return Err(SearchError::InvalidAlpha(config.alpha));
    }
    let ev = Evaluator::new(data);
    let mut incumbent = Incumbent::empty();
    let mut nodes: u64 = 0;
    let mut early = false;
    let mut queue: BinaryHeap<HeapEntry> = BinaryHeap::new();
    // A constant target has nothing to explain; the empty set wins outright.
    if ev.h_y > 0.0 && data.n_columns() > 0 {
        queue.push(HeapEntry(SearchNode {
            candidate: Vec::new(),
            augmentations: (0..data.n_columns()).collect(),
            bound: 1.0,
            score: 0.0,
            depth: 0,
        }));
    }
    while let Some(HeapEntry(node)) = queue.pop() {
        if over_budget(config, nodes, clock) {
            early = true;
            break;
        }
        let parent_joint = data.joint_of(&node.candidate);
        let augs = &node.augmentations;
        let kind = config.bound;
        let evals: Vec<RefEval> = pool.map(augs.len(), &|i| {
            let t = ev.table_of(&ev.extend(&parent_joint, augs[i]));
            let bundle = score_bundle_with(&t, &ev.lnf);
            RefEval {
                f0: bundle.f0,
                f_mon: f_mon_from_bundle(&bundle),
                f_spc: match kind {
                    BoundKind::Spc => Some(f_spc_with(&t, &ev.lnf)),
                    _ => None,
                },
            }
        });
        nodes += evals.len() as u64;
        for (i, e) in evals.iter().enumerate() {
            incumbent.offer(&child_set(&node.candidate, augs[i]), e.f0);
        }
        // Bound every refinement against the updated incumbent. Staged mode
        // computes the tight bound only where the cheap one fails to prune.
        let bound_vals: Vec<f64> = match kind {
            BoundKind::Mon => evals.iter().map(|e| e.f_mon).collect(),
            BoundKind::Spc => evals.iter().map(|e| e.f_spc.unwrap()).collect(),
            BoundKind::Staged => {
                let mut vals: Vec<f64> = evals.iter().map(|e| e.f_mon).collect();
                let needy: Vec<usize> = (0..evals.len())
                    .filter(|&i| !prunes(evals[i].f_mon, config.alpha, incumbent.score))
                    .collect();
                let spc: Vec<f64> = pool.map(needy.len(), &|k| {
                    let t = ev.table_of(&ev.extend(&parent_joint, augs[needy[k]]));
                    f_spc_with(&t, &ev.lnf)
                });
                for (k, &i) in needy.iter().enumerate() {
                    vals[i] = spc[k];
                }
                vals
            }
        };
        struct Survivor {
            column: usize,
            set: Vec<usize>,
            bound: f64,
            score: f64,
        }
        let mut survivors: Vec<Survivor> = Vec::new();
        for (i, e) in evals.iter().enumerate() {
            if !prunes(bound_vals[i], config.alpha, incumbent.score) {
                survivors.push(Survivor {
                    column: augs[i],
                    set: child_set(&node.candidate, augs[i]),
                    bound: bound_vals[i],
                    score: e.f0,
                });
            }
        }
        survivors.sort_by(|a, b| b.bound.total_cmp(&a.bound));
        for pos in 0..survivors.len() {
            let augmentations: Vec<usize> =
                survivors[pos + 1..].iter().map(|s| s.column).collect();
            if augmentations.is_empty() {
                continue;
            }
            queue.push(HeapEntry(SearchNode {
                candidate: survivors[pos].set.clone(),
                augmentations,
                bound: survivors[pos].bound,
                score: survivors[pos].score,
                depth: node.depth + 1,
            }));
        }
    }
    Ok(finish(data, incumbent, nodes, early, "opus", config.clone(), clock))
}

/// [`opus_with`] on the calling thread without a clock.
pub fn opus(data: &Dataset, config: &SearchConfig) -> Result<DiscoveryResult, SearchError> {
    opus_with(data, config, &SequentialPool, &NullClock)
}

/// Greedy ascent: grow the best single-column extension until no columns
/// remain or, with `use_bound`, until the bound of the grown base proves no
/// extension can beat the incumbent. With and without the early stop the
/// best set is identical; only the work differs.
pub fn greedy_with<P: ScorePool>(
    data: &Dataset,
    use_bound: bool,
    bound: BoundKind,
    pool: &P,
    clock: &dyn Clock,
) -> DiscoveryResult {
    let ev = Evaluator::new(data);
    let mut incumbent = Incumbent::empty();
    let mut nodes: u64 = 0;
    let mut base: Vec<usize> = Vec::new();
    let mut base_joint = Labeling::constant(data.n_rows());
    if ev.h_y > 0.0 {
        loop {
            let rem: Vec<usize> = (0..data.n_columns())
                .filter(|c| !base.contains(c))
                .collect();
            if rem.is_empty() {
                break;
            }
            if use_bound && !ev.can_improve(&base_joint, bound, 1.0, incumbent.score) {
                break;
            }
            let scores: Vec<f64> = pool.map(rem.len(), &|i| {
                ev.bundle_of(&ev.extend(&base_joint, rem[i])).f0
            });
            nodes += scores.len() as u64;
            let mut best = 0;
            let mut best_set = child_set(&base, rem[0]);
            for i in 1..rem.len() {
                let set = child_set(&base, rem[i]);
                if scores[i] > scores[best] + SCORE_TOLERANCE
                    || (scores[i] >= scores[best] - SCORE_TOLERANCE && set < best_set)
                {
                    best = i;
                    best_set = set;
                }
            }
            base_joint = ev.extend(&base_joint, rem[best]);
            base = best_set;
            incumbent.offer(&base, scores[best]);
        }
    }
    let config = SearchConfig {
        alpha: 1.0,
        bound,
        node_budget: None,
        time_budget: None,
    };
    let method = if use_bound { "greedy" } else { "greedy-unbounded" };
    finish(data, incumbent, nodes, false, method, config, clock)
}

/// [`greedy_with`] on the calling thread without a clock.
pub fn greedy(data: &Dataset, use_bound: bool, bound: BoundKind) -> DiscoveryResult {
    greedy_with(data, use_bound, bound, &SequentialPool, &NullClock)
}

/// Scores every one of the `2^d` column subsets. Reference implementation
/// for small `d`; guarded at `d <= 20`.
pub fn exhaustive_with<P: ScorePool>(
    data: &Dataset,
    pool: &P,
    clock: &dyn Clock,
) -> Result<DiscoveryResult, SearchError> {
    let d = data.n_columns();
    if d > EXHAUSTIVE_MAX_COLUMNS {
        return Err(SearchError::TooManyColumns {
            got: d,
            max: EXHAUSTIVE_MAX_COLUMNS,
        });
    }
    let ev = Evaluator::new(data);
    let mut incumbent = Incumbent::empty();
    let mut nodes: u64 = 0;
    if ev.h_y > 0.0 {
        let subset = |mask: usize| -> Vec<usize> { (0..d).filter(|&c| mask >> c & 1 == 1).collect() };
        let total: usize = 1 << d;
        let scores: Vec<f64> = pool.map(total, &|mask| {
            ev.bundle_of(&ev.data.joint_of(&subset(mask))).f0
        });
        nodes = total as u64;
        for (mask, &f0) in scores.iter().enumerate() {
            incumbent.offer(&subset(mask), f0);
        }
    }
    Ok(finish(
        data,
        incumbent,
        nodes,
        false,
        "exhaustive",
        SearchConfig::default(),
        clock,
    ))
}

/// [`exhaustive_with`] on the calling thread without a clock.
pub fn exhaustive(data: &Dataset) -> Result<DiscoveryResult, SearchError> {
    exhaustive_with(data, &SequentialPool, &NullClock)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    /// Target takes values 0..8; three columns carry one bit of it each and
    /// a fourth is pure noise against it.
    fn three_bit_dataset() -> Dataset {
        let n = 40;
        let y: Vec<u32> = (0..n).map(|i| (i % 8) as u32).collect();
        let bit = |b: u32| -> Labeling {
            Labeling::from_codes(y.iter().map(|v| v >> b & 1).collect()).unwrap()
        };
        let noise = Labeling::from_codes((0..n).map(|i| (i / 20) as u32).collect()).unwrap();
        Dataset::new(
            vec!["b0".into(), "b1".into(), "b2".into(), "noise".into()],
            vec![bit(0), bit(1), bit(2), noise],
            "y".into(),
            Labeling::from_codes(y).unwrap(),
        )
        .unwrap()
    }

    fn names(r: &DiscoveryResult) -> Vec<&str> {
        r.best_set.iter().map(|s| s.as_str()).collect()
    }

    #[test]
    fn opus_recovers_the_explaining_bits() {
        let data = three_bit_dataset();
        let r = opus(&data, &SearchConfig::default()).unwrap();
        assert_eq!(names(&r), ["b0", "b1", "b2"]);
        assert!(r.f0 > 0.6);
        assert!(!r.terminated_early);
    }

    #[test]
    fn all_methods_agree_on_the_three_bit_dataset() {
        let data = three_bit_dataset();
        let exact = exhaustive(&data).unwrap();
        assert_eq!(exact.nodes_explored, 16);
        for bound in [BoundKind::Mon, BoundKind::Spc, BoundKind::Staged] {
            let cfg = SearchConfig {
                bound,
                ..SearchConfig::default()
            };
            let r = opus(&data, &cfg).unwrap();
            assert_eq!(r.best_set, exact.best_set);
            assert!((r.f0 - exact.f0).abs() <= SCORE_TOLERANCE);
        }
        let g = greedy(&data, true, BoundKind::Staged);
        assert_eq!(g.best_set, exact.best_set);
    }

    #[test]
    fn ties_prefer_smaller_then_lexicographic_sets() {
        // Two identical copies of a column that explains the target exactly.
        let y = vec![0u32, 0, 1, 1, 2, 2];
        let col = Labeling::from_codes(y.clone()).unwrap();
        let data = Dataset::new(
            vec!["left".into(), "right".into()],
            vec![col.clone(), col],
            "y".into(),
            Labeling::from_codes(y).unwrap(),
        )
        .unwrap();
        let r = opus(&data, &SearchConfig::default()).unwrap();
        assert_eq!(names(&r), ["left"]);
        let e = exhaustive(&data).unwrap();
        assert_eq!(names(&e), ["left"]);
    }

    #[test]
    fn constant_target_returns_the_empty_set() {
        let col = Labeling::from_codes(vec![0, 1, 0, 1]).unwrap();
        let data = Dataset::new(
            vec!["a".into()],
            vec![col],
            "y".into(),
            Labeling::constant(4),
        )
        .unwrap();
        let r = opus(&data, &SearchConfig::default()).unwrap();
        assert!(r.best_set.is_empty());
        assert_eq!(r.f0, 0.0);
        assert_eq!(r.nodes_explored, 0);
        let e = exhaustive(&data).unwrap();
        assert!(e.best_set.is_empty());
        assert_eq!(e.nodes_explored, 0);
    }

    #[test]
    fn node_budget_cuts_the_search_short() {
        let data = three_bit_dataset();
        let cfg = SearchConfig {
            node_budget: Some(4),
            ..SearchConfig::default()
        };
        let r = opus(&data, &cfg).unwrap();
        assert!(r.terminated_early);
        assert_eq!(r.nodes_explored, 4);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let data = three_bit_dataset();
        let cfg = SearchConfig {
            alpha: 0.0,
            ..SearchConfig::default()
        };
        assert!(matches!(
            opus(&data, &cfg),
            Err(SearchError::InvalidAlpha(a)) if a == 0.0
        ));
        let wide = Dataset::new(
            (0..21).map(|i| i.to_string()).collect(),
            (0..21).map(|_| Labeling::constant(2)).collect(),
            "y".into(),
            Labeling::from_codes(vec![0, 1]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            exhaustive(&wide),
            Err(SearchError::TooManyColumns { got: 21, max: 20 })
        ));
    }

    #[test]
    fn greedy_early_stop_changes_work_not_the_answer() {
        let data = three_bit_dataset();
        let with_bound = greedy(&data, true, BoundKind::Staged);
        let without = greedy(&data, false, BoundKind::Staged);
        assert_eq!(with_bound.best_set, without.best_set);
        assert!(with_bound.nodes_explored <= without.nodes_explored);
        assert_eq!(with_bound.method, "greedy");
        assert_eq!(without.method, "greedy-unbounded");
    }

    #[test]
    fn searches_are_deterministic() {
        let data = three_bit_dataset();
        let cfg = SearchConfig::default();
        let a = opus(&data, &cfg).unwrap();
        let b = opus(&data, &cfg).unwrap();
        assert_eq!(a.best_set, b.best_set);
        assert_eq!(a.f0, b.f0);
        assert_eq!(a.nodes_explored, b.nodes_explored);
    }
}
