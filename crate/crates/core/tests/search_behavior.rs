//! Cross-checks of the three search strategies on seeded random datasets.

use relfd_core::bounds::{BoundKind, SCORE_TOLERANCE};
use relfd_core::search::{exhaustive, greedy, opus, SearchConfig};
use relfd_core::synth::random_dataset;

fn sweep() -> impl Iterator<Item = relfd_core::Dataset> {
    (0..30u64).map(|seed| {
        let rows = 10 + (seed as usize * 7) % 31;
        let cols = 2 + (seed as usize) % 5;
        random_dataset(rows, cols, 4, 1000 + seed)
    })
}

#[test]
fn branch_and_bound_matches_exhaustive_search() {
    for (i, data) in sweep().enumerate() {
        let exact = exhaustive(&data).unwrap();
        for bound in [BoundKind::Mon, BoundKind::Spc, BoundKind::Staged] {
            let cfg = SearchConfig {
                bound,
                ..SearchConfig::default()
            };
            let r = opus(&data, &cfg).unwrap();
            assert!(
                (r.f0 - exact.f0).abs() <= SCORE_TOLERANCE,
                "seed {i} bound {bound:?}: {} vs exhaustive {}",
                r.f0,
                exact.f0
            );
            assert_eq!(r.best_set, exact.best_set, "seed {i} bound {bound:?}");
            assert!(!r.terminated_early);
        }
    }
}

#[test]
fn tighter_bounds_never_explore_more() {
    for (i, data) in sweep().enumerate() {
        let run = |bound| {
            let cfg = SearchConfig {
                bound,
                ..SearchConfig::default()
            };
            opus(&data, &cfg).unwrap().nodes_explored
        };
        let mon = run(BoundKind::Mon);
        let spc = run(BoundKind::Spc);
        let staged = run(BoundKind::Staged);
        assert!(spc <= mon, "seed {i}: tight bound explored {spc} > loose {mon}");
        assert_eq!(staged, spc, "seed {i}: staged and tight disagree on work");
    }
}

#[test]
fn approximation_factor_is_honored() {
    for (i, data) in sweep().enumerate() {
        let optimum = exhaustive(&data).unwrap().f0;
        for alpha in [0.5, 0.8] {
            let cfg = SearchConfig {
                alpha,
                ..SearchConfig::default()
            };
            let r = opus(&data, &cfg).unwrap();
            assert!(
                r.f0 >= alpha * optimum - SCORE_TOLERANCE,
                "seed {i} alpha {alpha}: {} below {} of optimum {}",
                r.f0,
                alpha,
                optimum
            );
        }
    }
}

#[test]
fn greedy_is_sound_and_the_early_stop_is_free() {
    let mut hits = 0;
    let mut total = 0;
    for (i, data) in sweep().enumerate() {
        let optimum = exhaustive(&data).unwrap().f0;
        let bounded = greedy(&data, true, BoundKind::Staged);
        let unbounded = greedy(&data, false, BoundKind::Staged);
        assert!(
            bounded.f0 <= optimum + SCORE_TOLERANCE,
            "seed {i}: greedy {} beat the optimum {}",
            bounded.f0,
            optimum
        );
        assert_eq!(bounded.best_set, unbounded.best_set, "seed {i}");
        assert!(bounded.nodes_explored <= unbounded.nodes_explored, "seed {i}");
        total += 1;
        if (bounded.f0 - optimum).abs() <= SCORE_TOLERANCE {
            hits += 1;
        }
    }
    assert!(
        hits * 2 >= total,
        "greedy matched the optimum on only {hits}/{total} datasets"
    );
}

#[test]
fn budgets_cut_the_search_short() {
    let data = random_dataset(30, 6, 4, 77);
    let zero = SearchConfig {
        node_budget: Some(0),
        ..SearchConfig::default()
    };
    let r = opus(&data, &zero).unwrap();
    assert!(r.terminated_early);
    assert_eq!(r.nodes_explored, 0);
    assert!(r.best_set.is_empty());

    let small = SearchConfig {
        node_budget: Some(6),
        ..SearchConfig::default()
    };
    let r = opus(&data, &small).unwrap();
    assert!(r.nodes_explored >= 6);
    let full = opus(&data, &SearchConfig::default()).unwrap();
    assert!(r.nodes_explored < full.nodes_explored);
}

#[test]
fn repeated_runs_are_identical() {
    for (i, data) in sweep().enumerate().take(5) {
        let cfg = SearchConfig::default();
        let a = opus(&data, &cfg).unwrap();
        let b = opus(&data, &cfg).unwrap();
        assert_eq!(a.best_set, b.best_set, "seed {i}");
        assert_eq!(a.f0.to_bits(), b.f0.to_bits(), "seed {i}");
        assert_eq!(a.nodes_explored, b.nodes_explored, "seed {i}");
    }
}
