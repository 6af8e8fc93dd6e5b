//! Wall clock and scoring pool implementations for the search entry points.

use std::time::Instant;

use relfd_core::search::{Clock, ScorePool};

/// Clock counting seconds since construction.
pub struct InstantClock(Instant);

impl InstantClock {
    pub fn start() -> InstantClock {
        InstantClock(Instant::now())
    }
}

impl Clock for InstantClock {
    fn elapsed(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// Scoring pool that either stays on the calling thread or fans out over a
/// fixed-size thread pool. Results always come back in job order.
pub enum CliPool {
    Sequential,
    Threaded(rayon::ThreadPool),
}

impl ScorePool for CliPool {
    fn map<T: Send>(&self, jobs: usize, eval: &(dyn Fn(usize) -> T + Sync)) -> Vec<T> {
        match self {
            CliPool::Sequential => (0..jobs).map(eval).collect(),
            CliPool::Threaded(pool) => pool.install(|| {
                use rayon::prelude::*;
                (0..jobs).into_par_iter().map(|i| eval(i)).collect()
            }),
        }
    }
}

/// Builds the pool selected by `RELFD_THREADS`: unset or `1` runs
/// sequentially, larger integers build a pool of that size, anything else
/// warns and falls back to sequential.
pub fn pool_from_env() -> CliPool {
    let value = match std::env::var("RELFD_THREADS") {
        Err(_) => return CliPool::Sequential,
        Ok(v) => v,
    };
    match value.trim().parse::<usize>() {
        Ok(1) => CliPool::Sequential,
        Ok(t) if t >= 2 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => CliPool::Threaded(pool),
            Err(e) => {
                eprintln!("warning: could not build a {t}-thread pool ({e}); running sequentially");
                CliPool::Sequential
            }
        },
        _ => {
            eprintln!(
                "warning: RELFD_THREADS={value:?} is not a thread count; running sequentially"
            );
            CliPool::Sequential
        }
    }
}
