//! Std companion to `relfd-core`: CSV ingestion, wall clocks, thread pools,
//! the benchmark harness, the dependency-by-chance simulation, and writers
//! for the set-cover reduction datasets.

pub mod bench;
pub mod figure;
pub mod load;
pub mod pool;
pub mod redgen;
pub mod report;
