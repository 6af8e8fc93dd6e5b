//! Discovery of approximate functional dependencies `X -> Y` in categorical
//! data, scored by the reliable fraction of information: the fraction of the
//! target's entropy explained by `X`, minus the fraction a random permutation
//! of the target would explain by chance.
//!
//! The crate is `no_std` (alloc required). Everything here is pure
//! computation; file formats, timing, and the command-line front end live in
//! the companion `relfd-cli` crate.
//!
//! Modules:
//!
//! * [`data`] — dense categorical labelings, datasets, contingency tables,
//!   equal-frequency discretization.
//! * [`info`] — entropy, mutual information, and the permutation-model
//!   expected mutual information that powers the reliability correction.
//! * [`bounds`] — admissible upper bounds for branch-and-bound pruning.
//! * [`search`] — OPUS best-first search, greedy ascent, and exhaustive
//!   enumeration over column subsets.
//! * [`reduction`] — set-cover instances embedded as datasets, used to probe
//!   worst-case behavior of the score and the searches.
//! * [`synth`] — seeded random datasets for tests and benchmarks.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod data;
pub mod info;
pub mod reduction;
pub mod search;
pub mod synth;

pub use bounds::BoundKind;
pub use data::{ContingencyTable, Dataset, Labeling};
pub use info::ScoreBundle;
pub use search::{DiscoveryResult, SearchConfig};
