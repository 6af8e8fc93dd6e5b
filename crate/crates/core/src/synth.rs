//! Seeded random datasets for exercising the scorers and searches.
//!
//! Generation is fully determined by the seed, so failures reproduce. The
//! column mix deliberately includes constant columns, near-copies of the
//! target, and duplicated columns alongside uniform noise, because those are
//! the shapes that stress tie-breaking, bounds, and the identity shortcuts.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{Dataset, Labeling};

/// Labeling of `len` uniform draws from a domain of at most `max_domain`
/// values, densely re-encoded.
pub fn random_labeling<R: Rng>(len: usize, max_domain: usize, rng: &mut R) -> Labeling {
    debug_assert!(max_domain >= 1);
    let values: Vec<u32> = (0..len)
        .map(|_| rng.gen_range(0..max_domain) as u32)
        .collect();
    Labeling::encode(&values)
}

/// Random dataset with columns `c0..c{columns-1}` and target `y`.
///
/// Roughly 10% of columns are constant, 15% are noisy copies of the target,
/// 10% duplicate an earlier column, and the rest are uniform draws.
pub fn random_dataset(rows: usize, columns: usize, max_domain: usize, seed: u64) -> Dataset {
    debug_assert!(rows >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = random_labeling(rows, max_domain, &mut rng);
    let mut cols: Vec<Labeling> = Vec::with_capacity(columns);
    for c in 0..columns {
        let roll: f64 = rng.gen();
        let col = if roll < 0.10 {
            Labeling::constant(rows)
        } else if roll < 0.25 {
            let mut v: Vec<u32> = target.codes().to_vec();
            for x in v.iter_mut() {
                if rng.gen_bool(0.3) {
                    *x = rng.gen_range(0..max_domain) as u32;
                }
            }
            Labeling::encode(&v)
        } else if roll < 0.35 && c > 0 {
            cols[rng.gen_range(0..c)].clone()
        } else {
            random_labeling(rows, max_domain, &mut rng)
        };
        cols.push(col);
    }
    let names: Vec<String> = (0..columns).map(|c| format!("c{c}")).collect();
    Dataset::new(names, cols, String::from("y"), target)
        .expect("generated columns are aligned and named uniquely")
}
