//! Builds datasets on which maximizing the reliable fraction of information
//! solves minimum set cover.
//!
//! An instance with universe `{1, ..., n}` and subsets `B_1, ..., B_m` turns
//! into a table with one column per subset and `l = 2n + m + 1` rows split
//! into three regions. A column set attains fraction of information 1
//! exactly when the chosen subsets cover the universe, and every non-cover
//! falls short by at least `2/l` bits of information. Replicating the table
//! `k` times shrinks the permutation correction of covers below that gap
//! while leaving the fraction untouched, so the reliable-fraction maximizer
//! of the replicated table is a minimum cover.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::data::{contingency, Dataset, Labeling};
use crate::info::score_bundle;

#[derive(Clone, Debug, PartialEq)]
pub enum ReductionError {
    EmptyUniverse,
    NoSubsets,
    /// A subset mentions an element outside `1..=universe_size`.
    BadElement { element: usize, universe: usize },
    /// Brute-force enumeration over more subsets than the guard allows.
    TooManySubsets { got: usize, max: usize },
    /// The subsets do not cover the universe at all.
    NoCover,
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::EmptyUniverse => write!(f, "universe must not be empty"),
            ReductionError::NoSubsets => write!(f, "instance needs at least one subset"),
            ReductionError::BadElement { element, universe } => {
                write!(f, "element {element} outside universe 1..={universe}")
            }
            ReductionError::TooManySubsets { got, max } => {
                write!(f, "enumeration limited to {max} subsets, got {got}")
            }
            ReductionError::NoCover => write!(f, "no selection of subsets covers the universe"),
        }
    }
}

impl core::error::Error for ReductionError {}

/// A set cover instance: universe `{1, ..., universe_size}` and a list of
/// subsets of it.
#[derive(Clone, Debug)]
pub struct SetCoverInstance {
    universe_size: usize,
    subsets: Vec<BTreeSet<usize>>,
}

impl SetCoverInstance {
    pub fn new(
        universe_size: usize,
        subsets: Vec<BTreeSet<usize>>,
    ) -> Result<SetCoverInstance, ReductionError> {
        if universe_size == 0 {
            return Err(ReductionError::EmptyUniverse);
        }
        if subsets.is_empty() {
            return Err(ReductionError::NoSubsets);
        }
        for s in &subsets {
            for &e in s {
                if e == 0 || e > universe_size {
                    return Err(ReductionError::BadElement {
                        element: e,
                        universe: universe_size,
                    });
                }
            }
        }
        Ok(SetCoverInstance {
            universe_size,
            subsets,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn n_subsets(&self) -> usize {
        self.subsets.len()
    }

    pub fn subsets(&self) -> &[BTreeSet<usize>] {
        &self.subsets
    }
}

/// True when the union of the chosen subsets (by index) is the universe.
pub fn is_cover(inst: &SetCoverInstance, chosen: &[usize]) -> bool {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for &i in chosen {
        seen.extend(inst.subsets[i].iter().copied());
    }
    seen.len() == inst.universe_size
}

fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let size = idx.len();
    if size == 0 {
        return false;
    }
    let mut i = size - 1;
    loop {
        if idx[i] != i + m - size {
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
        if i == 0 {
            return false;
        }
        i -= 1;
    }
}

const BRUTE_FORCE_MAX_SUBSETS: usize = 20;
const VERIFY_MAX_SUBSETS: usize = 12;

/// Smallest cover by exhaustive enumeration, trying cardinalities in
/// ascending order and index combinations in lexicographic order, so the
/// result is the lexicographically smallest minimum cover.
pub fn min_cover_bruteforce(inst: &SetCoverInstance) -> Result<Vec<usize>, ReductionError> {
    let m = inst.n_subsets();
    if m > BRUTE_FORCE_MAX_SUBSETS {
        return Err(ReductionError::TooManySubsets {
            got: m,
            max: BRUTE_FORCE_MAX_SUBSETS,
        });
    }
    for size in 1..=m {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if is_cover(inst, &idx) {
                return Ok(idx);
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    Err(ReductionError::NoCover)
}

/// One cell of the constructed table before categorical encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symbol {
    /// A universe element, rendered as its number.
    Elem(usize),
    A,
    B,
    C,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Elem(e) => write!(f, "{e}"),
            Symbol::A => write!(f, "a"),
            Symbol::B => write!(f, "b"),
            Symbol::C => write!(f, "c"),
        }
    }
}

/// The constructed table in symbolic form, one column per subset plus the
/// target, before categorical encoding. Kept symbolic so writers can render
/// the exact cell values.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    names: Vec<String>,
    columns: Vec<Vec<Symbol>>,
    target: Vec<Symbol>,
}

impl SymbolTable {
    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn target_name(&self) -> &str {
        "Y"
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn column_symbols(&self, i: usize) -> &[Symbol] {
        &self.columns[i]
    }

    pub fn target_symbols(&self) -> &[Symbol] {
        &self.target
    }

    pub fn to_dataset(&self) -> Dataset {
        let columns: Vec<Labeling> = self.columns.iter().map(|c| Labeling::encode(c)).collect();
        Dataset::new(
            self.names.clone(),
            columns,
            String::from(self.target_name()),
            Labeling::encode(&self.target),
        )
        .expect("constructed columns are aligned and named uniquely")
    }
}

/// Row ranges (1-based, inclusive) of the three regions within one copy of
/// the base table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionBounds {
    pub s1: (usize, usize),
    pub s2: (usize, usize),
    pub s3: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionMeta {
    /// Rows in one copy of the base table: `2n + m + 1`.
    pub l: usize,
    /// Number of copies in the replicated table.
    pub k: usize,
    pub regions: RegionBounds,
}

fn base_rows(inst: &SetCoverInstance) -> (Vec<Vec<Symbol>>, Vec<Symbol>, ReductionMeta) {
    let n = inst.universe_size();
    let m = inst.n_subsets();
    let l = 2 * n + m + 1;
    let mut columns: Vec<Vec<Symbol>> = Vec::with_capacity(m);
    for (i, subset) in inst.subsets().iter().enumerate() {
        let mut col: Vec<Symbol> = Vec::with_capacity(l);
        for j in 1..=l {
            let sym = if j <= n {
                if subset.contains(&j) {
                    Symbol::Elem(j)
                } else {
                    Symbol::A
                }
            } else if j <= 2 * n {
                Symbol::A
            } else if j == 2 * n + i + 1 {
                Symbol::B
            } else {
                Symbol::C
            };
            col.push(sym);
        }
        columns.push(col);
    }
    let mut target: Vec<Symbol> = Vec::with_capacity(l);
    for j in 1..=l {
        target.push(if j <= n {
            Symbol::A
        } else if j <= 2 * n {
            Symbol::B
        } else {
            Symbol::C
        });
    }
    let meta = ReductionMeta {
        l,
        k: 1,
        regions: RegionBounds {
            s1: (1, n),
            s2: (n + 1, 2 * n),
            s3: (2 * n + 1, l),
        },
    };
    (columns, target, meta)
}

/// Number of copies that pushes the permutation correction of every cover
/// below the information gap separating covers from non-covers.
pub fn replication_factor(l: usize) -> usize {
    libm::ceil(2.0 * l as f64 / core::f64::consts::LN_2) as usize + 1
}

/// Single-copy construction in symbolic form.
pub fn tau1_table(inst: &SetCoverInstance) -> (SymbolTable, ReductionMeta) {
    let (columns, target, meta) = base_rows(inst);
    let names = (1..=inst.n_subsets()).map(|i| format!("X{i}")).collect();
    (
        SymbolTable {
            names,
            columns,
            target,
        },
        meta,
    )
}

/// Replicated construction in symbolic form: the base rows repeated
/// [`replication_factor`] times.
pub fn tau_k_table(inst: &SetCoverInstance) -> (SymbolTable, ReductionMeta) {
    let (table, mut meta) = tau1_table(inst);
    let k = replication_factor(meta.l);
    let repeat = |v: &[Symbol]| -> Vec<Symbol> {
        let mut out = Vec::with_capacity(v.len() * k);
        for _ in 0..k {
            out.extend_from_slice(v);
        }
        out
    };
    meta.k = k;
    (
        SymbolTable {
            names: table.names.clone(),
            columns: table.columns.iter().map(|c| repeat(c)).collect(),
            target: repeat(&table.target),
        },
        meta,
    )
}

/// Single-copy construction as an encoded dataset.
pub fn tau1(inst: &SetCoverInstance) -> Dataset {
    tau1_table(inst).0.to_dataset()
}

/// Replicated construction as an encoded dataset.
pub fn tau_k(inst: &SetCoverInstance) -> (Dataset, ReductionMeta) {
    let (table, meta) = tau_k_table(inst);
    (table.to_dataset(), meta)
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    /// Column subset maximizing the reliable fraction on the replicated
    /// table (subset indices, ascending).
    pub maximizer: Vec<usize>,
    /// Whether the maximizer is a cover of minimum cardinality.
    pub is_minimum_cover: bool,
    pub min_cover_size: usize,
    pub best_cover_f0: f64,
    pub best_noncover_f0: f64,
}

/// Checks the reduction end to end on a small instance: enumerates every
/// column subset of the replicated table, scores it, and reports whether
/// the reliable-fraction maximizer is a minimum cover.
pub fn verify_reduction(inst: &SetCoverInstance) -> Result<ReductionReport, ReductionError> {
    let m = inst.n_subsets();
    if m > VERIFY_MAX_SUBSETS {
        return Err(ReductionError::TooManySubsets {
            got: m,
            max: VERIFY_MAX_SUBSETS,
        });
    }
    let min_cover = min_cover_bruteforce(inst)?;
    let (data, _) = tau_k(inst);
    let mut maximizer: Vec<usize> = Vec::new();
    let mut max_f0 = 0.0_f64;
    let mut best_cover_f0 = f64::NEG_INFINITY;
    let mut best_noncover_f0 = f64::NEG_INFINITY;
    for mask in 0_usize..1 << m {
        let set: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        let t = contingency(&data.joint_of(&set), data.target())
            .expect("constructed columns are aligned");
        let f0 = score_bundle(&t).f0;
        let tol = crate::bounds::SCORE_TOLERANCE;
        let better = f0 > max_f0 + tol
            || (f0 >= max_f0 - tol
                && (set.len() < maximizer.len()
                    || (set.len() == maximizer.len() && set < maximizer)));
        if better {
            maximizer = set.clone();
            max_f0 = f0;
        }
        if is_cover(inst, &set) {
            best_cover_f0 = best_cover_f0.max(f0);
        } else {
            best_noncover_f0 = best_noncover_f0.max(f0);
        }
    }
    let is_minimum_cover = is_cover(inst, &maximizer) && maximizer.len() == min_cover.len();
    Ok(ReductionReport {
        maximizer,
        is_minimum_cover,
        min_cover_size: min_cover.len(),
        best_cover_f0,
        best_noncover_f0,
    })
}

/// Random instance whose subsets are uniform draws, with the last subset
/// topped up so the universe is guaranteed coverable.
pub fn random_instance<R: Rng>(universe_size: usize, m: usize, rng: &mut R) -> SetCoverInstance {
    debug_assert!(m >= 1);
    let mut subsets: Vec<BTreeSet<usize>> = Vec::with_capacity(m);
    for _ in 0..m {
        subsets.push((1..=universe_size).filter(|_| rng.gen_bool(0.5)).collect());
    }
    let covered: BTreeSet<usize> = subsets.iter().flatten().copied().collect();
    if let Some(last) = subsets.last_mut() {
        for e in 1..=universe_size {
            if !covered.contains(&e) {
                last.insert(e);
            }
        }
    }
    SetCoverInstance::new(universe_size, subsets).expect("construction stays in range")
}
