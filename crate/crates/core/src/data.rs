//! Dense categorical labelings and the contingency tables built from them.
//!
//! A [`Labeling`] is one column of categorical data with its values replaced
//! by dense integer codes `0..domain_size`, assigned in order of first
//! occurrence. Every code below `domain_size` occurs at least once, so
//! marginal counts are always positive.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

/// Errors from constructing or combining labelings and datasets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DataError {
    /// Two columns that must align row-for-row have different lengths.
    LengthMismatch { left: usize, right: usize },
    /// An operation that needs at least one row got none.
    Empty,
    /// `joint_labeling` was called with an empty list of parts.
    EmptyParts,
    /// Codes passed to `Labeling::from_codes` skip a value below the maximum.
    SparseCodes { missing: u32 },
    /// Discretization input contains a NaN.
    NanValue,
    /// Zero bins requested for discretization.
    ZeroBins,
    /// Two columns in a dataset share a name.
    DuplicateName(String),
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataError::LengthMismatch { left, right } => {
                write!(f, "column lengths differ: {left} vs {right}")
            }
            DataError::Empty => write!(f, "operation requires at least one row"),
            DataError::EmptyParts => write!(f, "joint labeling requires at least one part"),
            DataError::SparseCodes { missing } => {
                write!(f, "codes are not dense: {missing} never occurs")
            }
            DataError::NanValue => write!(f, "numeric column contains NaN"),
            DataError::ZeroBins => write!(f, "discretization requires at least one bin"),
            DataError::DuplicateName(name) => write!(f, "duplicate column name {name:?}"),
        }
    }
}

impl core::error::Error for DataError {}

/// A column of categorical values stored as dense codes.
///
/// `codes[i]` is the category of row `i`; codes are `0..domain_size` and
/// every code in that range occurs in the column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    codes: Vec<u32>,
    domain_size: usize,
}

impl Labeling {
    /// The constant labeling: a single category shared by all `len` rows.
    pub fn constant(len: usize) -> Labeling {
        Labeling {
            codes: vec![0; len],
            domain_size: if len == 0 { 0 } else { 1 },
        }
    }

    /// Encodes arbitrary values into dense codes by first occurrence.
    pub fn encode<T: Ord>(values: &[T]) -> Labeling {
        let mut seen: BTreeMap<&T, u32> = BTreeMap::new();
        let mut codes = Vec::with_capacity(values.len());
        for value in values {
            let next = seen.len() as u32;
            let code = *seen.entry(value).or_insert(next);
            codes.push(code);
        }
        Labeling {
            domain_size: seen.len(),
            codes,
        }
    }

    /// Wraps pre-computed codes, verifying they are dense.
    pub fn from_codes(codes: Vec<u32>) -> Result<Labeling, DataError> {
        let domain_size = match codes.iter().max() {
            Some(&max) => max as usize + 1,
            None => 0,
        };
        let mut seen = vec![false; domain_size];
        for &code in &codes {
            seen[code as usize] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(DataError::SparseCodes {
                missing: missing as u32,
            });
        }
        Ok(Labeling { codes, domain_size })
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Number of distinct categories.
    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    /// Occurrence count of each category, indexed by code.
    pub fn counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.domain_size];
        for &code in &self.codes {
            counts[code as usize] += 1;
        }
        counts
    }
}

/// True iff `a` is a coarsening of `b`: whenever `a` separates two rows,
/// `b` separates them too. Equivalently, every category of `b` falls inside
/// a single category of `a`.
pub fn is_specialization(a: &Labeling, b: &Labeling) -> Result<bool, DataError> {
    if a.len() != b.len() {
        return Err(DataError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut image = vec![u32::MAX; b.domain_size];
    for (&ca, &cb) in a.codes.iter().zip(&b.codes) {
        let slot = &mut image[cb as usize];
        if *slot == u32::MAX {
            *slot = ca;
        } else if *slot != ca {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Joins two labelings row-wise, assigning dense codes to the observed pairs
/// by first occurrence.
fn join_pair(a: &Labeling, b: &Labeling) -> Labeling {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    let (da, db) = (a.domain_size, b.domain_size);
    let mut codes = Vec::with_capacity(n);
    let mut next: u32 = 0;
    // Small pair spaces get a direct lookup table; large ones fall back to
    // hashing so memory stays proportional to the observed pairs.
    let dense_limit = (4 * n).max(1024);
    if let Some(pairs) = da.checked_mul(db).filter(|&p| p <= dense_limit) {
        let mut remap = vec![u32::MAX; pairs];
        for (&ca, &cb) in a.codes.iter().zip(&b.codes) {
            let slot = &mut remap[ca as usize * db + cb as usize];
            if *slot == u32::MAX {
                *slot = next;
                next += 1;
            }
            codes.push(*slot);
        }
    } else {
        let mut remap: HashMap<u64, u32> = HashMap::new();
        for (&ca, &cb) in a.codes.iter().zip(&b.codes) {
            let key = (ca as u64) << 32 | cb as u64;
            let code = *remap.entry(key).or_insert_with(|| {
                let code = next;
                next += 1;
                code
            });
            codes.push(code);
        }
    }
    Labeling {
        codes,
        domain_size: next as usize,
    }
}

/// Joins a non-empty list of labelings into the labeling of value tuples.
///
/// Row `i` of the result encodes the tuple of the parts' categories at row
/// `i`. The result specializes every part.
pub fn joint_labeling(parts: &[&Labeling]) -> Result<Labeling, DataError> {
    let first = *parts.first().ok_or(DataError::EmptyParts)?;
    for part in &parts[1..] {
        if part.len() != first.len() {
            return Err(DataError::LengthMismatch {
                left: first.len(),
                right: part.len(),
            });
        }
    }
    let mut joint = first.clone();
    for part in &parts[1..] {
        joint = join_pair(&joint, part);
    }
    Ok(joint)
}

/// Counts of every `(x, y)` category pair, with marginals.
///
/// Storage is a dense `|dom(x)| x |dom(y)|` matrix, so memory is proportional
/// to the domain product. Marginals are always positive because labelings
/// carry no unused codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<u64>,
    rows: usize,
    cols: usize,
    row_marginals: Vec<u64>,
    col_marginals: Vec<u64>,
    n: u64,
}

/// Builds the contingency table of two aligned labelings.
pub fn contingency(x: &Labeling, y: &Labeling) -> Result<ContingencyTable, DataError> {
    if x.len() != y.len() {
        return Err(DataError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(DataError::Empty);
    }
    let (rows, cols) = (x.domain_size, y.domain_size);
    let mut counts = vec![0u64; rows * cols];
    for (&cx, &cy) in x.codes.iter().zip(&y.codes) {
        counts[cx as usize * cols + cy as usize] += 1;
    }
    let mut row_marginals = vec![0u64; rows];
    let mut col_marginals = vec![0u64; cols];
    for i in 0..rows {
        for j in 0..cols {
            let c = counts[i * cols + j];
            row_marginals[i] += c;
            col_marginals[j] += c;
        }
    }
    Ok(ContingencyTable {
        counts,
        rows,
        cols,
        row_marginals,
        col_marginals,
        n: x.len() as u64,
    })
}

impl ContingencyTable {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Total row count.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols + j]
    }

    /// Row-major cell counts.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn row_marginals(&self) -> &[u64] {
        &self.row_marginals
    }

    pub fn col_marginals(&self) -> &[u64] {
        &self.col_marginals
    }

    /// The non-zero cells in row-major order. These are exactly the marginal
    /// counts of the labeling obtained by joining `x` with `y`.
    pub fn nonzero_counts(&self) -> Vec<u64> {
        self.counts.iter().copied().filter(|&c| c > 0).collect()
    }
}

/// Equal-frequency discretization of a numeric column into at most `bins`
/// categories.
///
/// Cut points sit at the `(i * n / bins)`-th order statistics; a value equal
/// to a cut point goes to the lower bin, so equal values always share a code.
/// The resulting codes are dense and assigned by first occurrence, hence
/// `domain_size <= bins`.
pub fn discretize_equal_frequency(values: &[f64], bins: usize) -> Result<Labeling, DataError> {
    if bins == 0 {
        return Err(DataError::ZeroBins);
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(DataError::NanValue);
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut cuts = Vec::with_capacity(bins.saturating_sub(1));
    for i in 1..bins {
        let k = i * n / bins;
        if k >= 1 {
            cuts.push(sorted[k - 1]);
        }
    }
    let raw: Vec<u32> = values
        .iter()
        .map(|&v| cuts.partition_point(|&c| c < v) as u32)
        .collect();
    Ok(Labeling::encode(&raw))
}

/// A table of named predictor columns plus a designated target column, all
/// aligned row-for-row.
#[derive(Clone, Debug)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Labeling>,
    target_name: String,
    target: Labeling,
}

impl Dataset {
    pub fn new(
        names: Vec<String>,
        columns: Vec<Labeling>,
        target_name: String,
        target: Labeling,
    ) -> Result<Dataset, DataError> {
        if names.len() != columns.len() {
            return Err(DataError::LengthMismatch {
                left: names.len(),
                right: columns.len(),
            });
        }
        if target.is_empty() {
            return Err(DataError::Empty);
        }
        for column in &columns {
            if column.len() != target.len() {
                return Err(DataError::LengthMismatch {
                    left: column.len(),
                    right: target.len(),
                });
            }
        }
        for (i, name) in names.iter().enumerate() {
            if name == &target_name || names[..i].contains(name) {
                return Err(DataError::DuplicateName(name.clone()));
            }
        }
        Ok(Dataset {
            names,
            columns,
            target_name,
            target,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    /// Number of predictor columns (the target is not counted).
    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, index: usize) -> &Labeling {
        &self.columns[index]
    }

    pub fn column_name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn target(&self) -> &Labeling {
        &self.target
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    /// Joint labeling of the listed predictor columns; the empty list gives
    /// the constant labeling, which is how the empty candidate set is scored.
    pub fn joint_of(&self, columns: &[usize]) -> Labeling {
        if columns.is_empty() {
            return Labeling::constant(self.n_rows());
        }
        let parts: Vec<&Labeling> = columns.iter().map(|&c| &self.columns[c]).collect();
        joint_labeling(&parts).expect("dataset columns are aligned")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_assigns_codes_by_first_occurrence() {
        let l = Labeling::encode(&["b", "a", "b", "c"]);
        assert_eq!(l.codes(), &[0, 1, 0, 2]);
        assert_eq!(l.domain_size(), 3);
        assert_eq!(l.counts(), vec![2, 1, 1]);
    }

    #[test]
    fn from_codes_rejects_sparse_codes() {
        assert_eq!(
            Labeling::from_codes(vec![0, 2]),
            Err(DataError::SparseCodes { missing: 1 })
        );
        assert!(Labeling::from_codes(vec![1, 0, 2]).is_ok());
        assert_eq!(Labeling::from_codes(vec![]).unwrap().domain_size(), 0);
    }

    #[test]
    fn joint_of_two_alternating_binary_columns_is_a_key() {
        let a = Labeling::from_codes(vec![0, 1, 0, 1]).unwrap();
        let b = Labeling::from_codes(vec![0, 0, 1, 1]).unwrap();
        let joint = joint_labeling(&[&a, &b]).unwrap();
        assert_eq!(joint.codes(), &[0, 1, 2, 3]);
    }

    #[test]
    fn joint_with_constant_leaves_codes_unchanged() {
        let a = Labeling::from_codes(vec![0, 1, 1, 2, 0]).unwrap();
        let c = Labeling::constant(5);
        let joint = joint_labeling(&[&a, &c]).unwrap();
        assert_eq!(joint.codes(), a.codes());
        assert_eq!(joint.domain_size(), a.domain_size());
    }

    #[test]
    fn joint_requires_parts() {
        assert_eq!(joint_labeling(&[]), Err(DataError::EmptyParts));
    }

    #[test]
    fn joint_hashed_and_dense_paths_agree() {
        // 40 x 40 categories exceeds the dense pair-space limit for 40 rows,
        // so this exercises the hashed path.
        let av: Vec<u32> = (0..40).collect();
        let bv: Vec<u32> = (0..40).rev().collect();
        let a = Labeling::encode(&av);
        let b = Labeling::encode(&bv);
        let joint = joint_labeling(&[&a, &b]).unwrap();
        // a is already a key, so joining cannot merge or split anything.
        assert_eq!(joint.codes(), a.codes());
    }

    #[test]
    fn specialization_matches_refinement_direction() {
        let a = Labeling::from_codes(vec![0, 0, 1]).unwrap();
        let b = Labeling::from_codes(vec![0, 1, 2]).unwrap();
        assert!(is_specialization(&a, &b).unwrap());
        assert!(!is_specialization(&b, &a).unwrap());
        assert!(is_specialization(&a, &a).unwrap());
    }

    #[test]
    fn contingency_counts_and_marginals() {
        let x = Labeling::from_codes(vec![0, 0, 1, 1]).unwrap();
        let y = Labeling::from_codes(vec![0, 1, 0, 1]).unwrap();
        let t = contingency(&x, &y).unwrap();
        assert_eq!(t.counts(), &[1, 1, 1, 1]);
        assert_eq!(t.row_marginals(), &[2, 2]);
        assert_eq!(t.col_marginals(), &[2, 2]);
        assert_eq!(t.n(), 4);
        assert_eq!(t.nonzero_counts(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn contingency_rejects_misaligned_or_empty_input() {
        let x = Labeling::constant(3);
        let y = Labeling::constant(2);
        assert!(matches!(
            contingency(&x, &y),
            Err(DataError::LengthMismatch { .. })
        ));
        let e = Labeling::constant(0);
        assert_eq!(contingency(&e, &e), Err(DataError::Empty));
    }

    #[test]
    fn discretize_splits_sorted_values_evenly() {
        let values: Vec<f64> = (1..=10).map(f64::from).collect();
        let l = discretize_equal_frequency(&values, 5).unwrap();
        assert_eq!(l.codes(), &[0, 0, 1, 1, 2, 2, 3, 3, 4, 4]);
    }

    #[test]
    fn discretize_sends_cut_point_values_to_the_lower_bin() {
        let l = discretize_equal_frequency(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert_eq!(l.codes(), &[0, 0, 1, 1]);
    }

    #[test]
    fn discretize_never_splits_ties() {
        let l = discretize_equal_frequency(&[1.0, 1.0, 1.0, 1.0, 2.0, 2.0], 2).unwrap();
        assert_eq!(l.codes(), &[0, 0, 0, 0, 1, 1]);
    }

    #[test]
    fn discretize_constant_column_yields_one_bin() {
        let l = discretize_equal_frequency(&[7.5; 9], 4).unwrap();
        assert_eq!(l.domain_size(), 1);
    }

    #[test]
    fn discretize_rejects_nan_and_zero_bins() {
        assert_eq!(
            discretize_equal_frequency(&[1.0, f64::NAN], 2),
            Err(DataError::NanValue)
        );
        assert_eq!(
            discretize_equal_frequency(&[1.0], 0),
            Err(DataError::ZeroBins)
        );
    }

    #[test]
    fn dataset_validates_names_and_lengths() {
        let col = Labeling::from_codes(vec![0, 1]).unwrap();
        let target = Labeling::from_codes(vec![0, 1]).unwrap();
        let err = Dataset::new(
            vec!["a".into(), "a".into()],
            vec![col.clone(), col.clone()],
            "y".into(),
            target.clone(),
        );
        assert_eq!(err.unwrap_err(), DataError::DuplicateName("a".into()));
        let err = Dataset::new(
            vec!["y".into()],
            vec![col.clone()],
            "y".into(),
            target.clone(),
        );
        assert_eq!(err.unwrap_err(), DataError::DuplicateName("y".into()));
        let short = Labeling::from_codes(vec![0]).unwrap();
        let err = Dataset::new(vec!["a".into()], vec![short], "y".into(), target);
        assert!(matches!(err, Err(DataError::LengthMismatch { .. })));
    }

    #[test]
    fn joint_of_empty_selection_is_constant() {
        let col = Labeling::from_codes(vec![0, 1, 0]).unwrap();
        let target = Labeling::from_codes(vec![0, 0, 1]).unwrap();
        let data = Dataset::new(vec!["a".into()], vec![col], "y".into(), target).unwrap();
        let joint = data.joint_of(&[]);
        assert_eq!(joint.domain_size(), 1);
        assert_eq!(joint.len(), 3);
    }
}
