//! Writers for the set-cover reduction datasets: a CSV of the symbolic
//! table plus a key=value sidecar recording the construction parameters and
//! the brute-forced minimum cover size.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use relfd_core::reduction::{
    min_cover_bruteforce, tau1_table, tau_k_table, ReductionError, ReductionMeta,
    SetCoverInstance, SymbolTable,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Tau1,
    TauK,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Tau1 => "tau1",
            Variant::TauK => "tauk",
        }
    }
}

#[derive(Debug)]
pub enum RedgenError {
    /// Malformed `--subsets` specification.
    BadSpec(String),
    Reduction(ReductionError),
    Io(std::io::Error),
}

impl fmt::Display for RedgenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RedgenError::BadSpec(msg) => write!(f, "bad subset spec: {msg}"),
            RedgenError::Reduction(e) => write!(f, "{e}"),
            RedgenError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RedgenError {}

impl From<ReductionError> for RedgenError {
    fn from(e: ReductionError) -> RedgenError {
        RedgenError::Reduction(e)
    }
}

impl From<std::io::Error> for RedgenError {
    fn from(e: std::io::Error) -> RedgenError {
        RedgenError::Io(e)
    }
}

/// Parses `"1,3,4;2,5"` into subsets of universe elements.
pub fn parse_subsets(spec: &str) -> Result<Vec<BTreeSet<usize>>, RedgenError> {
    let mut subsets = Vec::new();
    for (i, part) in spec.split(';').enumerate() {
        let mut set = BTreeSet::new();
        for token in part.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            let e: usize = token
                .parse()
                .map_err(|_| RedgenError::BadSpec(format!("subset {}: {token:?}", i + 1)))?;
            set.insert(e);
        }
        if set.is_empty() {
            return Err(RedgenError::BadSpec(format!("subset {} is empty", i + 1)));
        }
        subsets.push(set);
    }
    Ok(subsets)
}

fn csv_of(table: &SymbolTable) -> String {
    let mut out = String::new();
    let m = table.column_names().len();
    out.push_str(&table.column_names().join(","));
    out.push(',');
    out.push_str(table.target_name());
    out.push('\n');
    for row in 0..table.n_rows() {
        for c in 0..m {
            out.push_str(&table.column_symbols(c)[row].to_string());
            out.push(',');
        }
        out.push_str(&table.target_symbols()[row].to_string());
        out.push('\n');
    }
    out
}

fn subsets_spec(inst: &SetCoverInstance) -> String {
    inst.subsets()
        .iter()
        .map(|s| {
            s.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub struct WrittenReduction {
    pub csv_path: PathBuf,
    pub sidecar_path: PathBuf,
    pub meta: ReductionMeta,
    pub rows: usize,
    pub min_cover_size: usize,
}

/// Writes the dataset CSV to `out` and a `.meta` sidecar next to it.
pub fn write_reduction(
    inst: &SetCoverInstance,
    variant: Variant,
    out: &Path,
) -> Result<WrittenReduction, RedgenError> {
    let min_cover = min_cover_bruteforce(inst)?;
    let (table, meta) = match variant {
        Variant::Tau1 => tau1_table(inst),
        Variant::TauK => tau_k_table(inst),
    };
    fs::write(out, csv_of(&table))?;
    let sidecar_path = out.with_extension("meta");
    let (s1, s2, s3) = (meta.regions.s1, meta.regions.s2, meta.regions.s3);
    let sidecar = format!(
        "variant={}\nuniverse={}\nsubsets={}\nl={}\nk={}\ns1={}..{}\ns2={}..{}\ns3={}..{}\nrows={}\nmin_cover_size={}\n",
        variant.name(),
        inst.universe_size(),
        subsets_spec(inst),
        meta.l,
        meta.k,
        s1.0, s1.1,
        s2.0, s2.1,
        s3.0, s3.1,
        table.n_rows(),
        min_cover.len(),
    );
    fs::write(&sidecar_path, sidecar)?;
    Ok(WrittenReduction {
        csv_path: out.to_path_buf(),
        sidecar_path,
        meta,
        rows: table.n_rows(),
        min_cover_size: min_cover.len(),
    })
}
