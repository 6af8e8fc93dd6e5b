//! relfd: finds column sets that reliably predict a target column in CSV
//! data, scores explicit column sets, benchmarks search strategies, and
//! generates the set-cover stress datasets.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use relfd_cli::bench::{read_manifest, run_bench, write_records_csv, MethodSpec};
use relfd_cli::figure::{simulate, write_csv as write_figure_csv};
use relfd_cli::load::load_csv;
use relfd_cli::pool::{pool_from_env, InstantClock};
use relfd_cli::redgen::{parse_subsets, write_reduction, RedgenError, Variant};
use relfd_cli::report;
use relfd_core::bounds::{f_mon_with, f_spc_with, BoundKind};
use relfd_core::data::contingency;
use relfd_core::info::{score_bundle_with, LnFactorials};
use relfd_core::reduction::{random_instance, SetCoverInstance};
use relfd_core::search::{greedy_with, opus_with, SearchConfig};

#[derive(Parser)]
#[command(
    name = "relfd",
    version,
    about = "Discovers reliable approximate functional dependencies in CSV data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for the column set that best predicts the target
    Discover {
        /// CSV file to analyze
        data: PathBuf,
        /// Name of the target column
        #[arg(long)]
        target: String,
        /// Search strategy: opus (exact) or greedy
        #[arg(long, default_value = "opus")]
        method: String,
        /// Approximation factor in (0, 1]; 1 searches exactly
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Bounding function: mon, spc, or staged
        #[arg(long, default_value = "staged")]
        bound: String,
        /// Equal-frequency bins for numeric columns
        #[arg(long, default_value_t = 5)]
        bins: usize,
        /// Seed echoed into machine-readable output
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop after this many scored candidates
        #[arg(long)]
        node_budget: Option<u64>,
        /// Stop after this many seconds of search
        #[arg(long)]
        time_budget: Option<f64>,
        /// Disable greedy's early termination check
        #[arg(long)]
        no_early_stop: bool,
        /// Emit one flat JSON record instead of text
        #[arg(long)]
        json: bool,
    },
    /// Score an explicit column set against the target
    Score {
        /// CSV file to analyze
        data: PathBuf,
        /// Name of the target column
        #[arg(long)]
        target: String,
        /// Comma-separated column names; omit for all columns, pass "" for
        /// the empty set
        #[arg(long)]
        columns: Option<String>,
        /// Equal-frequency bins for numeric columns
        #[arg(long, default_value_t = 5)]
        bins: usize,
        /// Emit one flat JSON record instead of text
        #[arg(long)]
        json: bool,
    },
    /// Compare two search strategies over a manifest of datasets
    Bench {
        /// Manifest CSV with header name,path,target,alpha,bins
        manifest: PathBuf,
        /// First method, e.g. opus:spc or greedy:none
        #[arg(long)]
        method_a: String,
        /// Second method
        #[arg(long)]
        method_b: String,
        /// Repetitions per measurement
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Write the plot-ready CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate dependency-by-chance for independent X and Y
    Figure1 {
        /// Sample size per trial
        #[arg(long, default_value_t = 1000)]
        rows: usize,
        /// Domain size of the independent target
        #[arg(long, default_value_t = 4)]
        y_domain: usize,
        /// Largest X domain size; the grid doubles from 4 up to this
        #[arg(long, default_value_t = 2048)]
        max_domain: usize,
        /// Trials averaged per domain size
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a set-cover reduction dataset plus metadata sidecar
    GenReduction {
        /// Universe size n; elements are 1..=n
        #[arg(long)]
        universe: usize,
        /// Explicit subsets, e.g. "1,3,4;2,5"
        #[arg(long)]
        subsets: Option<String>,
        /// Generate a random coverable instance from this seed
        #[arg(long)]
        seed: Option<u64>,
        /// Number of subsets for seeded generation
        #[arg(long, default_value_t = 4)]
        num_subsets: usize,
        /// tau1 (single copy) or tauk (replicated)
        #[arg(long, default_value = "tau1")]
        variant: String,
        /// Output CSV path; the sidecar lands next to it as .meta
        #[arg(long)]
        out: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

fn parse_bound(s: &str) -> Result<BoundKind, CliError> {
    match s {
        "mon" => Ok(BoundKind::Mon),
        "spc" => Ok(BoundKind::Spc),
        "staged" => Ok(BoundKind::Staged),
        other => Err(CliError::Usage(format!(
            "unknown bound {other:?} (use mon, spc, or staged)"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_discover(
    data: PathBuf,
    target: String,
    method: String,
    alpha: f64,
    bound: String,
    bins: usize,
    seed: u64,
    node_budget: Option<u64>,
    time_budget: Option<f64>,
    no_early_stop: bool,
    json: bool,
) -> Result<(), CliError> {
    let bound = parse_bound(&bound)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(CliError::Usage(format!("alpha must be in (0, 1], got {alpha}")));
    }
    if bins == 0 {
        return Err(CliError::Usage(String::from("bins must be >= 1")));
    }
    let loaded = load_csv(&data, &target, bins).map_err(|e| CliError::Data(e.to_string()))?;
    if loaded.dropped_rows > 0 {
        eprintln!(
            "note: dropped {} rows with missing values",
            loaded.dropped_rows
        );
    }
    let pool = pool_from_env();
    let result = match method.as_str() {
        "opus" => {
            let config = SearchConfig {
                alpha,
                bound,
                node_budget,
                time_budget,
            };
            let clock = InstantClock::start();
            opus_with(&loaded.dataset, &config, &pool, &clock)
                .expect("alpha was validated above")
        }
        "greedy" => {
            let clock = InstantClock::start();
            greedy_with(&loaded.dataset, !no_early_stop, bound, &pool, &clock)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown method {other:?} (use opus or greedy)"
            )));
        }
    };
    if json {
        println!("{}", report::discovery_json(&result, seed, loaded.dropped_rows));
    } else {
        print!("{}", report::discovery_text(&result, loaded.dropped_rows));
    }
    Ok(())
}

fn cmd_score(
    data: PathBuf,
    target: String,
    columns: Option<String>,
    bins: usize,
    json: bool,
) -> Result<(), CliError> {
    if bins == 0 {
        return Err(CliError::Usage(String::from("bins must be >= 1")));
    }
    let loaded = load_csv(&data, &target, bins).map_err(|e| CliError::Data(e.to_string()))?;
    let dataset = &loaded.dataset;
    let indices: Vec<usize> = match &columns {
        None => (0..dataset.n_columns()).collect(),
        Some(list) if list.trim().is_empty() => Vec::new(),
        Some(list) => list
            .split(',')
            .map(|name| {
                let name = name.trim();
                dataset
                    .column_index(name)
                    .ok_or_else(|| CliError::Data(format!("column {name:?} not in the data")))
            })
            .collect::<Result<_, _>>()?,
    };
    let table = contingency(&dataset.joint_of(&indices), dataset.target())
        .expect("loaded columns are aligned");
    let lnf = LnFactorials::new(dataset.n_rows() as u64);
    let bundle = score_bundle_with(&table, &lnf);
    let f_mon = f_mon_with(&table, &lnf);
    let f_spc = f_spc_with(&table, &lnf);
    let names: Vec<String> = indices
        .iter()
        .map(|&i| dataset.column_name(i).to_string())
        .collect();
    if json {
        println!(
            "{}",
            report::score_json(&names, &bundle, f_mon, f_spc, loaded.dropped_rows)
        );
    } else {
        print!(
            "{}",
            report::score_text(&names, &bundle, f_mon, f_spc, loaded.dropped_rows)
        );
    }
    Ok(())
}

fn cmd_bench(
    manifest: PathBuf,
    method_a: String,
    method_b: String,
    reps: usize,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let spec_a = MethodSpec::parse(&method_a).map_err(CliError::Usage)?;
    let spec_b = MethodSpec::parse(&method_b).map_err(CliError::Usage)?;
    if reps == 0 {
        return Err(CliError::Usage(String::from("reps must be >= 1")));
    }
    let entries = read_manifest(&manifest).map_err(|e| CliError::Data(e.to_string()))?;
    let pool = pool_from_env();
    let (records, report) = run_bench(&entries, &spec_a, &spec_b, reps, &pool)
        .map_err(|e| CliError::Data(e.to_string()))?;
    println!(
        "{:<20} {:<14} {:>6} {:>12} {:>10} {:>10}",
        "dataset", "method", "alpha", "time_s", "nodes", "f0"
    );
    for r in &records {
        println!(
            "{:<20} {:<14} {:>6} {:>12.6} {:>10} {:>10.6}",
            r.dataset, r.method, r.alpha, r.time_s, r.nodes, r.f0
        );
    }
    println!();
    println!("{:<20} {:>8} {:>8}", "dataset", "rrd", "rnd");
    for e in &report.entries {
        println!("{:<20} {:>8.4} {:>8.4}", e.dataset, e.rrd, e.rnd);
    }
    match out {
        Some(path) => {
            let file = File::create(&path).map_err(|e| CliError::Data(e.to_string()))?;
            write_records_csv(&records, file).map_err(|e| CliError::Data(e.to_string()))?;
        }
        None => {
            println!();
            write_records_csv(&records, std::io::stdout())
                .map_err(|e| CliError::Data(e.to_string()))?;
        }
    }
    Ok(())
}

fn cmd_figure1(
    rows: usize,
    y_domain: usize,
    max_domain: usize,
    trials: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if rows == 0 || y_domain == 0 || trials == 0 {
        return Err(CliError::Usage(String::from(
            "rows, y-domain, and trials must be >= 1",
        )));
    }
    if max_domain < 4 {
        return Err(CliError::Usage(String::from("max-domain must be >= 4")));
    }
    let points = simulate(rows, y_domain, max_domain, trials, seed);
    match out {
        Some(path) => {
            let file = File::create(&path).map_err(|e| CliError::Data(e.to_string()))?;
            write_figure_csv(&points, file).map_err(|e| CliError::Data(e.to_string()))?;
        }
        None => {
            write_figure_csv(&points, std::io::stdout())
                .map_err(|e| CliError::Data(e.to_string()))?;
        }
    }
    Ok(())
}

fn cmd_gen_reduction(
    universe: usize,
    subsets: Option<String>,
    seed: Option<u64>,
    num_subsets: usize,
    variant: String,
    out: PathBuf,
) -> Result<(), CliError> {
    let variant = match variant.as_str() {
        "tau1" => Variant::Tau1,
        "tauk" => Variant::TauK,
        other => {
            return Err(CliError::Usage(format!(
                "unknown variant {other:?} (use tau1 or tauk)"
            )));
        }
    };
    if universe == 0 {
        return Err(CliError::Usage(String::from("universe must be >= 1")));
    }
    let inst = match (subsets, seed) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(String::from(
                "give either --subsets or --seed, not both",
            )));
        }
        (None, None) => {
            return Err(CliError::Usage(String::from("give --subsets or --seed")));
        }
        (Some(spec), None) => {
            let parsed = parse_subsets(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
            SetCoverInstance::new(universe, parsed).map_err(|e| CliError::Data(e.to_string()))?
        }
        (None, Some(seed)) => {
            if num_subsets == 0 {
                return Err(CliError::Usage(String::from("num-subsets must be >= 1")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_instance(universe, num_subsets, &mut rng)
        }
    };
    let written = write_reduction(&inst, variant, &out).map_err(|e| match e {
        RedgenError::BadSpec(msg) => CliError::Usage(msg),
        other => CliError::Data(other.to_string()),
    })?;
    println!(
        "wrote {} ({} rows, l={}, k={})",
        written.csv_path.display(),
        written.rows,
        written.meta.l,
        written.meta.k
    );
    println!("wrote {}", written.sidecar_path.display());
    println!("minimum cover size {}", written.min_cover_size);
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Discover {
            data,
            target,
            method,
            alpha,
            bound,
            bins,
            seed,
            node_budget,
            time_budget,
            no_early_stop,
            json,
        } => cmd_discover(
            data,
            target,
            method,
            alpha,
            bound,
            bins,
            seed,
            node_budget,
            time_budget,
            no_early_stop,
            json,
        ),
        Command::Score {
            data,
            target,
            columns,
            bins,
            json,
        } => cmd_score(data, target, columns, bins, json),
        Command::Bench {
            manifest,
            method_a,
            method_b,
            reps,
            out,
        } => cmd_bench(manifest, method_a, method_b, reps, out),
        Command::Figure1 {
            rows,
            y_domain,
            max_domain,
            trials,
            seed,
            out,
        } => cmd_figure1(rows, y_domain, max_domain, trials, seed, out),
        Command::GenReduction {
            universe,
            subsets,
            seed,
            num_subsets,
            variant,
            out,
        } => cmd_gen_reduction(universe, subsets, seed, num_subsets, variant, out),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        let _ = writeln!(std::io::stderr(), "error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
