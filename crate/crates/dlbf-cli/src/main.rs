//! `dlbf`: deletable Bloom filter toolkit.
//!
//! Four subcommands: `model` evaluates the closed-form analysis, `simulate`
//! runs Monte-Carlo experiments, `figure` reproduces the canned parameter
//! sweeps, and `filter` maintains a serialized filter on disk. Tabular
//! results go to stdout (or `--out`) as CSV or JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dlbf::analysis::{deletability_curve, ModelParams, ModelPoint};
use dlbf::codec;
use dlbf::sim::{
    figure_dataset, run_experiment, run_sbf_baseline, ElementSource, ExperimentConfig,
    FigureConfig, FigureDataset, FigureId,
};
use dlbf::table::{write_csv, TableRow};
use dlbf::{DeletableBloomFilter, FilterParams};

#[derive(Parser)]
#[command(name = "dlbf", version, about = "Deletable Bloom filter toolkit")]
struct Cli {
    /// Encoding for tabular results.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Write tabular results to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the analytical model at one point or over a sweep grid.
    Model(ModelArgs),
    /// Run a Monte-Carlo experiment and print aggregated metrics.
    Simulate(SimulateArgs),
    /// Reproduce a canned dataset (fig2, fig3 or fig4).
    Figure(FigureArgs),
    /// Create and manipulate a filter stored in a file.
    Filter(FilterArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Total filter size in bits.
    #[arg(long, default_value_t = 240)]
    m: u32,

    /// Collision-bitmap bits (ignored when sweeping).
    #[arg(long, default_value_t = 24)]
    r: u32,

    /// Hash indices per element.
    #[arg(long, default_value_t = 5)]
    k: u32,

    /// Inserted elements (ignored when sweeping).
    #[arg(long, default_value_t = 22)]
    n: u32,

    /// Evaluate a whole range of n instead, e.g. `--n-range 0..50` (both
    /// ends inclusive).
    #[arg(long, value_parser = parse_inclusive_range, conflicts_with_all = ["n", "ratios", "densities"])]
    n_range: Option<(u32, u32)>,

    /// Sweep of m/r ratios; each entry adds a series with r = round(m/ratio).
    #[arg(long, value_delimiter = ',', requires = "densities")]
    ratios: Option<Vec<f64>>,

    /// Sweep of m/n densities; each entry adds points with n = round(m/density).
    #[arg(long, value_delimiter = ',', requires = "ratios")]
    densities: Option<Vec<f64>>,
}

fn parse_inclusive_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected START..END, got {s:?}"))?;
    let lo: u32 = lo.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let hi: u32 = hi
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|e| format!("bad range end: {e}"))?;
    if lo > hi {
        return Err(format!("range start {lo} exceeds end {hi}"));
    }
    Ok((lo, hi))
}

#[derive(Args)]
struct SimulateArgs {
    /// Total filter size in bits.
    #[arg(long, default_value_t = 240)]
    m: u32,

    /// Collision-bitmap bits.
    #[arg(long, default_value_t = 24)]
    r: u32,

    /// Hash indices per element.
    #[arg(long, default_value_t = 5)]
    k: u32,

    /// Elements inserted per trial.
    #[arg(long, default_value_t = 22)]
    n: u32,

    /// Independent trials to run.
    #[arg(long, default_value_t = 2000)]
    trials: u32,

    /// Non-member elements probed per trial.
    #[arg(long, default_value_t = 500)]
    probes: u32,

    /// Master seed; drives element generation and the per-trial rngs.
    #[arg(long, env = "DLBF_SEED", default_value_t = 42)]
    seed: u64,

    /// Draw elements from this newline-delimited file instead of
    /// generating random strings.
    #[arg(long)]
    wordlist: Option<PathBuf>,

    /// Also run a baseline filter on the same trials; `sbf` is a standard
    /// Bloom filter of the same m and k, reported with r = 0.
    #[arg(long, value_parser = ["sbf"])]
    baseline: Option<String>,
}

#[derive(Args)]
struct FigureArgs {
    /// Which dataset to compute: fig2, fig3 or fig4.
    #[arg(long)]
    id: FigureId,

    /// Trials per experiment (simulated figures only).
    #[arg(long, default_value_t = 2000)]
    trials: u32,

    /// Non-member probes per trial (simulated figures only).
    #[arg(long, default_value_t = 500)]
    probes: u32,

    /// Master seed (simulated figures only).
    #[arg(long, env = "DLBF_SEED", default_value_t = 42)]
    seed: u64,

    /// Element wordlist (simulated figures only).
    #[arg(long)]
    wordlist: Option<PathBuf>,
}

#[derive(Args)]
struct FilterArgs {
    #[command(subcommand)]
    action: FilterAction,
}

#[derive(Subcommand)]
enum FilterAction {
    /// Write an empty filter.
    Create {
        /// Path of the filter file.
        #[arg(long)]
        file: PathBuf,

        /// Total filter size in bits.
        #[arg(long, default_value_t = 240)]
        m: u32,

        /// Collision-bitmap bits.
        #[arg(long, default_value_t = 24)]
        r: u32,

        /// Hash indices per element.
        #[arg(long, default_value_t = 5)]
        k: u32,

        /// Seed of the index derivation, stored in the file.
        #[arg(long, env = "DLBF_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// Insert an element and rewrite the file.
    Insert {
        #[arg(long)]
        file: PathBuf,

        /// Element value; its UTF-8 bytes are hashed.
        #[arg(long)]
        element: String,
    },
    /// Print `true` or `false` for a membership query.
    Query {
        #[arg(long)]
        file: PathBuf,

        #[arg(long)]
        element: String,
    },
    /// Attempt a removal, print the outcome (`Deleted`, `NotDeletable` or
    /// `NotPresent`) and rewrite the file if it changed.
    Remove {
        #[arg(long)]
        file: PathBuf,

        #[arg(long)]
        element: String,
    },
}

fn main() {
    if let Err(err) = run(Cli::parse()) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Model(args) => emit(&model_rows(&args)?, cli.format, cli.out.as_deref()),
        Command::Simulate(args) => emit(&simulate_rows(&args)?, cli.format, cli.out.as_deref()),
        Command::Figure(args) => {
            let config = FigureConfig {
                trials: args.trials,
                probes: args.probes,
                master_seed: args.seed,
                source: element_source(args.wordlist),
            };
            match figure_dataset(args.id, &config)? {
                FigureDataset::Model(rows) => emit(&rows, cli.format, cli.out.as_deref()),
                FigureDataset::Simulated(rows) => emit(&rows, cli.format, cli.out.as_deref()),
                FigureDataset::FprComparison(rows) => emit(&rows, cli.format, cli.out.as_deref()),
            }
        }
        Command::Filter(args) => filter_action(args.action),
    }
}

fn element_source(wordlist: Option<PathBuf>) -> ElementSource {
    match wordlist {
        Some(path) => ElementSource::Wordlist(path),
        None => ElementSource::Synthetic,
    }
}

fn model_rows(args: &ModelArgs) -> Result<Vec<ModelPoint>> {
    if let (Some(ratios), Some(densities)) = (&args.ratios, &args.densities) {
        return deletability_curve(args.m, ratios, args.k, densities)
            .context("invalid sweep (--m, --ratios, --k, --densities)");
    }
    let point = |n: u32| -> Result<ModelPoint> {
        let params = ModelParams::new(args.m, args.r, args.k, n)
            .context("invalid model parameters (--m, --r, --k, --n)")?;
        Ok(ModelPoint::compute(params))
    };
    match args.n_range {
        Some((lo, hi)) => (lo..=hi).map(point).collect(),
        None => Ok(vec![point(args.n)?]),
    }
}

fn simulate_rows(args: &SimulateArgs) -> Result<Vec<dlbf::sim::AggregateRow>> {
    let params = FilterParams::new(args.m, args.r, args.k, args.seed)
        .context("invalid filter parameters (--m, --r, --k)")?;
    warn_if_r_below_k(&params);
    let config = ExperimentConfig {
        params,
        n: args.n,
        trials: args.trials,
        probes: args.probes,
        master_seed: args.seed,
        source: element_source(args.wordlist.clone()),
    };
    let mut rows = vec![run_experiment(&config)
        .context("simulation failed (--n, --trials, --probes)")?
        .to_row()];
    if args.baseline.is_some() {
        rows.push(run_sbf_baseline(&config)?.to_row());
    }
    Ok(rows)
}

fn warn_if_r_below_k(params: &FilterParams) {
    if params.r_below_k() {
        eprintln!(
            "warning: r = {} is below k = {}; every insertion has more indices than there \
             are regions, so the collision bitmap will saturate quickly and few removals \
             will succeed",
            params.r(),
            params.k()
        );
    }
}

fn emit<R: TableRow>(rows: &[R], format: OutputFormat, out: Option<&Path>) -> Result<()> {
    let mut buf = Vec::new();
    match format {
        OutputFormat::Csv => write_csv(rows, &mut buf)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut buf, rows)?;
            buf.push(b'\n');
        }
    }
    match out {
        Some(path) => fs::write(path, buf)
            .with_context(|| format!("cannot write output file {}", path.display()))?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn load_filter(path: &Path) -> Result<DeletableBloomFilter> {
    let bytes =
        fs::read(path).with_context(|| format!("cannot read filter file {}", path.display()))?;
    codec::from_bytes(&bytes)
        .with_context(|| format!("cannot parse filter file {}", path.display()))
}

/// Write-then-rename, so an interrupted rewrite never clobbers the old
/// filter.
fn store_filter(path: &Path, filter: &DeletableBloomFilter) -> Result<()> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create temporary file in {}", dir.display()))?;
    tmp.write_all(&codec::to_bytes(filter))?;
    tmp.persist(path)
        .with_context(|| format!("cannot replace filter file {}", path.display()))?;
    Ok(())
}

fn filter_action(action: FilterAction) -> Result<()> {
    match action {
        FilterAction::Create { file, m, r, k, seed } => {
            let params = FilterParams::new(m, r, k, seed)
                .context("invalid filter parameters (--m, --r, --k)")?;
            warn_if_r_below_k(&params);
            store_filter(&file, &DeletableBloomFilter::new(params))
        }
        FilterAction::Insert { file, element } => {
            let mut filter = load_filter(&file)?;
            filter.insert(element.as_bytes());
            store_filter(&file, &filter)
        }
        FilterAction::Query { file, element } => {
            let filter = load_filter(&file)?;
            println!("{}", filter.query(element.as_bytes()));
            Ok(())
        }
        FilterAction::Remove { file, element } => {
            let mut filter = load_filter(&file)?;
            let outcome = filter.remove(element.as_bytes());
            if outcome != dlbf::RemoveOutcome::NotPresent {
                store_filter(&file, &filter)?;
            }
            println!("{outcome}");
            Ok(())
        }
    }
}
