//! Command-line driver: convergence sweeps, equivalence suites,
//! complexity reports, and single evolutions with snapshots.

use clap::{Args, Parser, Subcommand};
use qlga::bench::{
    complexity_csv, complexity_table, parse_config, run_convergence, run_equivalence, run_single,
    OutputFormat, RunConfig,
};
use qlga::error::Error;
use qlga::evolve::{EvolutionVariant, PhasePolicy};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_ACCEPTANCE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qlga",
    about = "Quantum lattice-gas simulator for the free Dirac equation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration file (key = value with [sections]).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker thread count (overrides the config).
    #[arg(long)]
    threads: Option<usize>,
    /// Output format: csv, svg or both (overrides the config).
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a resolution sweep, fit the error slope, emit CSV/SVG.
    Converge(CommonArgs),
    /// Run the second-quantized equivalence suite.
    Equiv(CommonArgs),
    /// Print the operation-count table.
    Complexity {
        #[command(flatten)]
        common: CommonArgs,
        /// Update rule: basic, interleaved or symmetrized.
        #[arg(long)]
        variant: Option<String>,
        /// Comma-separated lattice edge sizes.
        #[arg(long, value_delimiter = ',')]
        l_list: Option<Vec<u64>>,
    },
    /// Evolve a single configuration, writing snapshots and a norm CSV.
    Evolve(CommonArgs),
}

fn load_config(common: &CommonArgs) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &common.out {
        cfg.out_dir = out.clone();
    }
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(Error::Usage("thread count must be positive".into()));
        }
        cfg.threads = threads;
    }
    if let Some(format) = &common.format {
        cfg.format = match format.as_str() {
            "csv" => OutputFormat::Csv,
            "svg" => OutputFormat::Svg,
            "both" => OutputFormat::Both,
            other => {
                return Err(Error::Usage(format!(
                    "unknown format '{other}' (csv|svg|both)"
                )))
            }
        };
    }
    Ok(cfg)
}

fn in_pool<T: Send>(threads: usize, work: impl FnOnce() -> T + Send) -> Result<T, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    Ok(pool.install(work))
}

fn parse_variant(name: &str) -> Result<EvolutionVariant, Error> {
    Ok(match name {
        "basic" => EvolutionVariant::Basic,
        "interleaved" => EvolutionVariant::Interleaved,
        "symmetrized" => EvolutionVariant::Symmetrized(PhasePolicy::Phase),
        other => return Err(Error::Usage(format!("unknown variant '{other}'"))),
    })
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Converge(common) => {
            let cfg = load_config(&common)?;
            let report = in_pool(cfg.threads, || run_convergence(&cfg))??;
            let csv_path =
                qlga::bench::report::write_convergence_outputs(&cfg, &report, &cfg.out_dir)?;
            for r in &report.records {
                println!(
                    "L={:<6} steps={:<8} err={:.6e} ops/step={}",
                    r.l, r.steps, r.l2_error, r.op_count
                );
            }
            println!(
                "fitted slope = {:.4} ({} points) -> {}",
                report.slope,
                report.records.len(),
                csv_path.display()
            );
            if report.convergence_failure {
                println!("convergence FAILURE: error did not decrease at any resolution");
                return Ok(EXIT_ACCEPTANCE);
            }
            if let Some(min) = cfg.slope_min {
                if report.slope < min {
                    println!("slope {:.4} below required minimum {min}", report.slope);
                    return Ok(EXIT_ACCEPTANCE);
                }
            }
            if let Some(max) = cfg.slope_max {
                if report.slope > max {
                    println!("slope {:.4} above allowed maximum {max}", report.slope);
                    return Ok(EXIT_ACCEPTANCE);
                }
            }
            Ok(0)
        }
        Command::Equiv(common) => {
            let cfg = load_config(&common)?;
            let report = in_pool(cfg.threads, || run_equivalence(&cfg))??;
            print!("{}", report.render());
            if report.all_pass() {
                println!("equivalence suite: all checks passed");
                Ok(0)
            } else {
                println!("equivalence suite: FAILURES present");
                Ok(EXIT_ACCEPTANCE)
            }
        }
        Command::Complexity {
            common,
            variant,
            l_list,
        } => {
            let cfg = load_config(&common)?;
            let variant = match variant {
                Some(name) => parse_variant(&name)?,
                None => cfg.variant_with_phase(),
            };
            let l_list = l_list.unwrap_or_else(|| cfg.complexity_l.clone());
            print!("{}", complexity_table(variant, &l_list)?);
            std::fs::create_dir_all(&cfg.out_dir)?;
            let path = cfg
                .out_dir
                .join(format!("complexity_{}.csv", variant.name()));
            std::fs::write(&path, complexity_csv(variant, &l_list)?)?;
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Evolve(common) => {
            let cfg = load_config(&common)?;
            let out_dir = cfg.out_dir.clone();
            let csv_path = in_pool(cfg.threads, || run_single(&cfg, &out_dir))??;
            println!("wrote {}", csv_path.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    // Exit codes: 0 success, 1 usage/config error, 2 acceptance failure.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
