use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lifi_orient::orientation::Family;
use lifi_orient_harness::{fit_file, load_config, run, RunConfig, Scenario, TableArtifact};

/// Orientation-aware LiFi channel statistics: fitting, tabulation,
/// handover sweeps and self-validation.
///
/// Tables are written as `<name>.csv` plus a `<name>.meta.json` sidecar
/// with the config hash, seed and source revision. Exit status: 0 on
/// success, 1 for invalid input or failed validation checks, 2 for
/// runtime or numerical failures.
#[derive(Parser)]
#[command(name = "lifi-orient", version)]
struct Cli {
    /// Output directory for tables (falls back to the config's `output`,
    /// then `./out`).
    #[arg(long, global = true, env = "LIFI_ORIENT_OUT")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit truncated Laplace and Gaussian polar-angle models to an
    /// orientation CSV with columns t_seconds,alpha_deg,beta_deg,gamma_deg.
    Fit {
        csv: PathBuf,
        /// Fit a single family instead of both.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// JSON run config supplying defaults.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Tabulate a closed-form distribution on a grid for each configured UE.
    Tabulate {
        #[arg(value_enum)]
        what: Table,
        /// JSON run config; built-in defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Orientation-aware random waypoint simulations.
    Orwp {
        #[command(subcommand)]
        command: OrwpCommand,
    },
    /// Run the Monte Carlo and quadrature self-checks.
    Validate {
        /// Master seed for all Monte Carlo streams.
        #[arg(long)]
        seed: u64,
        /// JSON run config supplying geometry, models and tolerances.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the default run config as JSON.
    Defaults,
}

#[derive(Subcommand)]
enum OrwpCommand {
    /// Handover rate against room length and speed, for an upright device
    /// and for the correlated Gaussian polar-angle process.
    Sweep {
        /// JSON run config; its `orwp` block sets the grid.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the number of legs per grid point.
        #[arg(long)]
        runs: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    /// Incidence-angle cosine, exact and approximate.
    Cospsi,
    /// LOS channel gain.
    Gain,
    /// Received SNR.
    Snr,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Laplace,
    Gaussian,
}

fn config_or_default(path: Option<&Path>) -> lifi_orient_harness::Result<RunConfig> {
    match path {
        Some(p) => load_config(p),
        None => Ok(RunConfig::default()),
    }
}

fn execute(cli: Cli) -> lifi_orient_harness::Result<Option<TableArtifact>> {
    let (artifact, output) = match cli.command {
        Command::Defaults => {
            println!("{}", RunConfig::default().to_json());
            return Ok(None);
        }
        Command::Fit {
            csv,
            family,
            config,
        } => {
            let cfg = config_or_default(config.as_deref())?;
            let family = family.map(|f| match f {
                FamilyArg::Laplace => Family::Laplace,
                FamilyArg::Gaussian => Family::Gaussian,
            });
            (fit_file(&csv, family, &cfg)?, cfg.output)
        }
        Command::Tabulate { what, config } => {
            let mut cfg = config_or_default(config.as_deref())?;
            cfg.scenario = match what {
                Table::Cospsi => Scenario::TabulateCosPsi,
                Table::Gain => Scenario::TabulateGain,
                Table::Snr => Scenario::TabulateSnr,
            };
            (run(&cfg)?, cfg.output)
        }
        Command::Orwp {
            command: OrwpCommand::Sweep { config, seed, runs },
        } => {
            let mut cfg = config_or_default(config.as_deref())?;
            cfg.scenario = Scenario::OrwpSweep;
            cfg.seed = seed.or(cfg.seed);
            if let Some(n) = runs {
                cfg.orwp.runs = n;
            }
            (run(&cfg)?, cfg.output)
        }
        Command::Validate { seed, config } => {
            let mut cfg = config_or_default(config.as_deref())?;
            cfg.scenario = Scenario::Validate;
            cfg.seed = Some(seed);
            (run(&cfg)?, cfg.output)
        }
    };
    let dir = cli.out.or(output).unwrap_or_else(|| PathBuf::from("out"));
    let path = artifact.write(&dir)?;
    println!(
        "wrote {} ({} rows, config {})",
        path.display(),
        artifact.rows.len(),
        &artifact.provenance.config_hash[..12]
    );
    Ok(Some(artifact))
}

fn print_checks(t: &TableArtifact) {
    let (name, stat, pass, detail) = (
        t.column("check").unwrap(),
        t.column("statistic").unwrap(),
        t.column("passed").unwrap(),
        t.column("detail").unwrap(),
    );
    for row in &t.rows {
        let verdict = if row[pass].to_string() == "true" {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "[{verdict}] {:<24} {:>12} {}",
            row[name].to_string(),
            format!(
                "{:.4e}",
                row[stat].to_string().parse::<f64>().unwrap_or(f64::NAN)
            ),
            row[detail]
        );
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(Some(t)) if t.passed.is_some() => {
            print_checks(&t);
            if t.passed == Some(true) {
                ExitCode::SUCCESS
            } else {
                eprintln!("validation failed");
                ExitCode::from(1)
            }
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
