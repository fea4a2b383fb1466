//! `linklab` command-line tool: figure-reproduction sweeps, scenario
//! configuration, and Monte Carlo validation of the closed forms.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod config;
pub mod output;
pub mod sweep;
pub mod validate;

use sweep::{FamilySpec, GridSpec, SweepCommand};

/// CLI-level failure modes, mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, flags, or input files (exit 2).
    Config(String),
    /// A numerical operation failed at run time (exit 2).
    Run(String),
    /// The validation comparison found a disagreement (exit 1).
    ValidationFailed,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Run(m) => write!(f, "runtime error: {m}"),
            CliError::ValidationFailed => write!(f, "validation failed"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ValidationFailed => 1,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "linklab",
    about = "Link budget, fog-fading statistics, outage, and throughput for surface-relayed sub-THz links",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Scenario configuration file (flat [section] key = value format).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Override the swept variable: var:start:stop:count.
    #[arg(long, global = true)]
    pub sweep: Option<String>,

    /// Override the family variable: var:v1,v2,...
    #[arg(long, global = true)]
    pub family: Option<String>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// RNG seed for Monte Carlo commands.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub samples: u64,

    /// Output format.
    #[arg(long, global = true, default_value = "csv", value_parser = ["csv", "json"])]
    pub format: String,

    /// Directory of HITRAN .par files overriding the bundled catalog
    /// (also settable via LINKLAB_CATALOG_DIR).
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Command {
    /// Geometric loss vs frequency (family: surface size).
    PathlossF,
    /// Geometric loss vs TX-surface distance at constant span (family: frequency).
    PathlossD1,
    /// Outage probability vs frequency, transmit power folded into rho.
    OutageF,
    /// Outage probability vs normalized rho/gamma_th (family: hop distance).
    OutageRho,
    /// Outage probability vs surface placement (family: rho/gamma_th).
    OutageD1,
    /// Outage probability vs total EVM (family: SDNR threshold).
    OutageKappa,
    /// Throughput-to-bandwidth vs spectral efficiency (family: rho).
    ThroughputRt,
    /// Throughput-to-bandwidth vs incidence angle, physical rho (family: EVM).
    ThroughputPsi,
    /// Throughput-to-bandwidth vs surface placement, physical rho (family: angle).
    ThroughputD1,
    /// Closed-form outage vs Monte Carlo on the default scenario matrix.
    Validate,
}

impl Command {
    fn as_sweep(self) -> Option<SweepCommand> {
        match self {
            Command::PathlossF => Some(SweepCommand::PathlossF),
            Command::PathlossD1 => Some(SweepCommand::PathlossD1),
            Command::OutageF => Some(SweepCommand::OutageF),
            Command::OutageRho => Some(SweepCommand::OutageRho),
            Command::OutageD1 => Some(SweepCommand::OutageD1),
            Command::OutageKappa => Some(SweepCommand::OutageKappa),
            Command::ThroughputRt => Some(SweepCommand::ThroughputRt),
            Command::ThroughputPsi => Some(SweepCommand::ThroughputPsi),
            Command::ThroughputD1 => Some(SweepCommand::ThroughputD1),
            Command::Validate => None,
        }
    }
}

fn emit(cli: &Cli, content: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Run the parsed command; returns the process exit code.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => config::load_config(path)?,
        None => config::ScenarioConfig::default(),
    };

    match cli.command.as_sweep() {
        Some(sweep_cmd) => {
            let grid = match &cli.sweep {
                Some(s) => GridSpec::parse(s)?,
                None => sweep_cmd.default_grid(),
            };
            let family = match &cli.family {
                Some(s) => Some(FamilySpec::parse(s)?),
                None => sweep_cmd.default_family(),
            };
            let catalog = cfg.load_catalog(cli.catalog.as_deref())?;
            let table = sweep::run_sweep(sweep_cmd, &cfg, &grid, family.as_ref(), &catalog)?;
            let content = if cli.format == "json" {
                table.to_json()
            } else {
                table.to_csv()
            };
            emit(cli, &content)
        }
        None => {
            if cli.samples < 1_000 {
                return Err(CliError::Config(format!(
                    "validate needs at least 1000 samples, got {}",
                    cli.samples
                )));
            }
            let rows = validate::run_validation(cli.samples, cli.seed);
            let table = validate::report_table(&rows);
            let content = if cli.format == "json" {
                table.to_json()
            } else {
                table.to_csv()
            };
            emit(cli, &content)?;
            if rows.iter().all(|r| r.pass) {
                Ok(())
            } else {
                Err(CliError::ValidationFailed)
            }
        }
    }
}
