use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rtbp_resonance::cli::{self, CliError, RunConfig, ScanKind};

#[derive(Parser)]
#[command(version, about = "Parametric instability zones of the planar circular restricted three-body problem")]
struct Args {
    /// Configuration file (`key = value` lines, `[section]` headers)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the CSV here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Reserved; every subcommand is deterministic
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulated zones at r = 5.2025
    Table1,
    /// Width, gap and overlap margin against eccentricity
    Fig1,
    /// Grid scan through one of the models
    Scan {
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Hill coefficients of the configured orbit
    Coeffs,
    /// Smallest overlapping zone order for circular orbits
    CriticalOrder,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Zones,
    Floquet,
    Rtbp,
    Overlap,
}

fn load(path: Option<&PathBuf>) -> Result<RunConfig, CliError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    Ok(cli::parse_config(&text)?)
}

fn run(args: &Args) -> Result<(), CliError> {
    let cfg = load(args.config.as_ref())?;
    let report = match &args.command {
        Command::Table1 => cli::cmd_table1(&cfg)?,
        Command::Fig1 => cli::cmd_fig1(&cfg)?,
        Command::Scan { kind } => {
            let kind = match kind {
                Kind::Zones => ScanKind::Zones,
                Kind::Floquet => ScanKind::Floquet,
                Kind::Rtbp => ScanKind::Rtbp,
                Kind::Overlap => ScanKind::Overlap,
            };
            cli::cmd_scan(&cfg, kind)?
        }
        Command::Coeffs => cli::cmd_coeffs(&cfg)?,
        Command::CriticalOrder => cli::cmd_critical_order(&cfg)?,
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match &args.out {
        Some(p) => std::fs::write(p, report.csv).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{}", report.csv);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
