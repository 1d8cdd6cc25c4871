use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vpp_ffr_cli::commands::parse_resolution;
use vpp_ffr_cli::{cmd_allocate, cmd_pareto, cmd_region, cmd_requirements, cmd_simulate, CliError, Format, Scenario, Which};

/// VPP frequency-regulation requirements and IBR allocation.
#[derive(Parser)]
#[command(name = "vpp-ffr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the scenario's sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the scenario's number of weight samples.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Frequency response time series (CSV by default).
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Which::Both)]
        which: Which,
        /// Write every n-th integration step.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Required VPP inertia and damping.
    Requirements {
        #[command(flatten)]
        common: Common,
    },
    /// Allocate the requirement across IBRs by Nash bargaining.
    Allocate {
        #[command(flatten)]
        common: Common,
    },
    /// Pareto front of the allocation problem.
    Pareto {
        #[command(flatten)]
        common: Common,
    },
    /// Feasibility map over (H_vpp, D_vpp) (CSV by default).
    Region {
        #[command(flatten)]
        common: Common,
        /// Grid size, `N` or `NxM`.
        #[arg(long, default_value = "21x21", value_parser = parse_resolution)]
        resolution: (usize, usize),
        /// Append the requirement point as a final row.
        #[arg(long)]
        include_required: bool,
    },
}

fn load(c: &Common) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(&c.scenario)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", c.scenario.display())))?;
    let mut s = Scenario::from_json(&text)?;
    if let Some(seed) = c.seed {
        s.sampling.seed = seed;
    }
    if let Some(n) = c.samples {
        s.sampling.n_samples = n;
    }
    Ok(s)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::validation(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, text) = match &cli.command {
        Command::Simulate { common, which, stride } => {
            let s = load(common)?;
            (common, cmd_simulate(&s, *which, *stride, common.format.unwrap_or(Format::Csv))?)
        }
        Command::Requirements { common } => (common, cmd_requirements(&load(common)?, common.format.unwrap_or_default())?),
        Command::Allocate { common } => (common, cmd_allocate(&load(common)?, common.format.unwrap_or_default())?),
        Command::Pareto { common } => (common, cmd_pareto(&load(common)?, common.format.unwrap_or_default())?),
        Command::Region {
            common,
            resolution: (nh, nd),
            include_required,
        } => {
            let s = load(common)?;
            let f = common.format.unwrap_or(Format::Csv);
            (common, cmd_region(&s, *nh, *nd, *include_required, f)?)
        }
    };
    emit(common.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            eprintln!("{}", CliError::validation(e.to_string().trim_end()).to_json());
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code() as u8)
        }
    }
}
