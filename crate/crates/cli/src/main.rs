mod commands;
mod config;
mod error;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use error::{CliError, EXIT_FAIL, EXIT_PASS};

#[derive(Parser)]
#[command(name = "sitterloc", version, about = "Newton-Wigner localization on 2+1 de Sitter space")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

/// Flags shared by every command; they override values from `--config`.
#[derive(Args)]
struct Common {
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Mass parameter M = α μ.
    #[arg(long = "M", global = true)]
    mass: Option<f64>,
    #[arg(long, global = true)]
    lmax: Option<usize>,
    /// Quadrature grid as N_THETAxN_PHI, e.g. 16x32.
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Start time in units of α.
    #[arg(long, global = true)]
    t0: Option<f64>,
    /// End time in units of α.
    #[arg(long, global = true)]
    t1: Option<f64>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Directory for CSV/JSON data files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args)]
struct PacketArgs {
    /// heat (localized heat-kernel packet) or random.
    #[arg(long)]
    packet: Option<String>,
    #[arg(long)]
    theta0: Option<f64>,
    #[arg(long)]
    phi0: Option<f64>,
    /// Heat-kernel width in units of l.
    #[arg(long)]
    width: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Report the representation series, ν and the Casimir q = M².
    Classify,
    /// Gram matrix of the modes under the Klein–Gordon product at t0.
    Ortho {
        /// positive, negative, cross or all.
        #[arg(long)]
        sector: Option<String>,
    },
    /// Finite-difference Casimir estimates for every mode with l <= lmax.
    Casimir,
    /// Newton–Wigner densities and position expectations over [t0, t1].
    Evolve {
        #[command(flatten)]
        packet: PacketArgs,
    },
    /// Position expectation trace with route and parity checks.
    Position {
        /// State file with mode coefficients (JSON); a packet is used otherwise.
        #[arg(long)]
        state: Option<PathBuf>,
        #[command(flatten)]
        packet: PacketArgs,
    },
    /// Sign-ambiguity analysis: candidate profiles and delta-sequence peaks.
    Signdemo,
    /// Compare against a golden-value fixture pack.
    FixturesVerify {
        /// Path to the JSON fixture pack.
        path: PathBuf,
    },
}

fn overrides(cli: &Cli) -> BTreeMap<String, String> {
    let c = &cli.common;
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    };
    put("alpha", c.alpha.map(|v| v.to_string()));
    put("M", c.mass.map(|v| v.to_string()));
    put("lmax", c.lmax.map(|v| v.to_string()));
    put("grid", c.grid.clone());
    put("t0", c.t0.map(|v| v.to_string()));
    put("t1", c.t1.map(|v| v.to_string()));
    put("steps", c.steps.map(|v| v.to_string()));
    put("out", c.out.as_ref().map(|p| p.display().to_string()));
    put("tol", c.tol.map(|v| v.to_string()));
    put("seed", c.seed.map(|v| v.to_string()));
    let packet = match &cli.command {
        Command::Evolve { packet } => Some(packet),
        Command::Position { state, packet } => {
            put("state", state.as_ref().map(|p| p.display().to_string()));
            Some(packet)
        }
        Command::Ortho { sector } => {
            put("sector", sector.clone());
            None
        }
        _ => None,
    };
    if let Some(p) = packet {
        put("packet", p.packet.clone());
        put("theta0", p.theta0.map(|v| v.to_string()));
        put("phi0", p.phi0.map(|v| v.to_string()));
        put("width", p.width.map(|v| v.to_string()));
    }
    m
}

fn run(cli: &Cli) -> Result<commands::Report, CliError> {
    let mut map = match &cli.common.config {
        Some(path) => config::load_file(path)?,
        None => BTreeMap::new(),
    };
    map.extend(overrides(cli));
    let cfg = RunConfig::from_map(&map)?;
    match &cli.command {
        Command::Classify => commands::classify(&cfg),
        Command::Ortho { .. } => commands::ortho(&cfg),
        Command::Casimir => commands::casimir(&cfg),
        Command::Evolve { .. } => commands::evolve(&cfg),
        Command::Position { .. } => commands::position(&cfg),
        Command::Signdemo => commands::signdemo(&cfg),
        Command::FixturesVerify { path } => commands::fixtures_verify(&cfg, path),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", sitterloc::json::to_string(&report.json));
            ExitCode::from(if report.passed { EXIT_PASS } else { EXIT_FAIL })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
