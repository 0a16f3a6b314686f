//! `cloakforge`: scattering coefficients, low-frequency expansions, cloak
//! design and transformation-optics export from JSON run configurations.
//!
//! Exit codes: 0 success, 2 configuration error, 3 computation error,
//! 4 verification failure.

mod commands;
mod config;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use commands::Output;
use config::{load, ConfigError, DesignConfig, FiguresConfig};

#[derive(Parser)]
#[command(name = "cloakforge", version, about = "Layered near-cloak design for the 2D Helmholtz equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (a directory for `figures`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Overrides the design seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for restarts and gradients.
    #[arg(long, global = true, env = "CLOAKFORGE_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// W_n at each requested frequency.
    Coeffs,
    /// Low-frequency expansion coefficients of an insulated structure.
    Expand,
    /// Optimize layer materials (and optionally radii).
    Design,
    /// |W_n(t)| for n = 0..4 over a list of t.
    Sweep,
    /// Pushed-forward material tensors on a polar grid.
    Pushforward,
    /// Optical theorem, scaling identity and cross-validation checks.
    Verify,
    /// Coefficient and sweep figures with their data tables.
    Figures,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

enum Status {
    Ok,
    VerificationFailed,
}

fn required(cli: &Cli) -> Result<(&Path, PathBuf), ConfigError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| ConfigError("--config <path> is required for this command".into()))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((path, base))
}

fn write(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn data(o: &Output, format: Format) -> String {
    match format {
        Format::Json => output::pretty(o.json.as_ref().unwrap_or(&o.table.to_json())),
        _ => o.table.to_csv(),
    }
}

fn emit(cli: &Cli, o: &Output) -> Result<()> {
    match cli.format {
        Format::Csv | Format::Json => write(cli.out.as_deref(), &data(o, cli.format)),
        Format::Svg => {
            if o.charts.is_empty() {
                return Err(ConfigError("this command has no figure; use csv or json".into()).into());
            }
            let path = cli
                .out
                .as_deref()
                .ok_or_else(|| ConfigError("--format svg needs --out <file.svg>".into()))?;
            write(Some(path), &svg::render(&o.charts))?;
            write(Some(&path.with_extension("csv")), &o.table.to_csv())
        }
    }
}

fn run(cli: &Cli) -> Result<Status> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(ConfigError("--threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let out = match cli.command {
        Command::Coeffs => {
            let (p, base) = required(cli)?;
            commands::coeffs(&load(p)?, &base)?
        }
        Command::Expand => {
            let (p, base) = required(cli)?;
            commands::expand(&load(p)?, &base)?
        }
        Command::Sweep => {
            let (p, base) = required(cli)?;
            commands::sweep(&load(p)?, &base)?
        }
        Command::Pushforward => {
            let (p, base) = required(cli)?;
            commands::pushforward(&load(p)?, &base)?
        }
        Command::Verify => {
            let (p, base) = required(cli)?;
            commands::verify(&load(p)?, &base)?
        }
        Command::Design => {
            let c: DesignConfig = match &cli.config {
                Some(p) => load(p)?,
                None => DesignConfig::default(),
            };
            commands::design_cmd(&c, cli.seed)?
        }
        Command::Figures => {
            let c: FiguresConfig = match &cli.config {
                Some(p) => load(p)?,
                None => FiguresConfig::default(),
            };
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
            let f = commands::figures(&c)?;
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let ext = if cli.format == Format::Json { "json" } else { "csv" };
            for (name, o) in [("figure1", &f.coefficients), ("figure2", &f.sweep)] {
                write(Some(&dir.join(format!("{name}.svg"))), &svg::render(&o.charts))?;
                write(Some(&dir.join(format!("{name}.{ext}"))), &data(o, cli.format))?;
            }
            return Ok(Status::Ok);
        }
    };
    emit(cli, &out)?;
    Ok(if out.verified { Status::Ok } else { Status::VerificationFailed })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => {
            eprintln!("verification failed");
            ExitCode::from(4)
        }
        Err(e) => {
            if let Some(c) = e.downcast_ref::<ConfigError>() {
                eprintln!("config error: {c}");
                ExitCode::from(2)
            } else if let Some(c) = e.downcast_ref::<cloakforge::Error>() {
                eprintln!("computation error ({}): {c}", c.name());
                ExitCode::from(3)
            } else {
                eprintln!("error: {e:#}");
                ExitCode::from(3)
            }
        }
    }
}
