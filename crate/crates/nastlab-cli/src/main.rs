//! Batch front end for the nastlab library: every subcommand reads one JSON
//! configuration (flags override file keys), writes one output document to
//! stdout or `output.path`, and exits 0 on success, 2 when a computation
//! completed but an invariant check failed or a result carries a warning,
//! 64 on configuration or usage errors, and 1 on internal errors. Output is
//! byte-deterministic except for the reported `runtime_ms` timings.

mod commands;
mod config;
mod fmt;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use config::OutputConfig;

/// Error classes with their exit codes: schema and value problems are
/// `Config` (64), well-formed requests the mathematics refuses are
/// `Refused` (2), everything else is `Internal` (1).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Refused(String),
    Internal(String),
}

/// A rendered output document plus the warnings that accompany it; any
/// warning turns the exit status to 2 without suppressing the output.
pub struct Outcome {
    pub content: String,
    pub warnings: Vec<String>,
}

#[derive(Parser)]
#[command(
    name = "nastlab",
    version,
    about = "Numerical laboratory for the operator-form non-Abelian Stokes theorem: \
             surface-ordered holonomy checks, exact 2D Yang-Mills loops, Chern-Simons \
             monodromy and skein data, and Seifert lasso words"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// JSON run configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// write the output document here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// output format: csv, json, or text (command-dependent default)
    #[arg(long, global = true)]
    format: Option<String>,

    /// gauge group: su2 or su3
    #[arg(long, global = true)]
    group: Option<String>,

    /// representation: fundamental, adjoint, or spin(j)
    #[arg(long, global = true)]
    rep: Option<String>,

    /// Chern-Simons level k
    #[arg(long, global = true)]
    level: Option<f64>,

    /// Seifert surface genus
    #[arg(long, global = true)]
    genus: Option<u32>,

    /// Wilson loop area
    #[arg(long, global = true)]
    area: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// convergence sweep of ‖P exp(i∮A) − 𝒫 exp(i∫𝓕)‖ over grid.N_list
    Nast,
    /// exact 2D Yang-Mills Wilson-loop expectations (block calculus for overlaps)
    Wilson2d,
    /// two-puncture monodromy, braiding square root, and skein data at level k
    Monodromy,
    /// coefficients of the quadratic skein relation a·B + b·1 + c·B⁻¹ = 0
    Skein,
    /// genus-g Seifert lasso decomposition verified by free reduction
    Seifert,
    /// the standard quantization check battery (deterministic inputs)
    Checks,
    /// flat connection with nontrivial holonomy around the annulus hole
    FlatDemo,
}

/// Fold command-line flags into the configuration; flags take precedence.
fn apply_overrides(cfg: &mut config::RunConfig, cli: &Cli) {
    if cli.group.is_some() {
        cfg.group = cli.group.clone();
    }
    if cli.rep.is_some() {
        cfg.representation = cli.rep.clone();
    }
    if cli.level.is_some() {
        cfg.level = cli.level;
    }
    if cli.genus.is_some() {
        cfg.genus = cli.genus;
    }
    if cli.area.is_some() {
        cfg.area = cli.area;
    }
    if cli.format.is_some() || cli.out.is_some() {
        let out = cfg.output.get_or_insert_with(OutputConfig::default);
        if cli.format.is_some() {
            out.format = cli.format.clone();
        }
        if let Some(p) = &cli.out {
            out.path = Some(p.display().to_string());
        }
    }
}

fn run(cli: &Cli) -> Result<Vec<String>, CliError> {
    let mut cfg = config::load(cli.config.as_deref())?;
    apply_overrides(&mut cfg, cli);

    let outcome = match cli.command {
        Cmd::Nast => commands::nast(&cfg),
        Cmd::Wilson2d => commands::wilson2d(&cfg),
        Cmd::Monodromy => commands::monodromy(&cfg),
        Cmd::Skein => commands::skein(&cfg),
        Cmd::Seifert => commands::seifert(&cfg),
        Cmd::Checks => commands::checks(&cfg),
        Cmd::FlatDemo => commands::flat_demo(&cfg),
    }?;

    match cfg.output.as_ref().and_then(|o| o.path.as_deref()) {
        Some(path) => fs::write(path, &outcome.content)
            .map_err(|e| CliError::Internal(format!("cannot write {path}: {e}")))?,
        None => io::stdout()
            .write_all(outcome.content.as_bytes())
            .map_err(|e| CliError::Internal(format!("cannot write stdout: {e}")))?,
    }
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    Ok(outcome.warnings)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version go to stdout with status 0; usage errors are
            // configuration errors in this tool's exit-code scheme
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(warnings) if warnings.is_empty() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(2),
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(64)
        }
        Err(CliError::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
