//! Batch front end for `embedlab-core`: generate expanders, certify them,
//! solve the measure game, build embeddings and plot the results.
//!
//! Every subcommand writes its artifacts into `--out` (default `.`) and a
//! short human summary to stdout. Exit status: 0 success, 1 failed internal
//! check, 2 bad parameters or infeasible request, 3 file problems.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod plot;

pub use config::{RunConfig, Settings};
pub use error::{CliError, CliResult, EXIT_DOMAIN, EXIT_INVARIANT, EXIT_IO, EXIT_OK};

#[derive(Debug, Parser)]
#[command(
    name = "embedlab",
    version,
    about = "Finite-scale metric embedding laboratory"
)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Checking tolerance; each subcommand documents what it controls.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// JSON file with "seed" and optional "tol", "out" and "params".
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample and certify a family of random regular expanders.
    GenExpander(commands::expander::GenExpanderArgs),
    /// Build a finite metric space from a graph, a cloud, a union or a sample.
    Metric(commands::metric::MetricArgs),
    /// Certify the Cheeger constant of a regular graph.
    Cheeger(commands::expander::CheegerArgs),
    /// Solve for the optimal far-pair measure of a space.
    Certificate(commands::certificate::CertificateArgs),
    /// Build an explicit embedding and measure its moduli.
    Embed(commands::embed::EmbedArgs),
    /// Re-bin the moduli of a stored embedding.
    Moduli(commands::embed::ModuliArgs),
    /// Poincaré bounds and compression caps for a certified family.
    Obstruct(commands::expander::ObstructArgs),
    /// Render CSV tables as SVG charts.
    Plot(commands::plot::PlotArgs),
}

/// Parse `args` (including the program name) and execute; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> CliResult<()> {
    let config = cli.config.as_deref().map(RunConfig::load).transpose()?;
    let settings = Settings::resolve(cli.seed, cli.out, cli.tol, config)?;
    match cli.command {
        Command::GenExpander(a) => commands::expander::gen_expander(a, &settings),
        Command::Metric(a) => commands::metric::metric(a, &settings),
        Command::Cheeger(a) => commands::expander::cheeger(a, &settings),
        Command::Certificate(a) => commands::certificate::certificate(a, &settings),
        Command::Embed(a) => commands::embed::embed(a, &settings),
        Command::Moduli(a) => commands::embed::moduli(a, &settings),
        Command::Obstruct(a) => commands::expander::obstruct(a, &settings),
        Command::Plot(a) => commands::plot::plot(a, &settings),
    }
}
