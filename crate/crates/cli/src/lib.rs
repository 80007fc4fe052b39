//! Command-line pipeline for speckle inversion: corpus generation, training,
//! evaluation and the autocorrelation baseline.

pub mod commands;
pub mod config;
pub mod error;
pub mod pgm;

use std::path::PathBuf;

pub use config::RunConfig;
pub use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Simulate the (object, speckle) corpus.
    GenData,
    /// Train the reconstruction network.
    Train,
    /// Reconstruct held-out digits and letters, write images and metrics.
    Eval,
    /// Run autocorrelation + phase retrieval on the test speckles.
    Baseline,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub command: Command,
    pub config: PathBuf,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// Loads the config, applies overrides, and runs one command.
pub fn run(inv: &Invocation) -> Result<(), CliError> {
    let cfg = RunConfig::load(&inv.config)?.finalize(inv.out.as_deref());
    match inv.command {
        Command::GenData => commands::gen_data(&cfg, inv.seed).map(|s| println!("{s}")),
        Command::Train => commands::train(&cfg, inv.seed).map(|s| println!("{s}")),
        Command::Eval => commands::eval(&cfg).map(|s| println!("{s}")),
        Command::Baseline => commands::baseline(&cfg, inv.seed).map(|s| println!("{s}")),
    }
}

/// Reads `SPECKLE_THREADS` (unset means "let rayon decide").
pub fn thread_limit() -> Result<Option<usize>, CliError> {
    match std::env::var("SPECKLE_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::input(format!(
                "SPECKLE_THREADS must be a positive integer, got `{v}`"
            ))),
        },
    }
}
