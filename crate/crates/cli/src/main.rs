use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use speckle_invert::{run, thread_limit, CliError, Command, Invocation};

/// Reconstruct objects hidden behind a simulated scattering slab.
#[derive(Debug, Parser)]
#[command(name = "speckle-invert", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Run configuration (flat key = value file).
    #[arg(long)]
    config: PathBuf,
    /// Seed override for the command's own sampling (split, training or retrieval).
    #[arg(long)]
    seed: Option<u64>,
    /// Output root; relative output paths in the config resolve against it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = thread_limit().and_then(|limit| {
        if let Some(n) = limit {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::new(1, format!("thread pool: {e}")))?;
        }
        run(&Invocation {
            command: cli.command,
            config: cli.config,
            seed: cli.seed,
            out: cli.out,
        })
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
