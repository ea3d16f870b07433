use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use smithlab::{catalog, run, Overrides, RunError, ScenarioSpec, EXIT_ASSERTION, EXIT_IO, EXIT_OK};

/// Runs cross-product, field-gallery and bubble-tree scenarios and writes
/// CSV tables plus a JSON summary.
#[derive(Debug, Parser)]
#[command(name = "smithlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every scenario listed in a TOML scenario file.
    Run {
        spec: PathBuf,
        /// Seed for the randomized suites, replacing the file's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Report root, replacing the file's out_dir.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Comma-separated sequence indices for bubble runs.
        #[arg(long, value_delimiter = ',')]
        ladder: Option<Vec<usize>>,
        /// Grid resolution per axis.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Print the builtin scenarios as module, name and summary.
    List {
        /// Only scenarios of this module.
        #[arg(long)]
        module: Option<String>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.downcast_ref::<RunError>().map_or(EXIT_IO, RunError::exit_code))
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::List { module } => {
            let text = catalog::render(&catalog::list(module.as_deref()));
            std::io::stdout().write_all(text.as_bytes()).context("writing the catalog")?;
            Ok(EXIT_OK)
        }
        Command::Run { spec: path, seed, out_dir, ladder, grid } => {
            let mut spec = ScenarioSpec::load(&path)?;
            spec.apply(&Overrides { seed, out_dir, ladder, grid });
            spec.validate(&path)?;
            let outcome = run(&spec)?;
            let mut out = std::io::stdout().lock();
            for r in &outcome.reports {
                writeln!(out, "{}\t{}", r.scenario, if r.passed() { "pass" } else { "FAIL" })?;
            }
            writeln!(out, "reports in {}", outcome.root.display())?;
            Ok(if outcome.passed() { EXIT_OK } else { EXIT_ASSERTION })
        }
    }
}
