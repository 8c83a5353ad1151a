use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gvoa::cli::{error_code, load_and_run, Overrides};

#[derive(Parser)]
#[command(name = "gvoa", version, about = "Exact verification of Heisenberg intertwining operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites of a scenario file.
    Verify {
        /// TOML scenario.
        config: PathBuf,
        /// Run only this suite; repeatable.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long)]
        window: Option<i64>,
        #[arg(long)]
        cutoff: Option<usize>,
        /// Odd branch parameter for `(-1)^kappa`.
        #[arg(long = "branch-N", allow_negative_numbers = true)]
        branch_n: Option<i64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let Command::Verify { config, suites, window, cutoff, branch_n, seed, report } = Cli::parse().command;
    let overrides = Overrides { suites, window, cutoff, branch_n, seed };
    let outcome = match load_and_run(&config, &overrides) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_code(&e) as u8);
        }
    };
    let text = outcome.render(&config);
    match &report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    let code = outcome.exit_code();
    eprintln!("{} (exit {code})", outcome.summary());
    ExitCode::from(code as u8)
}
