use clap::Parser;

use modclust_cli::args::{Cli, Command};
use modclust_cli::commands;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };

    // MODCLUST_THREADS caps worker concurrency; default is the available
    // parallelism.
    if let Ok(threads) = std::env::var("MODCLUST_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("warning: could not apply MODCLUST_THREADS: {e}");
                }
            }
            _ => {
                eprintln!("error: MODCLUST_THREADS must be a positive integer");
                std::process::exit(1);
            }
        }
    }

    let outcome = match &cli.command {
        Command::Fit(args) => commands::run_fit(args),
        Command::Grid(args) => commands::run_grid(args),
        Command::Simulate(args) => commands::run_simulate(args),
        Command::Validity(args) => commands::run_validity(args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
