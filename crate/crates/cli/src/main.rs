mod args;
mod commands;
mod error;

use std::process::ExitCode;

use args::{Cli, Command};
use clap::error::ErrorKind;
use clap::Parser;
use error::CliResult;

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen { kind, params, rng_seed, out } => commands::gen(kind, &params, rng_seed, out.as_ref()),
        Command::SeedSet { graph, eta, rng_seed, out } => commands::seed_set(&graph, eta, rng_seed, out.as_ref()),
        Command::Sample { graph, colors, samples, rng_seed, seed_set, trace, format } => {
            commands::sample(&graph, colors, samples, rng_seed, seed_set.as_ref(), trace, format)
        }
        Command::Enumerate { graph, colors, list } => commands::enumerate(&graph, colors, list),
        Command::Uniformity { graph, colors, samples, rng_seed, alpha, max_tv } => {
            commands::uniformity(&graph, colors, samples, rng_seed, alpha, max_tv)
        }
        Command::UpdateTest { kind, config, trials, rng_seed } => commands::update_test(kind, &config, trials, rng_seed),
        Command::Bench { graph, colors, reps, rng_seed } => commands::bench(&graph, colors, reps, rng_seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
