use std::path::PathBuf;
use std::process::ExitCode;

use adspec_cli::{load_config, run, Command, Overrides};
use clap::Parser;

/// Regenerate eigenlevel-statistics data for adiabatic 3-SAT.
#[derive(Debug, Parser)]
#[command(name = "adspec", version)]
struct Cli {
    /// One of generate, spectrum, stats, entangle, gaps, flow.
    #[arg(value_parser = parse_command)]
    command: Command,
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; overrides `jobs` in the config.
    #[arg(long)]
    jobs: Option<usize>,
    /// Base seed; overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_command(s: &str) -> Result<Command, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let overrides = Overrides {
        out: cli.out,
        jobs: cli.jobs,
        seed: cli.seed,
    };
    let result = load_config(cli.command, &cli.config, std::env::vars(), &overrides)
        .and_then(|cfg| run(&cfg));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("adspec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
