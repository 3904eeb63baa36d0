mod commands;
mod record;

use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::Value;

use record::{RunRecord, BUILD};
use stodom::Error;

#[derive(Parser, Debug)]
#[command(name = "stodom", version, about = "Stochastic domination experiments and checkers")]
struct Cli {
    /// Cap on worker threads; defaults to all available cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the payload as CSV instead of the JSON run record.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Exact domination and FKG checks on {0,1}^n.
    #[command(subcommand)]
    Dom(commands::dom::Dom),
    /// Exchangeable measures given by u-vectors or mixing laws.
    #[command(subcommand)]
    Exch(commands::exch::Exch),
    /// Contact-process estimators.
    #[command(subcommand)]
    Contact(commands::contact::Contact),
    /// Ising thresholds on the tree and on Z^2.
    #[command(subcommand)]
    Ising(commands::ising::Ising),
    /// Site percolation of sampled configurations.
    #[command(subcommand)]
    Perc(commands::perc::Perc),
}

/// What a command hands back for the run record.
pub struct Outcome {
    pub command: &'static str,
    pub params: Value,
    pub seed: Option<u64>,
    pub result: Value,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parameter(_) | Error::Size(_) => 2,
        Error::Numerical(_) => 3,
        Error::Hypothesis(_) | Error::Contract(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
                | ErrorKind::UnknownArgument => 1,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    if let Some(threads) = cli.threads {
        if let Err(e) = stodom::exec::configure_threads(threads) {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    }

    let start = Instant::now();
    let outcome = match cli.command {
        Group::Dom(c) => commands::dom::run(c),
        Group::Exch(c) => commands::exch::run(c),
        Group::Contact(c) => commands::contact::run(c),
        Group::Ising(c) => commands::ising::run(c),
        Group::Perc(c) => commands::perc::run(c),
    };
    let wall_time = start.elapsed().as_secs_f64();

    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };

    let stdout = std::io::stdout();
    if cli.csv {
        if let Err(e) = record::write_csv(&outcome.result, stdout.lock()) {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    } else {
        let rec = RunRecord {
            command: outcome.command.to_string(),
            params: outcome.params,
            seed: outcome.seed,
            build: BUILD,
            wall_time,
            result: outcome.result,
        };
        let mut out = stdout.lock();
        let _ = serde_json::to_writer_pretty(&mut out, &rec);
        let _ = writeln!(out);
    }
    ExitCode::SUCCESS
}
