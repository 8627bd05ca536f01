use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mbsim_cli::{check, emit_plot_data, load_config, run, sweep, CliError, Variation};

#[derive(Parser)]
#[command(
    name = "mbsim",
    version,
    about = "Mean-field Maxwell-Bloch simulator for dense cold gases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation.
    Run { config: PathBuf },
    /// Run one simulation per value of a config key, concurrently.
    Sweep {
        config: PathBuf,
        /// `section.key=v1,v2,...`
        #[arg(long)]
        vary: String,
    },
    /// Write plot-ready columns of a quantity from snapshot files.
    Plotdata {
        /// Glob selecting snapshot files.
        snapshots: String,
        /// density, intensity, n2, V, delta_l or phase.
        #[arg(long)]
        quantity: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a config and print the regime report at t = 0.
    Check { config: PathBuf },
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("mbsim: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::Run { config } => {
            let outcome = match load_config(&config).and_then(|c| run(&c)) {
                Ok(o) => o,
                Err(e) => return fail(&e),
            };
            match &outcome.error {
                None => {
                    println!(
                        "{}: {} steps, {} snapshots",
                        outcome.directory.display(),
                        outcome.steps_completed,
                        outcome.snapshots.len()
                    );
                    ExitCode::SUCCESS
                }
                Some(e) => {
                    eprintln!(
                        "mbsim: aborted after {} steps, checkpoint in {}",
                        outcome.steps_completed,
                        outcome.directory.display()
                    );
                    fail(e)
                }
            }
        }
        Command::Sweep { config, vary } => {
            let results = match Variation::parse(&vary).and_then(|v| sweep(&config, &v)) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            let mut code = 0;
            for (label, result) in results {
                let err = match result {
                    Ok(o) => {
                        println!(
                            "{label}: {} steps -> {}",
                            o.steps_completed,
                            o.directory.display()
                        );
                        o.error
                    }
                    Err(e) => Some(e),
                };
                if let Some(e) = err {
                    eprintln!("{label}: {e}");
                    code = code.max(e.exit_code());
                }
            }
            ExitCode::from(code as u8)
        }
        Command::Plotdata {
            snapshots,
            quantity,
            out,
        } => match emit_plot_data(&snapshots, &quantity, &out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(&e),
        },
        Command::Check { config } => match load_config(&config).and_then(|c| check(&c)) {
            Ok(report) => {
                println!("{}", serde_json::to_string_pretty(&report).expect("json"));
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
    }
}
