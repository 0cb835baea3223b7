use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rieszprob_cli::{cmd_converge, cmd_verify, Experiment, EXIT_ASSERTION, EXIT_CONFIG, EXIT_PASS};

/// Verification suites and convergence experiments for conditional
/// probability on finite Riesz spaces.
#[derive(Parser)]
#[command(name = "rieszprob", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact-identity suite and print a JSON report.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed for all randomized instances (overrides the config).
        #[arg(long)]
        seed: Option<u64>,
        /// Instances per randomized family (overrides the config).
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Run a convergence experiment and emit its CSV table.
    Converge {
        /// lln, weak-lln, poisson or exp-limit.
        #[arg(long)]
        experiment: Experiment,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for `<experiment>.csv`; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = e.print();
            return exit(code);
        }
    };

    match cli.command {
        Command::Verify { config, seed, trials } => match cmd_verify(config.as_deref(), seed, trials) {
            Ok(report) => {
                print!("{}", report.to_json());
                for check in report.checks.iter().filter(|c| !c.passed) {
                    eprintln!("FAIL {}: {}", check.name, check.first_failure.as_deref().unwrap_or("no instances"));
                }
                exit(if report.passed { EXIT_PASS } else { EXIT_ASSERTION })
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit(e.exit_code())
            }
        },
        Command::Converge { experiment, config, out } => {
            match cmd_converge(experiment, config.as_deref(), out.as_deref()) {
                Ok((table, written)) => {
                    match written {
                        Some(path) => eprintln!("wrote {}", path.display()),
                        None => print!("{}", table.to_csv()),
                    }
                    for note in &table.notes {
                        eprintln!("note: {note}");
                    }
                    for failure in &table.failures {
                        eprintln!("FAIL {failure}");
                    }
                    exit(if table.passed() { EXIT_PASS } else { EXIT_ASSERTION })
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit(e.exit_code())
                }
            }
        }
    }
}
