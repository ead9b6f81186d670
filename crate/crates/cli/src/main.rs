use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use scissor_cli::{cmd_analyze, cmd_optimize, cmd_sweep, cmd_verify, Format};

#[derive(Parser)]
#[command(
    name = "scissor",
    version,
    about = "Scissor-lift actuator force and placement analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Height, actuator length, velocity ratio and force at one angle
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "theta-deg", allow_negative_numbers = true)]
        theta_deg: f64,
    },
    /// Evaluate the configured placement over the operating range
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank candidate placements and write a JSON report
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the closed forms against the coordinate-geometry oracle
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Analyze { config, theta_deg } => cmd_analyze(&config, theta_deg),
        Command::Sweep {
            config,
            samples,
            format,
            out,
        } => cmd_sweep(&config, samples, format, &out),
        Command::Optimize { config, out } => cmd_optimize(&config, &out),
        Command::Verify {
            config,
            trials,
            seed,
        } => cmd_verify(&config, trials, seed),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
