use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hoskip_cli::{run, Command, ExperimentConfig, Overrides};

#[derive(Parser)]
#[command(name = "hoskip", version, about = "Handover skipping in dense cellular networks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Cmd {
    /// Coverage probability per link state: analysis and Monte Carlo.
    Coverage,
    /// Average throughput against velocity, with crossover velocities.
    Throughput,
    /// Fraction of time lost to handovers.
    Hocost,
    /// Check the model against closed forms, reported values and simulation.
    Validate,
}

#[derive(Args)]
struct Common {
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo trials per static coverage point.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also report throughput in Mbps.
    #[arg(long, global = true)]
    bits: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Coverage => Command::Coverage,
        Cmd::Throughput => Command::Throughput,
        Cmd::Hocost => Command::HoCost,
        Cmd::Validate => Command::Validate,
    };
    let overrides = Overrides {
        seed: cli.common.seed,
        trials: cli.common.trials,
        out: cli.common.out,
        bits: cli.common.bits,
    };
    let result = ExperimentConfig::load(cli.common.config.as_deref(), &overrides).and_then(|cfg| run(command, &cfg));
    match result {
        Ok(summary) => {
            for line in &summary.messages {
                println!("{line}");
            }
            if summary.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("validation failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
