mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "spgraph", version, about = "Single-peakedness on graphs: recognition, minimal graphs, Mallows experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a .soc profile is single-peaked on a structured graph.
    Recognize {
        file: PathBuf,
        /// axis, tree, cycle, pseudotree, auto, or any registered recognizer.
        #[arg(long, default_value = "auto")]
        structure: String,
    },
    /// Find a compatible graph with the fewest edges or the smallest maximum degree.
    Minimize {
        file: PathBuf,
        /// edges or degree.
        #[arg(long, default_value = "edges")]
        objective: String,
        /// bb, brute, or export (write the integer program as LP text).
        #[arg(long, default_value = "bb")]
        engine: String,
        /// Seconds before branch and bound gives up proving optimality.
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        /// Export target, or a CSV file that receives one result row.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mallows sampling and density analysis.
    Mallows {
        #[command(subcommand)]
        command: MallowsCommand,
    },
}

#[derive(Debug, Subcommand)]
enum MallowsCommand {
    /// Draw a profile centred on the identity ranking and write it as .soc.
    Sample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact expected number of necessary edges over a (theta, n) grid.
    Expected {
        #[arg(long)]
        m: usize,
        /// Comma list or start:stop:step.
        #[arg(long)]
        theta: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean density of minimum-edge graphs of sampled profiles over a grid.
    DensityExperiment {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Recognize { file, structure } => commands::recognize(&file, &structure),
        Command::Minimize { file, objective, engine, time_limit, out } => {
            commands::minimize(&file, &objective, &engine, time_limit, out.as_deref())
        }
        Command::Mallows { command } => match command {
            MallowsCommand::Sample { m, n, theta, seed, out } => commands::sample(m, n, theta, seed, out.as_deref()),
            MallowsCommand::Expected { m, theta, n, out } => commands::expected(m, &theta, &n, out.as_deref()),
            MallowsCommand::DensityExperiment { m, theta, n, trials, seed, time_limit, out } => {
                commands::density(m, &theta, &n, trials, seed, time_limit, out.as_deref())
            }
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
