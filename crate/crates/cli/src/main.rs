use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fraudloss_cli::commands::{self, out_dir_or_default};

/// Top-k fraud-loss model selection: simulation studies, synthetic data
/// generation, and train/select/evaluate workflows on CSV data.
#[derive(Parser)]
#[command(name = "fraudloss", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed override (simulate: master seed; select: fold seed;
    /// generate: data seed).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for parallel fitting (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for output files (created if absent).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full simulation study from a declarative config.
    Simulate { config: PathBuf },
    /// Fit a model path on a training CSV and select the tuning value.
    Select { config: PathBuf, train: PathBuf },
    /// Score a saved model on a test CSV: fraud loss per k.
    Evaluate {
        model: PathBuf,
        test: PathBuf,
        /// Comma-separated list of k values.
        #[arg(long, value_delimiter = ',', required = true)]
        k_grid: Vec<usize>,
    },
    /// Emit a synthetic dataset described by a generator config.
    Generate {
        config: PathBuf,
        /// Number of rows.
        #[arg(short, long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let out_dir = out_dir_or_default(&cli.out_dir);
    let result = match &cli.command {
        Command::Simulate { config } => commands::simulate(config, cli.seed, &out_dir),
        Command::Select { config, train } => commands::select(config, train, cli.seed, &out_dir),
        Command::Evaluate {
            model,
            test,
            k_grid,
        } => commands::evaluate(model, test, k_grid, &out_dir),
        Command::Generate { config, n } => commands::generate(config, *n, cli.seed, &out_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
