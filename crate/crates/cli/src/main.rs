mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dagph::FieldSpec;

const FORMATS: &str = "\
Formats:
  graph JSON   {\"simplices\": [[0], [1], [0, 1], ...],
                \"vertices\": [{\"id\": \"A\", \"members\": [0, 1, 2]}, ...],
                \"edges\": [[\"A\", \"B\"], ...]}
               simplices are listed faces first; members index into simplices
  points CSV   one point per row, decimal coordinates; an optional header row
  rank CSV     source,target,k,rank   (rank)
               first,last,k,rank      (window ranks of subsample)
  diagram CSV  birth,death,multiplicity with death `inf` for essential classes

Exit status: 0 success, 2 input error, 3 semantic error (e.g. a disconnected
subgraph or a rank function with no diagram).";

#[derive(Parser, Debug)]
#[command(name = "dagph", version, about = "Persistent homology of graph filtrations", after_help = FORMATS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Coefficient field: `q` or `fp:<prime>`
    #[arg(long, default_value_t = FieldSpec::default())]
    field: FieldSpec,
    /// Homology degree
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Output directory; created if missing
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct PointArgs {
    /// Comma-separated, strictly increasing radii
    #[arg(long)]
    radii: String,
    /// Largest simplex dimension of the Rips complexes
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank invariants of every single-source single-sink subgraph
    Rank {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Persistent homology rank of one connected subgraph
    Subgraph {
        graph: PathBuf,
        /// Comma-separated vertex ids; the whole graph if omitted
        #[arg(long)]
        subgraph: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Diagram of two random subsamples included into their union
    Subsample {
        points: PathBuf,
        #[command(flatten)]
        point_args: PointArgs,
        /// Points per subsample (default: 40% of the input)
        #[arg(long)]
        sample_size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Compare two point clouds through their intersection and union
    Compare {
        x: PathBuf,
        y: PathBuf,
        #[command(flatten)]
        point_args: PointArgs,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
