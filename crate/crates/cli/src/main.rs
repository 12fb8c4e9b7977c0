use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(
    name = "subset-syzygy",
    version,
    about = "Hilbert functions, Betti tables and subset resolutions of point sets over GF(p)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert function and its first difference.
    Hilbert(Source),
    /// Graded Betti numbers, optionally restricted to some twists.
    Betti {
        #[command(flatten)]
        source: Source,
        /// Twists to compute, e.g. `twist=5` or `twist=4,5`.
        #[arg(long)]
        window: Option<Window>,
    },
    /// Predicted resolution of an `e`-subset compared with an actual subset.
    Predict {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        window: Option<Window>,
        /// 1-based labels of the subset to compare (default: a greedy subset
        /// with truncated Hilbert function).
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
    },
    /// Chain of single-point removals down to an `m`-subset realizing the
    /// predicted multiplication ranks (plane only).
    FindSubset {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        m: usize,
    },
    /// Every `m`-subset with its multiplication ranks.
    Enumerate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Critical degree, generators in degree l+1, degree matrix and base locus.
    Classify(Source),
    /// Residual Hilbert function under linkage by a complete intersection.
    Link {
        #[command(flatten)]
        source: Source,
        /// Degrees `a,b` of the complete intersection.
        #[arg(long, value_delimiter = ',', required = true)]
        ci: Vec<usize>,
        /// Link a first-difference sequence instead of a point set.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["input", "random"])]
        delta: Option<Vec<usize>>,
        /// Seed for choosing the two forms from I(X).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The 11-of-22 points in P^6 computation.
    Counterexample {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        prime: Option<u64>,
        /// Also compute complete Betti tables.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Batch comparison of predictions with actual subsets on random points.
    Experiment(commands::ExperimentArgs),
}

#[derive(Args, Clone)]
pub struct Source {
    /// JSON point set file.
    #[arg(long, conflicts_with = "random")]
    pub input: Option<PathBuf>,
    /// Seeded general points, e.g. `n=2,d=7,seed=1`.
    #[arg(long)]
    pub random: Option<RandomSpec>,
    #[arg(long)]
    pub prime: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
}

impl FromStr for RandomSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (mut n, mut d, mut seed) = (None, None, 0);
        for part in s.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
            let value = value.trim();
            let bad = |e: std::num::ParseIntError| format!("{key}: {e}");
            match key.trim() {
                "n" => n = Some(value.parse().map_err(bad)?),
                "d" => d = Some(value.parse().map_err(bad)?),
                "seed" => seed = value.parse().map_err(bad)?,
                other => return Err(format!("unknown key `{other}` (expected n, d, seed)")),
            }
        }
        Ok(RandomSpec {
            n: n.ok_or("missing n")?,
            d: d.ok_or("missing d")?,
            seed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window(pub Vec<usize>);

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let list = s
            .strip_prefix("twist=")
            .ok_or_else(|| format!("expected twist=<t>[,<t>...], got `{s}`"))?;
        let twists = list
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| format!("twist `{t}`: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Window(twists))
    }
}

fn configure_threads() -> Result<(), commands::CliError> {
    let Ok(value) = std::env::var("SUBSET_SYZYGY_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        commands::CliError::Validation(format!(
            "SUBSET_SYZYGY_THREADS must be a positive integer, got `{value}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| commands::CliError::Validation(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| commands::dispatch(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
