//! Command-line front end: trade-off curves, minimum distortion, property
//! suites, estimator tables and distortion simulation.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "isac-relay", version, about = "Capacity-distortion bounds for sensing relay channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where the channel comes from. Factory parameters left out take the
/// reference values of that factory.
#[derive(Args, Clone, Debug, Default)]
pub struct ChannelArgs {
    /// example1, example4, example5, example6, appendixC or sensing-mac
    #[arg(long, conflicts_with = "channel")]
    pub factory: Option<String>,
    /// Channel JSON document
    #[arg(long)]
    pub channel: Option<PathBuf>,
    #[arg(long)]
    pub ps: Option<f64>,
    #[arg(long)]
    pub pn: Option<f64>,
    #[arg(long)]
    pub ps1: Option<f64>,
    #[arg(long)]
    pub ps2: Option<f64>,
    #[arg(long)]
    pub ps3: Option<f64>,
    #[arg(long)]
    pub ps4: Option<f64>,
}

#[derive(Args, Clone, Debug, Default)]
pub struct OutArgs {
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON manifest path; defaults to `<out>.manifest.json` when --out is set
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity-distortion curves
    Tradeoff {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Bound kind (repeatable): upper, lower, cmg, c3, c4, c5
        #[arg(long = "kind", required = true)]
        kinds: Vec<String>,
        /// `start:stop:step` or a comma list
        #[arg(long, allow_hyphen_values = true)]
        dgrid: String,
        /// Optimizer settings (TOML or JSON)
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write curves with their certificates as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimum achievable distortion
    Dmin {
        #[command(flatten)]
        channel: ChannelArgs,
        /// dmin, dmin-c1 or dmin-c2
        #[arg(long, default_value = "dmin")]
        kind: String,
        /// Closed-form Gaussian example instead of a channel: example2 or example3
        #[arg(long)]
        gaussian: Option<String>,
        #[arg(long)]
        p1: Option<f64>,
        /// State variance of S1
        #[arg(long)]
        s1: Option<f64>,
        /// State variance of S2
        #[arg(long)]
        s2: Option<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Property suites: identities, estimator, inclusion, montecarlo
    Verify {
        suite: String,
        #[command(flatten)]
        channel: ChannelArgs,
        /// Fuzzed joints for the identity suite
        #[arg(long, default_value_t = 1000)]
        fuzz: usize,
        /// Inputs per channel for the inclusion suite, draws for montecarlo
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Bayes estimator table of Sd at an input distribution of (X, X1)
    EstimatorDump {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Comma list P(x, x1), row-major; uniform when absent
        #[arg(long)]
        input: Option<String>,
        /// Whitespace-separated observed variables
        #[arg(long, default_value = "X X1 Y")]
        observe: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Simulated vs exact distortion of the Bayes estimator
    Simulate {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value = "X X1 Y")]
        observe: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        batches: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, files or parameters: exit 2.
    Usage(String),
    /// Infeasible computation, failed verification or IO: exit 1.
    Failed(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Failed(format!("io: {e}"))
    }
}

pub type Outcome = Result<(), Failure>;

fn init_threads() -> Outcome {
    if let Ok(v) = std::env::var("ISAC_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("ISAC_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Failed(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    init_threads()?;
    match cli.command {
        Command::Tradeoff {
            channel,
            kinds,
            dgrid,
            config,
            json,
            out,
        } => commands::tradeoff(&channel, &kinds, &dgrid, config.as_deref(), json.as_deref(), &out),
        Command::Dmin {
            channel,
            kind,
            gaussian,
            p1,
            s1,
            s2,
            config,
            out,
        } => match gaussian {
            Some(g) => commands::dmin_gaussian(&g, p1, s1, s2, &out),
            None => commands::dmin(&channel, &kind, config.as_deref(), &out),
        },
        Command::Verify {
            suite,
            channel,
            fuzz,
            samples,
            seed,
            config,
        } => commands::verify(&suite, &channel, fuzz, samples, seed, config.as_deref()),
        Command::EstimatorDump {
            channel,
            input,
            observe,
            out,
        } => commands::estimator_dump(&channel, input.as_deref(), &observe, &out),
        Command::Simulate {
            channel,
            input,
            observe,
            samples,
            batches,
            seed,
            out,
        } => commands::simulate(&channel, input.as_deref(), &observe, samples, batches, seed, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
