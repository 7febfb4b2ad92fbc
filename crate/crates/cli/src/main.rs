//! `cornerlab`: corner scans, variational sweeps and regularity runs from the
//! command line.

mod commands;
mod config;

use std::collections::BTreeMap;
use std::fmt;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{read_config_file, RunConfig};

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<cornerlab::Error> for CliError {
    fn from(e: cornerlab::Error) -> Self {
        let code = match e {
            cornerlab::Error::CapExceeded { .. } => 3,
            cornerlab::Error::Assertion(_) => 4,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Parser)]
#[command(name = "cornerlab", version, about = "Corners, Bohr sets, regularity and the variational problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Corner count N(d) for every difference, with the most popular d != 0.
    Scan,
    /// Only the most popular nonzero difference.
    Popular,
    /// Corners in [n]^2 with differences in a Bohr set of Z/nZ.
    Zscan,
    /// Upper estimates of m(alpha) on a grid of alphas.
    Variational,
    /// Lower convex envelope of a sweep (or of a CSV given by --input).
    Envelope,
    /// Bohr and double regularization of a set.
    Regularize,
    /// End-to-end report on a small group.
    Pipeline,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Scan => "scan",
            Command::Popular => "popular",
            Command::Zscan => "zscan",
            Command::Variational => "variational",
            Command::Envelope => "envelope",
            Command::Regularize => "regularize",
            Command::Pipeline => "pipeline",
        }
    }
}

#[derive(Args)]
struct Opts {
    /// Group such as Z101 or Z2xZ2xZ4.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Density of the random set.
    #[arg(long, global = true)]
    density: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Set file (header line then 0/1 rows); overrides the random set.
    #[arg(long = "set-file", global = true)]
    set_file: Option<String>,
    /// Bohr radius: difference set for zscan, nu for pipeline.
    #[arg(long, global = true)]
    rho: Option<String>,
    /// Width of an extra Bohr partition reported by regularize.
    #[arg(long, global = true)]
    delta: Option<String>,
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Growth function: poly:c:k or exp:c.
    #[arg(long, global = true)]
    growth: Option<String>,
    #[arg(long = "grid-n", global = true)]
    grid_n: Option<String>,
    #[arg(long, global = true)]
    restarts: Option<String>,
    /// Comma-separated alphas (strictly increasing).
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Number of evenly spaced alphas in [0, 1] when --alpha is absent.
    #[arg(long, global = true)]
    samples: Option<String>,
    /// Sweep CSV with alpha and m_hat columns, for envelope.
    #[arg(long, global = true)]
    input: Option<String>,
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads (0: one per core).
    #[arg(long, global = true, env = "CORNERLAB_THREADS")]
    threads: Option<String>,
    /// File of key=value lines; flags take precedence.
    #[arg(long, global = true)]
    config: Option<String>,
}

impl Opts {
    fn flags(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("group", &self.group),
            ("density", &self.density),
            ("seed", &self.seed),
            ("set-file", &self.set_file),
            ("rho", &self.rho),
            ("delta", &self.delta),
            ("eps", &self.eps),
            ("growth", &self.growth),
            ("grid-n", &self.grid_n),
            ("restarts", &self.restarts),
            ("alpha", &self.alpha),
            ("samples", &self.samples),
            ("input", &self.input),
            ("out", &self.out),
            ("threads", &self.threads),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v))).collect()
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut values = match &cli.opts.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    values.extend(cli.opts.flags());
    let mut cfg = RunConfig::new(cli.command.name(), values);

    let threads: usize = cfg.get_or("threads", "0")?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::validation(format!("cannot start {threads} worker threads: {e}")))?;

    let text = match cli.command {
        Command::Scan => commands::scan(&mut cfg),
        Command::Popular => commands::popular(&mut cfg),
        Command::Zscan => commands::zscan(&mut cfg),
        Command::Variational => commands::variational(&mut cfg),
        Command::Envelope => commands::envelope(&mut cfg),
        Command::Regularize => commands::regularize(&mut cfg),
        Command::Pipeline => commands::pipeline(&mut cfg),
    }?;
    commands::write_output(&mut cfg, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cornerlab: {e}");
            ExitCode::from(e.code)
        }
    }
}
