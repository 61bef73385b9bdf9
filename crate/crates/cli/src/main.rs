//! `duelbench`: solve dueling games, reproduce the price-of-competition
//! bounds and check the structural lemmas from the command line.

mod commands;
mod error;
mod instance;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use duelbench::minimax::{EXPLICIT_CAP, MINIMAX_TOL};

use commands::{Ctx, Outcome, PathChoice, RandomFamily};
use error::{CliError, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use instance::{Builtin, Source};
use report::{Format, Report, Tolerances, VERSION};

#[derive(Debug, Parser)]
#[command(name = "duelbench", version = VERSION, about = "Minimax strategies and price of competition in dueling games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Instance file in the JSON instance schema.
    #[arg(long, global = true, conflicts_with = "builtin")]
    input: Option<PathBuf>,
    /// Built-in instance.
    #[arg(long, global = true, value_enum)]
    builtin: Option<Builtin>,
    /// ε for `--builtin compression`.
    #[arg(long, global = true, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every random choice; reports are deterministic given it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest pure-strategy catalog solved as an explicit LP.
    #[arg(long, global = true, default_value_t = EXPLICIT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap_perms: u64,
    /// Payoff slack when calling a strategy minimax.
    #[arg(long, global = true, default_value_t = MINIMAX_TOL)]
    tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Game value, worst and best minimax welfare (or cost), and PoC.
    Solve,
    /// Price of competition only; ranking duels past the cap use marginals.
    Poc {
        #[arg(long, value_enum, default_value_t = PathChoice::Auto)]
        path: PathChoice,
    },
    /// α_k of the factor-revealing program for k = k_min..=k_max.
    AlphaCurve {
        #[arg(long)]
        k_max: usize,
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        /// Skip the exact rational certificate for each k.
        #[arg(long)]
        no_certify: bool,
    },
    /// Exact check of the tabulated k = 10 dual certificate.
    CertifyDual {
        /// Certify the minimally repaired point instead.
        #[arg(long)]
        repaired: bool,
    },
    /// Build a lower-bound construction and verify its designated strategy.
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Run the structural lemma checks on minimax strategies.
    CheckStructure {
        /// Number of random instances to add.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Pages per random instance.
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, value_enum, default_value_t = RandomFamily::Decreasing)]
        family: RandomFamily,
    },
    /// Reduction of a welfare game to its 0-1 threshold games.
    ZeroOne,
}

#[derive(Debug, Subcommand)]
enum Construction {
    /// Four-request compression duel.
    Compression {
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
    },
    /// Binary search duel, checked against uniformly sampled trees.
    Bst {
        #[arg(long, default_value_t = 0.25)]
        beta: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

impl Cli {
    fn ctx(&self) -> Ctx {
        Ctx { cap: usize::try_from(self.cap_perms).unwrap_or(usize::MAX), seed: self.seed, tol: self.tol }
    }

    fn source(&self, ctx: &Ctx) -> Result<Option<Source>, CliError> {
        match (&self.input, self.builtin) {
            (Some(path), _) => instance::load_file(path, ctx.cap).map(Some),
            (None, Some(b)) => instance::load_builtin(b, self.epsilon, ctx.cap).map(Some),
            (None, None) => Ok(None),
        }
    }

    fn command_name(&self) -> &'static str {
        match &self.command {
            Command::Solve => "solve",
            Command::Poc { .. } => "poc",
            Command::AlphaCurve { .. } => "alpha-curve",
            Command::CertifyDual { .. } => "certify-dual",
            Command::Construct { which: Construction::Compression { .. } } => "construct compression",
            Command::Construct { which: Construction::Bst { .. } } => "construct bst",
            Command::CheckStructure { .. } => "check-structure",
            Command::ZeroOne => "zero-one",
        }
    }
}

fn required(src: Option<Source>) -> Result<Source, CliError> {
    src.ok_or_else(|| CliError::usage("this command needs --input or --builtin"))
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if !(cli.tol >= 0.0 && cli.tol.is_finite()) {
        return Err(CliError::usage("--tol must be a finite nonnegative number"));
    }
    let ctx = cli.ctx();
    let src = cli.source(&ctx)?;
    match &cli.command {
        Command::Solve => commands::solve(&ctx, &required(src)?),
        Command::Poc { path } => commands::poc(&ctx, &required(src)?, *path),
        Command::AlphaCurve { k_max, k_min, no_certify } => commands::alpha_curve(&ctx, *k_min, *k_max, !no_certify),
        Command::CertifyDual { repaired } => commands::certify_dual(&ctx, *repaired),
        Command::Construct { which: Construction::Compression { epsilon } } => commands::construct_compression(&ctx, *epsilon),
        Command::Construct { which: Construction::Bst { beta, samples } } => commands::construct_bst(&ctx, *beta, *samples),
        Command::CheckStructure { random, n, family } => {
            commands::check_structure(&ctx, src.as_ref(), *random, *n, *family)
        }
        Command::ZeroOne => commands::zero_one(&ctx, &required(src)?),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("DUELBENCH_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| CliError::usage(format!("DUELBENCH_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot size the thread pool: {e}")))
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            let io = |source| CliError::Io { path: path.display().to_string(), source };
            let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
            report.render(cli.format, &mut file)?;
            file.flush().map_err(io)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            report.render(cli.format, &mut lock)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let result = configure_threads().and_then(|()| run(&cli)).and_then(|outcome| {
        let report = Report {
            command: cli.command_name().to_string(),
            version: VERSION,
            seed: cli.seed,
            tolerances: Tolerances::with_minimax(cli.tol),
            verified: outcome.verified,
            result: outcome.result,
        };
        emit(&cli, &report)?;
        Ok(report.verified)
    });
    match result {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => {
            eprintln!("duelbench: verification failed; see the report");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(e) => {
            eprintln!("duelbench: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
