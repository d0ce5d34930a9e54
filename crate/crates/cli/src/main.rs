//! `aiet-lab`: analyses of affine interval exchange transformations described
//! in a map file.

#![allow(clippy::result_large_err)]

mod commands;
mod mapfile;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use aiet::Config;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, GroupOp, Outcome};
use report::{Report, SCHEMA_VERSION};

const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_PARSE: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "aiet-lab", version)]
#[command(about = "Exact analyses of affine interval exchange transformations")]
struct Cli {
    #[command(flatten)]
    flags: Flags,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct Flags {
    /// Orbit exploration horizon (default 50·#BP²).
    #[arg(long, global = true)]
    horizon: Option<usize>,

    /// Largest period searched for periodic points.
    #[arg(long, global = true)]
    max_period: Option<usize>,

    /// Tolerance for rotation-number comparisons.
    #[arg(long, global = true)]
    rho_tol: Option<f64>,

    /// Orbit length for drift estimates.
    #[arg(long, global = true)]
    drift_n: Option<usize>,

    /// Largest piece count any composition may produce.
    #[arg(long, global = true)]
    guard_pieces: Option<usize>,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
}

impl Flags {
    fn config(&self) -> Config {
        let mut cfg = Config::default();
        cfg.horizon = self.horizon.or(cfg.horizon);
        cfg.max_period = self.max_period.unwrap_or(cfg.max_period);
        cfg.rho_tol = self.rho_tol.unwrap_or(cfg.rho_tol);
        cfg.drift_n = self.drift_n.unwrap_or(cfg.drift_n);
        cfg.guard_pieces = self.guard_pieces.unwrap_or(cfg.guard_pieces);
        cfg
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Break points, slopes, shape, periodic structure and growth class.
    Analyze { file: String, map: String },
    /// Conjugate an iterate to restricted rotations and two-slope maps.
    Normalize { file: String, map: String },
    /// Certify that a map is undistorted (or of finite order).
    Certify {
        file: String,
        map: String,
        /// Generating set to measure word length against (default: the map alone).
        group: Option<String>,
    },
    /// Group-level checks and word computations.
    Group {
        file: String,
        #[command(subcommand)]
        op: GroupCommand,
    },
}

#[derive(Debug, Subcommand)]
enum GroupCommand {
    /// Test b∘a^m∘b⁻¹ = a^n.
    BsCheck {
        a: String,
        b: String,
        #[arg(allow_hyphen_values = true)]
        m: i64,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Rotation-number obstruction to b∘a^m∘b⁻¹ = a^n.
    BsObstruct {
        a: String,
        b: String,
        #[arg(allow_hyphen_values = true)]
        m: i64,
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 12)]
        s_max: usize,
    },
    /// Check [u^p, v^q] = c^{pq} for c = [u, v].
    NilpCheck {
        u: String,
        v: String,
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
    },
    /// Evaluate a word such as "a b^-1 a".
    Word { group: String, word: String },
    /// Word lengths of the targets within a ball.
    Ball { group: String, radius: usize, targets: Vec<String> },
}

fn run(cli: &Cli, cfg: &Config) -> Result<(String, Outcome), CliError> {
    Ok(match &cli.command {
        Command::Analyze { file, map } => ("analyze".into(), commands::analyze(file, map, cfg)?),
        Command::Normalize { file, map } => ("normalize".into(), commands::normalize(file, map, cfg)?),
        Command::Certify { file, map, group } => ("certify".into(), commands::certify(file, map, group.as_deref(), cfg)?),
        Command::Group { file, op } => {
            let (name, op) = op.to_op();
            (format!("group {name}"), commands::group(file, &op, cfg)?)
        }
    })
}

impl GroupCommand {
    fn to_op(&self) -> (&'static str, GroupOp) {
        match self {
            GroupCommand::BsCheck { a, b, m, n } => {
                ("bs-check", GroupOp::BsCheck { a: a.clone(), b: b.clone(), m: *m, n: *n })
            }
            GroupCommand::BsObstruct { a, b, m, n, s_max } => (
                "bs-obstruct",
                GroupOp::BsObstruct { a: a.clone(), b: b.clone(), m: *m, n: *n, s_max: *s_max },
            ),
            GroupCommand::NilpCheck { u, v, p, q } => {
                ("nilp-check", GroupOp::NilpCheck { u: u.clone(), v: v.clone(), p: *p, q: *q })
            }
            GroupCommand::Word { group, word } => ("word", GroupOp::Word { group: group.clone(), word: word.clone() }),
            GroupCommand::Ball { group, radius, targets } => (
                "ball",
                GroupOp::Ball { group: group.clone(), radius: *radius, targets: targets.clone() },
            ),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_PARSE) } else { ExitCode::SUCCESS };
        }
    };
    let cfg = cli.flags.config();
    let start = Instant::now();
    match run(&cli, &cfg) {
        Ok((command, outcome)) => {
            let report = Report {
                command,
                inputs: outcome.inputs,
                results: outcome.results,
                config: cfg,
                schema_version: SCHEMA_VERSION,
                timing_ms: start.elapsed().as_millis() as u64,
            };
            let text = match cli.flags.format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if outcome.inconclusive {
                ExitCode::from(EXIT_INCONCLUSIVE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
