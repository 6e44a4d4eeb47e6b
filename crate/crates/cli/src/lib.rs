//! Command-line surface for `strata-core`: enumeration, intersections,
//! boundary complexes, flag checks and the reproduction suite.

mod commands;
mod suite;

use std::io::Write;
use std::path::PathBuf;

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use strata_core::{EnumerationConfig, Enumerator, StrataError};

pub use suite::{run_suite, SuiteItem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

fn parse_threads(s: &str) -> Result<Threads, String> {
    if s == "auto" {
        return Ok(Threads::Auto);
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer or \"auto\", got {s:?}")),
        Ok(n) => Ok(Threads::Fixed(n)),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "strata",
    version,
    about = "Boundary strata of moduli spaces of stable pointed curves"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    /// Run the curated reproduction suite and exit.
    #[arg(long)]
    pub paper_suite: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Directory for cached enumeration levels.
    #[arg(long, global = true, env = "STRATA_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Largest number of graphs allowed in a single enumeration level.
    #[arg(long, global = true, default_value_t = strata_core::enumerate::DEFAULT_MAX_GRAPHS,
          value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub max_graphs: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads: a positive integer or "auto".
    #[arg(long, global = true, default_value = "auto", value_parser = parse_threads)]
    pub threads: Threads,
}

#[derive(Debug, Clone, Args)]
pub struct SigArgs {
    #[arg(long)]
    pub g: u32,
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the strata with exactly k edges in canonical key order.
    Enumerate {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long)]
        k: usize,
    },
    /// Intersect boundary divisors given as graph files, inline JSON or keys.
    Intersect {
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Build the boundary complex.
    Complex {
        #[command(flatten)]
        sig: SigArgs,
        /// Largest simplex dimension to compute.
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Decide whether the boundary complex is a flag complex.
    FlagCheck {
        #[command(flatten)]
        sig: SigArgs,
    },
    /// Report the minimal non-face clique, or evaluate a given clique.
    Witness {
        #[command(flatten)]
        sig: SigArgs,
        clique: Vec<String>,
    },
    /// Compare computed flagness with the classification over a grid.
    Verify {
        /// Inclusive genus range, e.g. `0..2` or `3`.
        #[arg(long, value_parser = parse_range)]
        g_range: (u32, u32),
        /// Inclusive marking range, e.g. `0..4`.
        #[arg(long, value_parser = parse_range)]
        n_range: (u32, u32),
        /// Report over-budget cells as skipped instead of failing.
        #[arg(long)]
        skip_over_budget: bool,
    },
    /// Run the curated reproduction suite.
    PaperSuite,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub cache_dir: Option<PathBuf>,
    pub max_graphs: usize,
    pub max_dim: Option<usize>,
    pub format: Format,
    pub threads: Threads,
}

impl RunConfig {
    pub fn from_args(global: &GlobalArgs, max_dim: Option<usize>) -> Self {
        Self {
            cache_dir: global.cache_dir.clone(),
            max_graphs: global.max_graphs.max(1),
            max_dim,
            format: global.format,
            threads: global.threads,
        }
    }

    pub fn enumerator(&self) -> Enumerator {
        Enumerator::new(EnumerationConfig {
            max_graphs: self.max_graphs,
            cache_dir: self.cache_dir.clone(),
        })
    }
}

/// A failed command: exit code plus a machine-readable kind.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }
}

impl From<StrataError> for Failure {
    fn from(e: StrataError) -> Self {
        let (code, kind) = match &e {
            StrataError::BudgetExceeded { .. } => (EXIT_RESOURCE, "budget_exceeded"),
            StrataError::Cache { .. } => (EXIT_RESOURCE, "cache"),
            StrataError::Io(_) => (EXIT_USAGE, "io"),
            StrataError::Json(_) => (EXIT_USAGE, "json"),
            StrataError::InvalidSignature { .. } => (EXIT_USAGE, "invalid_signature"),
            StrataError::InvalidGraph(_) | StrataError::InvalidEdge { .. } => (EXIT_USAGE, "invalid_graph"),
            StrataError::EdgeCountOutOfRange { .. } => (EXIT_USAGE, "edge_count_out_of_range"),
            StrataError::NotADivisor { .. } => (EXIT_USAGE, "not_a_divisor"),
            StrataError::MixedSignatures { .. } => (EXIT_USAGE, "mixed_signatures"),
            StrataError::EmptyDivisorSet => (EXIT_USAGE, "empty_divisor_set"),
            StrataError::UnknownKey(_) => (EXIT_USAGE, "unknown_key"),
            StrataError::OutOfDomain(_) => (EXIT_USAGE, "out_of_domain"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        StrataError::Io(e).into()
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: &'a str,
    exit_code: i32,
}

fn report_failure(failure: &Failure, format: Format, err: &mut dyn Write) {
    let _ = if format == Format::Json {
        let doc = ErrorJson {
            error: failure.kind,
            message: &failure.message,
            exit_code: failure.code,
        };
        writeln!(err, "{}", serde_json::to_string(&doc).expect("serializable"))
    } else {
        writeln!(err, "error: {}", failure.message)
    };
}

/// Runs a parsed command line, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let max_dim = match &cli.command {
        Some(Command::Complex { max_dim, .. }) => *max_dim,
        _ => None,
    };
    let config = RunConfig::from_args(&cli.global, max_dim);
    let pool = {
        let builder = rayon::ThreadPoolBuilder::new();
        let builder = match config.threads {
            Threads::Auto => builder,
            Threads::Fixed(n) => builder.num_threads(n),
        };
        match builder.build() {
            Ok(pool) => pool,
            Err(e) => {
                let failure = Failure {
                    code: EXIT_RESOURCE,
                    kind: "threads",
                    message: e.to_string(),
                };
                report_failure(&failure, config.format, err);
                return failure.code;
            }
        }
    };
    let (result, stdout_buf, stderr_buf) = pool.install(|| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let result = match (&cli.command, cli.paper_suite) {
            (Some(Command::PaperSuite), _) | (None, true) => commands::paper_suite(&config, &mut o),
            (Some(_), true) => Err(Failure::usage("--paper-suite cannot be combined with a subcommand")),
            (None, false) => Err(Failure::usage("no command given; see --help")),
            (Some(command), false) => commands::dispatch(command, &config, &mut o, &mut e),
        };
        (result, o, e)
    });
    let _ = out.write_all(&stdout_buf);
    let _ = err.write_all(&stderr_buf);
    match result {
        Ok(code) => code,
        Err(failure) => {
            report_failure(&failure, config.format, err);
            failure.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0..3"), Ok((0, 3)));
        assert_eq!(parse_range("1..=4"), Ok((1, 4)));
        assert_eq!(parse_range("2"), Ok((2, 2)));
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("a..1").is_err());
    }

    #[test]
    fn threads() {
        assert_eq!(parse_threads("auto"), Ok(Threads::Auto));
        assert_eq!(parse_threads("3"), Ok(Threads::Fixed(3)));
        assert!(parse_threads("0").is_err());
    }

    #[test]
    fn exit_codes_by_error() {
        let sig = strata_core::GnSignature::new(1, 1).unwrap();
        let budget = StrataError::BudgetExceeded { sig, k: 1, limit: 1 };
        assert_eq!(Failure::from(budget).code, EXIT_RESOURCE);
        assert_eq!(Failure::from(StrataError::EmptyDivisorSet).code, EXIT_USAGE);
    }

    #[test]
    fn json_errors_go_to_stderr() {
        let cli = Cli::parse_from([
            "strata",
            "--format",
            "json",
            "enumerate",
            "--g",
            "0",
            "--n",
            "1",
            "--k",
            "1",
        ]);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(&cli, &mut out, &mut err), EXIT_USAGE);
        assert!(out.is_empty());
        let doc: serde_json::Value = serde_json::from_slice(&err).unwrap();
        assert_eq!(doc["error"], "invalid_signature");
    }
}
