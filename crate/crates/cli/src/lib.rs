//! Command-line front end for `orbifold-core`.
//!
//! Every subcommand is a function returning an [`Outcome`], so the binary
//! and the tests share one code path. Exit codes: 0 pass, 2 mathematical
//! failure (not PBW, count mismatch, failed identity), 1 usage or I/O error.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbifold_core::{Error, Exec, Guards, Prime};

mod commands;

pub use commands::{parse_d, parse_f};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "orbifold",
    version,
    about = "PBW deformations of S(V) # G for the order-p transvection group"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Odd prime p.
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Output format; `build` defaults to json, everything else to text.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; 1 runs every sweep sequentially.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Degree bound for the rewriting oracle.
    #[arg(long, global = true, default_value_t = 4)]
    pub degree: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    ClosedForm,
    BruteForce,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every solution (a, b) with its kernel coordinates, plus the census.
    Enumerate {
        #[arg(long, value_enum, default_value_t = ModeArg::ClosedForm)]
        mode: ModeArg,
    },
    /// Check a parameter file against the PBW conditions.
    Check {
        file: std::path::PathBuf,
        /// Also run the rewriting oracle at `--degree`.
        #[arg(long)]
        oracle: bool,
        /// Run the oracle and the normal-form dimension count as well.
        #[arg(long)]
        paranoid: bool,
    },
    /// Solutions grouped by the (g-1)-adic class of b.
    Table,
    /// Verify the comparison maps between the bar and periodic resolutions.
    Chaincheck {
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Build parameters from b, kernel coordinates d, kappaC and a coboundary.
    Build {
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Comma-separated kernel coordinates, e.g. "1,-1".
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        d: String,
        #[arg(long = "kappa-c", allow_hyphen_values = true, default_value = "0")]
        kappa_c: String,
        /// Coboundary values, e.g. "v1:g" or "v2:1-g"; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        f: Vec<String>,
    },
    /// Sizes of the b-classes and a-classes.
    Census,
    /// Kernel of phi_b(c) = b sigma(c).
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Sweep all of F_pG instead of using the closed-form basis only.
        #[arg(long)]
        brute_force: bool,
    },
}

/// What a command printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: EXIT_PASS,
        }
    }

    pub fn verdict(stdout: String, passed: bool) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: if passed { EXIT_PASS } else { EXIT_FAIL },
        }
    }

    pub fn error(msg: impl std::fmt::Display) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_ERROR,
        }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::error(e)
    }
}

/// Resolved global settings.
pub struct Context {
    pub p: Prime,
    pub format: Format,
    pub exec: Exec,
    pub seed: u64,
    pub degree: usize,
    pub guards: Guards,
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            if code == EXIT_PASS {
                Outcome::ok(text)
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            }
        }
    }
}

pub fn execute(cli: Cli) -> Outcome {
    let guards = Guards::from_env();
    let p = match guards.prime(cli.global.p.unwrap_or(3)) {
        Ok(p) => p,
        Err(e) => return e.into(),
    };
    let default_format = match cli.command {
        Command::Build { .. } => Format::Json,
        _ => Format::Text,
    };
    let exec = match cli.global.workers {
        Some(0) => return Outcome::error("--workers must be at least 1"),
        Some(1) => Exec::Sequential,
        _ => Exec::Parallel,
    };
    let ctx = Context {
        p,
        format: cli.global.format.unwrap_or(default_format),
        exec,
        seed: cli.global.seed,
        degree: cli.global.degree,
        guards,
    };
    let explicit_p = cli.global.p.is_some();
    let run = move || dispatch(&ctx, cli.command, explicit_p);
    with_workers(cli.global.workers, run)
}

#[cfg(feature = "parallel")]
fn with_workers(workers: Option<usize>, f: impl FnOnce() -> Outcome + Send) -> Outcome {
    match workers {
        Some(n) if n > 1 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(e) => Outcome::error(e),
        },
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_workers(_workers: Option<usize>, f: impl FnOnce() -> Outcome) -> Outcome {
    f()
}

fn dispatch(ctx: &Context, command: Command, explicit_p: bool) -> Outcome {
    let result = match command {
        Command::Enumerate { mode } => commands::enumerate(ctx, mode),
        Command::Check {
            file,
            oracle,
            paranoid,
        } => commands::check(ctx, &file, oracle, paranoid, explicit_p),
        Command::Table => commands::table(ctx),
        Command::Chaincheck { max_degree } => commands::chaincheck(ctx, max_degree),
        Command::Build { b, d, kappa_c, f } => commands::build(ctx, &b, &d, &kappa_c, &f),
        Command::Census => commands::census(ctx),
        Command::Kernel { b, brute_force } => commands::kernel(ctx, &b, brute_force),
    };
    result.unwrap_or_else(Outcome::from)
}
