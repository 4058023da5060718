use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pnverify_core::scenario::Context;
use pnverify_core::{parse_net, Net, DEFAULT_LIMIT};

mod commands;
mod repl;
mod report;

use report::Outcome;

/// Verification toolkit for place/transition nets with read arcs.
#[derive(Debug, Parser)]
#[command(name = "pnverify", version)]
struct Cli {
    /// Maximum number of states to explore.
    #[arg(long, global = true, env = "PNVERIFY_LIMIT", default_value_t = DEFAULT_LIMIT)]
    limit: usize,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing on success; rely on the exit code.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every property of a property file against a net.
    Check {
        /// Net file, or `-` for standard input.
        net: String,
        /// Property file with one `name : formula` per line.
        props: String,
    },
    /// Report deadlocks, dead transitions, liveness, bounds and invariants.
    Analyze { net: String },
    /// Search for a marking matching a brace literal or a state formula.
    Reach {
        net: String,
        /// `{2 p0, p1}` for an exact marking, or a formula such as `tokens(p2) = 1`.
        goal: String,
    },
    /// Play the token game, interactively or with random firings.
    Simulate {
        net: String,
        /// Fire uniformly at random instead of reading commands; SEED
        /// defaults to `--seed`.
        #[arg(long, value_name = "SEED", num_args = 0..=1)]
        random: Option<Option<u64>>,
        /// Number of random firings.
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Seed for random firing and for `auto` in the interactive session.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the net in Graphviz format.
    Dot {
        net: String,
        /// Marking to draw instead of the initial one.
        #[arg(long)]
        marking: Option<String>,
    },
    /// Emit the human-robot interaction model or its property file.
    Scenario {
        #[arg(long, value_enum, default_value_t = ContextArg::Attention)]
        context: ContextArg,
        #[arg(long, default_value_t = 3)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Emit::Net)]
        emit: Emit,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ContextArg {
    Attention,
    NoAttention,
    NotPresent,
}

impl From<ContextArg> for Context {
    fn from(c: ContextArg) -> Self {
        match c {
            ContextArg::Attention => Context::Attention,
            ContextArg::NoAttention => Context::NoAttention,
            ContextArg::NotPresent => Context::NotPresent,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Emit {
    Net,
    Props,
}

/// Exit codes: 0 pass, 1 refuted or unreachable, 2 usage or input error,
/// 3 state limit reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Refuted = 1,
    Usage = 2,
    Truncated = 3,
}

/// An input problem that ends the run with exit code 2.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

pub fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure(format!("<stdin>: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))
    }
}

pub fn load_net(path: &str) -> Result<Net, Failure> {
    let text = read_source(path)?;
    let shown = if path == "-" { "<stdin>" } else { path };
    parse_net(&text).map_err(|e| Failure(format!("{shown}:{e}")))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Check { net, props } => commands::check(net, props, cli.limit),
        Command::Analyze { net } => commands::analyze(net, cli.limit),
        Command::Reach { net, goal } => commands::reach(net, goal, cli.limit),
        Command::Simulate { net, random, steps, seed } => {
            let net = load_net(net)?;
            match random {
                Some(random_seed) => commands::simulate_random(&net, random_seed.unwrap_or(*seed), *steps),
                None => {
                    let stdin = io::stdin();
                    let stdout = io::stdout();
                    repl::run(&net, *seed, stdin.lock(), stdout.lock())?;
                    Ok(Outcome::silent(Status::Pass))
                }
            }
        }
        Command::Dot { net, marking } => commands::dot(net, marking.as_deref()),
        Command::Scenario { context, budget, emit } => {
            commands::scenario((*context).into(), *budget, matches!(emit, Emit::Props))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match run(&cli) {
        Ok(outcome) => {
            let text = if cli.json { outcome.json } else { outcome.human };
            if !cli.quiet || outcome.raw {
                let mut out = io::stdout().lock();
                if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                    return ExitCode::from(Status::Usage as u8);
                }
            }
            outcome.status
        }
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            Status::Usage
        }
    };
    ExitCode::from(status as u8)
}
