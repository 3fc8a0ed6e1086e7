//! `compadapt`: parse, step, encode and check compensable processes.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use compadapt::comp::Semantics;

/// Exit statuses.
pub const OK: u8 = 0;
pub const COUNTEREXAMPLE: u8 = 1;
pub const INCONCLUSIVE: u8 = 2;
pub const USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "compadapt",
    version,
    about = "Compensable processes and their encodings into adaptable processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and print its normal form.
    Parse {
        #[arg(long, value_enum, default_value = "comp")]
        calculus: Calculus,
        file: PathBuf,
    },
    /// List the transitions of a compensable term.
    Steps {
        #[arg(long, short)]
        semantics: Semantics,
        file: PathBuf,
    },
    /// Walk through the transitions of a term interactively.
    Trace {
        #[arg(long, short)]
        semantics: Semantics,
        file: PathBuf,
    },
    /// Print the adaptable encoding of a term.
    Encode {
        #[command(flatten)]
        enc: Encoding,
        /// Encode at this path, e.g. `t1,t` (default: the empty path).
        #[arg(long, default_value = "ε")]
        path: String,
        file: PathBuf,
    },
    /// Check operational correspondence for one term.
    Check {
        #[command(flatten)]
        enc: Encoding,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, value_enum, default_value = "both")]
        direction: Dir,
        /// Print a JSON report instead of a summary.
        #[arg(long)]
        json: bool,
        file: PathBuf,
    },
    /// Check correspondence on seeded random terms.
    Fuzz {
        /// Defaults to all three semantics.
        #[arg(long, short)]
        semantics: Option<Semantics>,
        #[arg(long)]
        dynamic: bool,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Largest term size, in AST nodes.
        #[arg(long, default_value_t = 12)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Encoding {
    #[arg(long, short)]
    semantics: Semantics,
    /// Allow compensation updates (`inst`).
    #[arg(long)]
    dynamic: bool,
}

#[derive(Args, Clone, Copy)]
struct Bounds {
    /// Reduction depth (default: 8 + 5 * term size).
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 50_000)]
    max_states: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Calculus {
    Comp,
    Adapt,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dir {
    Fwd,
    Bwd,
    Both,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
