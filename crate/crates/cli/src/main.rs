use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use torictool::{run, CliError, Command, Flags};

/// Toric degree, torsion, resonance and normal-form reports as JSON.
#[derive(Parser)]
#[command(name = "torictool", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Input file; `-` reads standard input.
    input: PathBuf,
    /// Largest total degree enumerated (resonances: 6, simple-tuple checks: 12).
    #[arg(long)]
    max_degree: Option<u64>,
    /// Working precision in bits for numeric jets [default: 256, or TORICTOOL_PRECISION].
    #[arg(long)]
    precision: Option<u32>,
    /// Enable cross-validation passes.
    #[arg(long)]
    strict: bool,
    /// Override the cominimal search bound.
    #[arg(long)]
    comin_bound: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Toric degree, reduced tuple, torsion, classification and verdict of a phase file.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// The linear part has nontrivial Jordan blocks.
        #[arg(long)]
        non_diagonalizable: bool,
    },
    /// Resonant multi-indices of a phase file.
    Resonances {
        #[command(flatten)]
        common: Common,
        /// 1-based coordinate; all coordinates when omitted.
        #[arg(long)]
        coordinate: Option<usize>,
    },
    /// Torsion classification of a phase file.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Search for a simple tuple of a pure-torsion phase file.
    Simplify {
        #[command(flatten)]
        common: Common,
    },
    /// Poincaré–Dulac normal form of a germ file.
    Normalize {
        #[command(flatten)]
        common: Common,
    },
    /// Flow of the vector field given by a germ file.
    Flow {
        #[command(flatten)]
        common: Common,
        /// Flow time, `p` or `p/q`.
        #[arg(long, default_value = "1")]
        time: String,
    },
    /// Whether a germ file commutes with a torus action.
    CheckCommute {
        #[command(flatten)]
        common: Common,
        /// Weight rows per coordinate, e.g. `1,0;1,1;2,1`; derived from the phases when omitted.
        #[arg(long)]
        weights: Option<String>,
    },
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn env_precision() -> Result<Option<u32>, CliError> {
    match std::env::var("TORICTOOL_PRECISION") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::precondition(format!("TORICTOOL_PRECISION is not a bit count: `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::parse(e.to_string().trim_end().to_string())),
    };
    let mut flags = Flags::default();
    let (command, common) = match cli.command {
        Cmd::Analyze {
            common,
            non_diagonalizable,
        } => {
            flags.non_diagonalizable = non_diagonalizable;
            (Command::Analyze, common)
        }
        Cmd::Resonances { common, coordinate } => {
            flags.coordinate = coordinate;
            (Command::Resonances, common)
        }
        Cmd::Classify { common } => (Command::Classify, common),
        Cmd::Simplify { common } => (Command::Simplify, common),
        Cmd::Normalize { common } => (Command::Normalize, common),
        Cmd::Flow { common, time } => {
            flags.time = Some(time);
            (Command::Flow, common)
        }
        Cmd::CheckCommute { common, weights } => {
            flags.weights = weights;
            (Command::CheckCommute, common)
        }
    };
    flags.max_degree = common.max_degree;
    flags.strict = common.strict;
    flags.comin_bound = common.comin_bound;
    flags.precision = match common.precision {
        Some(p) => Some(p),
        None => match env_precision() {
            Ok(p) => p,
            Err(e) => return fail(&e),
        },
    };
    let outcome = read_input(&common.input).and_then(|text| run(command, &text, &flags));
    match outcome {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
