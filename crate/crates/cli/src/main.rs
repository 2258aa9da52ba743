use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use czjump::commands::{
    self, cmd_analyze, cmd_index, cmd_jump, cmd_verify, IndexArgs, JumpArgs, Outcome,
};
use czjump_core::index::NegativeIterateConvention;

/// Exact index tables, constructive common-index-jump search, and
/// catalogue analysis for closed-orbit spectra.
///
/// Exit codes: 0 success, 1 verification failure, 2 input error,
/// 3 search exhausted.
#[derive(Parser)]
#[command(name = "czjump", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Convention {
    /// Evaluate block formulas at negative iterates (default).
    Formula,
    /// Path-reversal reading of negative iterates.
    Reversal,
}

impl From<Convention> for NegativeIterateConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Formula => NegativeIterateConvention::FormulaAtNegative,
            Convention::Reversal => NegativeIterateConvention::PathReversal,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Index table: lower/upper indices, multiplicities, mean indices
    /// and convexity margins per orbit and iterate.
    Index {
        /// Catalogue file.
        catalogue: PathBuf,
        #[arg(long, default_value_t = 1)]
        k_min: i64,
        #[arg(long, default_value_t = 3)]
        k_max: i64,
        #[arg(long, value_enum, default_value_t = Convention::Formula)]
        convention: Convention,
        /// Write the canonical report body here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Constructive common-index-jump search with exact verification.
    Jump {
        /// Catalogue file.
        catalogue: PathBuf,
        #[arg(long = "m", default_value_t = 1)]
        m: i64,
        /// Divisor that m must be a multiple of.
        #[arg(long = "n-div", default_value_t = 1)]
        n_div: i64,
        /// Search tolerance (scalar literal, e.g. 1/1000).
        #[arg(long, default_value = "1/1000")]
        epsilon: String,
        /// Mean-residual tolerance (scalar literal).
        #[arg(long, default_value = "1/20")]
        eta: String,
        /// Shift-identity verification range.
        #[arg(long, default_value_t = 3)]
        l0: i64,
        #[arg(long = "t-max", default_value_t = 10_000_000)]
        t_max: i64,
        /// Keep searching until the shared level d is even.
        #[arg(long = "even-d", default_value_t = false)]
        even_d: bool,
        #[arg(long, value_enum, default_value_t = Convention::Formula)]
        convention: Convention,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Catalogue analysis: rationality partition, ratio matrix,
    /// resonance table, and carrier feasibility given a solution.
    Analyze {
        /// Catalogue file.
        catalogue: PathBuf,
        /// Jump report to drive the carrier analysis.
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the invariant self-test suites.
    Verify {
        /// Only run suites whose name contains this substring.
        #[arg(long)]
        suite: Option<String>,
        /// Additional catalogue fixture to parse first.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Resolves a path against CZJUMP_FIXTURE_DIR when the file is not
/// found as given.
fn resolve(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_path_buf();
    }
    if path.is_relative() {
        if let Ok(dir) = std::env::var("CZJUMP_FIXTURE_DIR") {
            let candidate = Path::new(&dir).join(path);
            if candidate.exists() {
                return candidate;
            }
        }
    }
    path.to_path_buf()
}

fn read_input(path: &Path) -> Result<String, Outcome> {
    let path = resolve(path);
    std::fs::read_to_string(&path).map_err(|e| Outcome {
        exit: commands::EXIT_INPUT_ERROR,
        human: format!("input error: {}: {e}\n", path.display()),
        json: None,
    })
}

fn finish(outcome: Outcome, report_path: Option<&Path>) -> ExitCode {
    print!("{}", outcome.human);
    if let (Some(path), Some(json)) = (report_path, outcome.json.as_ref()) {
        if let Err(e) = std::fs::write(path, json) {
            eprintln!("failed to write report {}: {e}", path.display());
            return ExitCode::from(commands::EXIT_INPUT_ERROR as u8);
        }
    }
    ExitCode::from(outcome.exit as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Index {
            catalogue,
            k_min,
            k_max,
            convention,
            report,
        } => {
            let text = match read_input(&catalogue) {
                Ok(t) => t,
                Err(o) => return finish(o, report.as_deref()),
            };
            let outcome = cmd_index(
                &text,
                &IndexArgs {
                    k_min,
                    k_max,
                    convention: convention.into(),
                },
            );
            finish(outcome, report.as_deref())
        }
        Command::Jump {
            catalogue,
            m,
            n_div,
            epsilon,
            eta,
            l0,
            t_max,
            even_d,
            convention,
            report,
        } => {
            let text = match read_input(&catalogue) {
                Ok(t) => t,
                Err(o) => return finish(o, report.as_deref()),
            };
            let outcome = cmd_jump(
                &text,
                &JumpArgs {
                    m,
                    n_div,
                    epsilon,
                    eta,
                    l0,
                    t_max,
                    even_d,
                    convention: convention.into(),
                },
            );
            finish(outcome, report.as_deref())
        }
        Command::Analyze {
            catalogue,
            solution,
            report,
        } => {
            let text = match read_input(&catalogue) {
                Ok(t) => t,
                Err(o) => return finish(o, report.as_deref()),
            };
            let solution_text = match solution {
                Some(path) => match read_input(&path) {
                    Ok(t) => Some(t),
                    Err(o) => return finish(o, report.as_deref()),
                },
                None => None,
            };
            let outcome = cmd_analyze(&text, solution_text.as_deref());
            finish(outcome, report.as_deref())
        }
        Command::Verify {
            suite,
            fixture,
            report,
        } => {
            let fixture_text = fixture.map(|path| {
                let path = resolve(&path);
                std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))
            });
            let outcome = cmd_verify(suite.as_deref(), fixture_text);
            finish(outcome, report.as_deref())
        }
    }
}
