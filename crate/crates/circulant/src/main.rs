use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use circulant::cli::{
    cmd_analyze, cmd_oracle, cmd_sweep, AnalyzeOptions, AppError, ConstraintSetName, Source,
};
use circulant::liealg::{BuiltinFamily, ParameterAssignment};

/// Exact symbolic curvature and circulant-structure analysis for
/// left-invariant metrics on Lie groups.
#[derive(Parser)]
#[command(name = "circulant", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SourceArgs {
    /// Path to a JSON input document.
    #[arg(long, value_name = "PATH", conflicts_with = "family")]
    input: Option<PathBuf>,
    /// Built-in family id: g4.5 or g4.6.
    #[arg(long, value_name = "ID")]
    family: Option<String>,
}

impl SourceArgs {
    fn resolve(&self) -> Result<Source, AppError> {
        match (&self.input, &self.family) {
            (Some(path), None) => Ok(Source::File(path.clone())),
            (None, Some(id)) => {
                let family: BuiltinFamily =
                    id.parse()
                        .map_err(|e: circulant::liealg::LieAlgebraError| {
                            AppError::Schema(e.to_string())
                        })?;
                Ok(Source::Family(family))
            }
            _ => Err(AppError::Schema(
                "exactly one of --input or --family is required".to_string(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis and write the report as JSON.
    Analyze {
        #[command(flatten)]
        source: SourceArgs,
        /// Substitute exact parameter values first, e.g. "a=1,b=3/2".
        #[arg(long, value_name = "ASSIGN")]
        assign: Option<String>,
        /// Write the report here instead of stdout.
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Exit with status 5 if any structure verdict fails.
        #[arg(long)]
        strict: bool,
    },
    /// Evaluate one constraint set exactly over a rational grid.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        /// Constraint set name: r-invariance, rloc, w0, w1, einstein, const-curv.
        #[arg(long, value_name = "NAME")]
        set: String,
        /// Grid such as "a=-1:1:1/8;b=-1:1:1/8".
        #[arg(long, value_name = "SPEC")]
        grid: String,
        /// Write the listing here instead of stdout.
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Compare the full curvature-invariance constraints against the reduced
    /// component list, point by point.
    Oracle {
        #[command(flatten)]
        source: SourceArgs,
        /// Grid such as "a=-1:1:1/8;b=-1:1:1/8".
        #[arg(long, value_name = "SPEC")]
        grid: String,
    },
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), AppError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(AppError::Io),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Analyze {
            source,
            assign,
            output,
            strict,
        } => {
            let assign = match assign {
                Some(src) => Some(
                    ParameterAssignment::parse(&src)
                        .map_err(|e| AppError::Schema(e.to_string()))?,
                ),
                None => None,
            };
            let report = cmd_analyze(&AnalyzeOptions {
                source: source.resolve()?,
                assign,
                strict,
            })?;
            emit(&report.to_json(), output.as_ref())
        }
        Command::Sweep {
            source,
            set,
            grid,
            output,
        } => {
            let name: ConstraintSetName = set.parse()?;
            let out = cmd_sweep(&source.resolve()?, name, &grid)?;
            let mut text =
                serde_json::to_string_pretty(&out).map_err(|e| AppError::Schema(e.to_string()))?;
            text.push('\n');
            emit(&text, output.as_ref())
        }
        Command::Oracle { source, grid } => {
            let out = cmd_oracle(&source.resolve()?, &grid)?;
            if out.equivalent {
                println!(
                    "equivalent: the full invariance set and the reduced list agree at all {} grid points",
                    out.points_checked
                );
            } else {
                let c = out.counterexample.expect("inequivalent implies witness");
                let point: Vec<String> = c.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!(
                    "NOT equivalent: at ({}) full set satisfied = {}, reduced list satisfied = {}",
                    point.join(", "),
                    c.full_satisfied,
                    c.reduced_satisfied
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
