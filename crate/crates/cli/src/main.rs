use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod demo;
mod source;

/// Smooth implicit regions from set expressions over inequalities.
#[derive(Debug, Parser)]
#[command(name = "smoothset", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the program as a single Desmos inequality.
    Compile {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value_t = Emit::Desmos)]
        emit: Emit,
        /// Treat the input as answers to the original postfix script and
        /// print its transcript. `--fixture appendix` is the bundled session.
        #[arg(long)]
        appendix: bool,
    },
    /// Rasterize to a PGM and optionally trace the boundary to an SVG.
    Render {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        contour: Option<PathBuf>,
    },
    /// Mismatch against the crisp set for each sharpness, as TSV.
    ErrorMap {
        #[command(flatten)]
        source: OptionalSource,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,50")]
        a_list: Vec<f64>,
        /// Compare two programs (fixture names or files) with each other.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        compare: Option<Vec<String>>,
        /// Exit 2 unless the mismatch column never increases.
        #[arg(long)]
        check: bool,
    },
    /// Forward-mode gradients against central differences.
    Gradcheck {
        #[command(flatten)]
        source: SourceArgs,
        /// Sampling window `x0,x1,y0,y1`; defaults to the fixture's.
        #[arg(long, allow_hyphen_values = true, value_parser = source::parse_window)]
        window: Option<[f64; 4]>,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-5)]
        tolerance: f64,
        /// Skip points this close to the boundary or a singularity.
        #[arg(long, default_value_t = 1e-3)]
        exclusion: f64,
    },
    /// Run a bundled example end to end.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
        #[arg(long, default_value = "smoothset-demo")]
        out_dir: PathBuf,
        /// Cells per side.
        #[arg(long, default_value_t = 512)]
        res: usize,
    },
    /// Replay a session of the original postfix script, bundled one by default.
    ReplayAppendix { file: Option<PathBuf> },
    /// List the bundled fixtures.
    Fixtures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// Leaf bodies as written.
    Desmos,
    /// Leaf bodies re-emitted from the parsed expressions.
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DemoName {
    Circles,
    Batman,
    Example1,
    Distributive,
    Softplus,
    Minmax,
    Animation,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Program file.
    #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
    file: Option<PathBuf>,
    /// A bundled program instead of a file.
    #[arg(long)]
    fixture: Option<String>,
    /// Use this sharpness for every definition.
    #[arg(long)]
    sharpness: Option<f64>,
}

/// Like [`SourceArgs`], but may be omitted in favour of `--compare`.
#[derive(Debug, Args)]
struct OptionalSource {
    #[arg(conflicts_with_all = ["fixture", "compare"])]
    file: Option<PathBuf>,
    #[arg(long, conflicts_with = "compare")]
    fixture: Option<String>,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Window `x0,x1,y0,y1`; defaults to the fixture's.
    #[arg(long, allow_hyphen_values = true, value_parser = source::parse_window)]
    grid: Option<[f64; 4]>,
    /// `N` or `NXxNY` cells.
    #[arg(long, default_value = "512", value_parser = source::parse_res)]
    res: (usize, usize),
    /// Evaluate on one thread.
    #[arg(long)]
    sequential: bool,
}

/// How a command failed.
#[derive(Debug)]
enum Failure {
    /// Bad input, flags, files or programs. Exit 1.
    User(anyhow::Error),
    /// A checked property did not hold. Exit 2.
    Invariant(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::User(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Compile {
            source,
            emit,
            appendix,
        } => commands::compile(&source, emit, appendix),
        Command::Render {
            source,
            grid,
            out,
            contour,
        } => commands::render(&source, &grid, &out, contour.as_deref()),
        Command::ErrorMap {
            source,
            grid,
            a_list,
            compare,
            check,
        } => commands::error_map(&source, &grid, &a_list, compare.as_deref(), check),
        Command::Gradcheck {
            source,
            window,
            points,
            seed,
            tolerance,
            exclusion,
        } => {
            let config = smoothset::gradcheck::GradcheckConfig {
                points,
                seed,
                tolerance,
                exclusion,
                ..Default::default()
            };
            commands::gradcheck(&source, window, &config)
        }
        Command::Demo { name, out_dir, res } => demo::run(name, &out_dir, res),
        Command::ReplayAppendix { file } => commands::replay(file.as_deref()),
        Command::Fixtures => {
            commands::list_fixtures();
            Ok(())
        }
    }
}

/// The error and its causes, skipping causes the message already spells out.
fn describe(e: &anyhow::Error) -> String {
    let mut text = String::new();
    for cause in e.chain() {
        let cause = cause.to_string();
        if !text.ends_with(&cause) {
            if !text.is_empty() {
                text.push_str(": ");
            }
            text.push_str(&cause);
        }
    }
    text
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(e)) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(1)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
