use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hopf_cli::schema::{ProblemFile, ShapeFile};
use hopf_cli::slice::SliceJob;
use hopf_cli::{bench, eval, parse_vector, project, slice, CliError};

/// Grid-free Hamilton-Jacobi evaluation via the Hopf formula.
#[derive(Parser)]
#[command(name = "hopf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate φ(x, t) and its gradient at one point.
    Eval(EvalArgs),
    /// Export 2-D slices of φ as CSV grids (one file per time).
    Slice(SliceArgs),
    /// Closest point and Euclidean distance to a convex shape or union.
    Project(ProjectArgs),
    /// Timing benchmark over seeded random queries.
    Bench(BenchArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Problem file (JSON).
    #[arg(long)]
    problem: PathBuf,
    /// Query point, comma separated.
    #[arg(long)]
    x: String,
    /// Query time (t = 0 evaluates the initial data directly).
    #[arg(long)]
    t: f64,
    /// Machine-readable JSON output.
    #[arg(long)]
    json: bool,
    /// Exit nonzero when the solver did not converge.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct SliceArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Output directory for the CSV files.
    #[arg(long)]
    out: PathBuf,
    /// The two varying axes (zero-based).
    #[arg(long, default_value = "0,1")]
    axes: String,
    /// Range of the first axis, "lo,hi".
    #[arg(long, default_value = "-20,20")]
    range1: String,
    /// Range of the second axis, "lo,hi".
    #[arg(long, default_value = "-20,20")]
    range2: String,
    /// Samples along the first axis.
    #[arg(long, default_value_t = 100)]
    samples1: usize,
    /// Samples along the second axis.
    #[arg(long, default_value_t = 100)]
    samples2: usize,
    /// Times to evaluate, comma separated.
    #[arg(long, default_value = "0,5,10,15")]
    times: String,
    /// Fixed coordinates for the remaining axes (defaults to zeros).
    #[arg(long)]
    fixed: Option<String>,
    /// Also emit marching-squares contour segments at multiples of this
    /// level step.
    #[arg(long)]
    contours: Option<f64>,
    /// Chain warm starts along grid rows.
    #[arg(long)]
    warm_start: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct ProjectArgs {
    /// Shape file (JSON).
    #[arg(long)]
    shape: PathBuf,
    /// Query point, comma separated.
    #[arg(long)]
    y: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Dimensions to sweep, comma separated.
    #[arg(long, default_value = "4,8,12,16")]
    n: String,
    /// Evaluations per dimension.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Seed of the ChaCha20 sample generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

fn load_problem(path: &PathBuf) -> Result<ProblemFile, CliError> {
    ProblemFile::parse(&std::fs::read_to_string(path)?)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Eval(args) => {
            let problem = load_problem(&args.problem)?;
            let x = parse_vector(&args.x)?;
            let report = eval::run(&problem, &x, args.t)?;
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            if args.strict && !report.converged {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Slice(args) => {
            let problem = load_problem(&args.problem)?;
            let axes = parse_vector(&args.axes)?;
            if axes.len() != 2 {
                return Err(CliError::Config("--axes wants two indices".into()));
            }
            let parse_range = |text: &str| -> Result<(f64, f64), CliError> {
                let v = parse_vector(text)?;
                if v.len() != 2 {
                    return Err(CliError::Config("a range is \"lo,hi\"".into()));
                }
                Ok((v[0], v[1]))
            };
            let base = match &args.fixed {
                Some(text) => parse_vector(text)?,
                None => vec![0.0; problem.dimension],
            };
            let job = SliceJob {
                axis_i: axes[0] as usize,
                axis_j: axes[1] as usize,
                base,
                range_i: parse_range(&args.range1)?,
                range_j: parse_range(&args.range2)?,
                samples_i: args.samples1,
                samples_j: args.samples2,
                times: parse_vector(&args.times)?,
                contour_step: args.contours,
                warm_start: args.warm_start,
                workers: args.workers,
            };
            let written = slice::run(&problem, &job, &args.out)?;
            for path in written {
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Project(args) => {
            let file = ShapeFile::parse(&std::fs::read_to_string(&args.shape)?)?;
            let y = parse_vector(&args.y)?;
            let result = project::run(&file, &y)?;
            if args.json {
                println!("{}", project::to_json(&result));
            } else {
                print!("{}", project::render_text(&result));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench(args) => {
            let problem = load_problem(&args.problem)?;
            let dims = parse_vector(&args.n)?
                .into_iter()
                .map(|v| v as usize)
                .collect();
            let job = bench::BenchJob {
                dims,
                samples: args.samples,
                workers: args.workers,
                seed: args.seed,
            };
            let rows = bench::run(&problem, &job)?;
            if args.json {
                println!("{}", bench::to_json(&rows));
            } else {
                print!("{}", bench::render_table(&rows, args.workers));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
