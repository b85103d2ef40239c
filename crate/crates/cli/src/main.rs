use std::fs::File;
use std::io::{self, BufReader, BufWriter, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vext::oracle::{as_expected, enumerate_fragment, small_universe, summary, vet_exhaustive, RelationSample};
use vext::seqcore::Limits;
use vext_cli::eval::{Session, Settings};
use vext_cli::{run, RunOptions};

/// Exact and lazy arithmetic on virtual numbers, and a verifier for the
/// transfer rules of the extension.
#[derive(Parser)]
#[command(name = "virtual-ext", version)]
struct Cli {
    /// Run statements from a file instead of reading stdin.
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,
    /// Continue a script after a diagnostic.
    #[arg(long, requires = "script")]
    keep_going: bool,
    /// Emit one JSON object per result.
    #[arg(long)]
    json: bool,
    /// Largest index sampled by lazy checks.
    #[arg(long, default_value_t = vext::lazy::DEFAULT_HORIZON)]
    horizon: u64,
    /// Tolerance of lazy checks.
    #[arg(long, default_value_t = vext::lazy::DEFAULT_TOL)]
    tol: f64,
    /// Largest period of an exact value.
    #[arg(long, default_value_t = Limits::default().max_period)]
    max_period: usize,
    /// Largest polynomial degree of an exact value.
    #[arg(long, default_value_t = Limits::default().max_degree)]
    max_degree: usize,
    /// Seed for every random choice (relation sampling in `vet`).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every transfer item on a finite fragment model.
    Vet(VetArgs),
}

#[derive(Args)]
struct VetArgs {
    /// Size of the base universe.
    #[arg(long, default_value_t = 2)]
    universe: usize,
    /// Largest period of the fragment values.
    #[arg(long, default_value_t = 2)]
    max_period: usize,
    /// Largest relation arity.
    #[arg(long, default_value_t = 2)]
    arity: usize,
    /// Enumerate every relation (the default).
    #[arg(long, conflicts_with = "random")]
    all: bool,
    /// Sample this many random relations per arity instead.
    #[arg(long, value_name = "COUNT")]
    random: Option<usize>,
    /// Write the reports as JSON lines to this file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Print the reports as JSON lines instead of the table.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Some(Command::Vet(args)) => vet(args, cli.seed),
        None => calc(&cli),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn calc(cli: &Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Err("--tol must be a nonnegative number".into());
    }
    let settings = Settings {
        horizon: cli.horizon.max(1),
        tol: cli.tol,
        limits: Limits { max_period: cli.max_period.max(1), max_degree: cli.max_degree },
    };
    let mut session = Session::new(settings);
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    match &cli.script {
        Some(path) => {
            let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let opts = RunOptions { json: cli.json, echo: true, stop_on_error: !cli.keep_going, prompt: false };
            let errors = run(&mut session, BufReader::new(file), &mut out, &mut err, opts)?;
            out.flush()?;
            Ok(if errors == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        None => {
            let stdin = io::stdin();
            let opts = RunOptions { json: cli.json, echo: false, stop_on_error: false, prompt: stdin.is_terminal() };
            run(&mut session, stdin.lock(), &mut out, &mut err, opts)?;
            out.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn vet(args: &VetArgs, seed: u64) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let model = enumerate_fragment(&small_universe(args.universe), args.max_period)?;
    let sample = match args.random {
        Some(count) => RelationSample::Random { seed, count },
        None => RelationSample::All,
    };
    let reports = vet_exhaustive(&model, args.arity, sample)?;
    let lines: Vec<String> = reports.iter().map(serde_json::to_string).collect::<Result<_, _>>()?;
    if let Some(path) = &args.out {
        let mut f = BufWriter::new(File::create(path).map_err(|e| format!("{}: {e}", path.display()))?);
        for l in &lines {
            writeln!(f, "{l}")?;
        }
        f.flush()?;
    }
    if args.json {
        for l in &lines {
            println!("{l}");
        }
    } else {
        println!("{}", model.describe());
        print!("{}", summary(&reports));
    }
    Ok(if reports.iter().all(as_expected) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
