use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinorq::GeneratorConvention;
use spinorq_cli::batch::run_batch;
use spinorq_cli::config::{assemble, parse_sign, Angle, Format, Kind, Overrides, OUT_DIR_ENV};
use spinorq_cli::emit::{to_json, write_outputs};
use spinorq_cli::CliError;

#[derive(Parser)]
#[command(name = "spinorq", version, about = "Spinor classification and search experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sign classification of R_ij(θ)|Γ_j⟩ with the observable ±Γ_j.
    Classify(RunArgs),
    /// Grover search from cos θ|α⟩ + sin θ|β⟩.
    Search(RunArgs),
    /// Evolution under the bivector Hamiltonian up to the readout time.
    HamSearch(RunArgs),
    /// Checks the Clifford relations of the generator set.
    VerifyAlgebra(RunArgs),
    /// Chiral sector weights of R_ij(θ)|Γ_j⟩.
    Chirality(RunArgs),
    /// Runs several config files concurrently.
    Batch(BatchArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; inline flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "n")]
    n_qubits: Option<usize>,
    /// Radians, or a multiple of π such as pi/6 or 3pi/8.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    g_min: Option<f64>,
    /// Sign of the classification observable, +1 or -1.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    operator_sign: Option<spinorq::Sign>,
    #[arg(long, value_parser = |s: &str| s.parse::<GeneratorConvention>().map_err(|e| e.to_string()))]
    convention: Option<GeneratorConvention>,
    /// Output directory; falls back to $SPINORQ_OUT_DIR.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Comma-separated list of json, csv, svg.
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// File stem for the outputs.
    #[arg(long)]
    name: Option<String>,
    /// Add the odd generator to verify-algebra.
    #[arg(long)]
    include_odd: bool,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            n_qubits: self.n_qubits,
            theta: self.theta.as_deref().map(Angle::from_flag),
            i: self.i,
            j: self.j,
            shots: self.shots,
            seed: self.seed,
            delta: self.delta,
            g_min: self.g_min,
            operator_sign: self.operator_sign,
            convention: self.convention,
            out_dir: self.out_dir.clone(),
            formats: self.format.clone(),
            name: self.name.clone(),
            include_odd: self.include_odd,
        }
    }
}

#[derive(Args)]
struct BatchArgs {
    /// Config files, each naming its own kind.
    #[arg(required = true)]
    configs: Vec<PathBuf>,
    /// Output directory; falls back to $SPINORQ_OUT_DIR.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
}

fn run_single(kind: Kind, args: &RunArgs) -> Result<(), CliError> {
    let config = assemble(args.config.as_deref(), Some(kind), &args.overrides())?;
    let formats = config.formats();
    let out_dir = config.resolved_out_dir();
    if out_dir.is_none() && formats.iter().any(|f| *f != Format::Json) {
        return Err(CliError::config(
            format!("csv and svg output need --out-dir or {OUT_DIR_ENV}"),
            "out_dir",
        ));
    }
    let record = spinorq_cli::run::run(&config)?;
    if let Some(dir) = out_dir {
        write_outputs(&record, &dir, &config.base_name(), &formats)?;
    }
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(to_json(&record).as_bytes());
    Ok(())
}

fn run_batch_command(args: &BatchArgs) -> Result<u8, CliError> {
    let out_dir = args
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .ok_or_else(|| CliError::config(format!("batch needs --out-dir or {OUT_DIR_ENV}"), "out_dir"))?;
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let overrides = Overrides {
        out_dir: Some(out_dir.clone()),
        ..Default::default()
    };
    let entries = run_batch(&args.configs, &out_dir, jobs, &overrides)?;
    let mut stdout = std::io::stdout().lock();
    for e in &entries {
        let _ = writeln!(stdout, "{}", serde_json::to_string(e).expect("entry serializes"));
    }
    Ok(entries.iter().map(|e| e.exit_code).max().unwrap_or(0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(a) => run_single(Kind::Classify, a).map(|_| 0),
        Command::Search(a) => run_single(Kind::Search, a).map(|_| 0),
        Command::HamSearch(a) => run_single(Kind::HamSearch, a).map(|_| 0),
        Command::VerifyAlgebra(a) => run_single(Kind::VerifyAlgebra, a).map(|_| 0),
        Command::Chirality(a) => run_single(Kind::Chirality, a).map(|_| 0),
        Command::Batch(a) => run_batch_command(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code())
        }
    }
}
