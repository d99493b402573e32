use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qfeedback::csv::emit_csv;
use qfeedback::scenario::{self, MonteCarloConfig, ScenarioSpec, PRESET_NAMES};
use qfeedback::{run_sweep, EstimateStrategy, Error, Result};

#[derive(Parser)]
#[command(name = "qfeedback", version, about = "Probe-qubit feedback compensation sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a σ sweep and write CSV.
    Run(RunArgs),
    /// List the built-in presets.
    ListPresets,
    /// Parse and validate a scenario file.
    Validate { scenario_file: PathBuf },
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario file (TOML). Optional when --preset is given.
    scenario_file: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    sigma_start: Option<f64>,
    #[arg(long)]
    sigma_stop: Option<f64>,
    #[arg(long)]
    sigma_points: Option<usize>,
    #[arg(long, value_enum)]
    estimates: Option<StrategyArg>,
    #[arg(long)]
    mc_shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Zero,
    Mean,
    Eigenvalue,
    WeakValue,
    Custom,
}

fn load(path: &PathBuf) -> Result<ScenarioSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    scenario::parse_scenario(&text)
}

fn run(args: RunArgs) -> Result<()> {
    let mut spec = match (&args.scenario_file, &args.preset) {
        (Some(path), None) => load(path)?,
        (None, Some(name)) => scenario::preset(name)
            .ok_or_else(|| Error::Validation(format!("unknown preset `{name}` (try list-presets)")))?,
        (Some(_), Some(_)) => return Err(Error::Validation("give a scenario file or --preset, not both".into())),
        (None, None) => return Err(Error::Validation("give a scenario file or --preset".into())),
    };

    if let Some(s) = args.sigma_start {
        spec.sweep.start = s;
    }
    if let Some(s) = args.sigma_stop {
        spec.sweep.stop = s;
    }
    if let Some(n) = args.sigma_points {
        spec.sweep.points = n;
    }
    if let Some(strategy) = args.estimates {
        spec.strategy = match strategy {
            StrategyArg::Zero => EstimateStrategy::Zero,
            StrategyArg::Mean => EstimateStrategy::Mean,
            StrategyArg::Eigenvalue => EstimateStrategy::Eigenvalue,
            StrategyArg::WeakValue => EstimateStrategy::WeakValue,
            StrategyArg::Custom => match spec.strategy {
                EstimateStrategy::Custom(_) => spec.strategy,
                _ => return Err(Error::Validation("--estimates custom needs values from the scenario file".into())),
            },
        };
    }
    match (args.mc_shots, args.seed) {
        (Some(shots), seed) => {
            let seed = seed.or(spec.monte_carlo.map(|mc| mc.seed)).unwrap_or(0);
            spec.monte_carlo = Some(MonteCarloConfig { shots, seed });
        }
        (None, Some(seed)) => match spec.monte_carlo.as_mut() {
            Some(mc) => mc.seed = seed,
            None => return Err(Error::Validation("--seed needs --mc-shots or a [monte_carlo] table".into())),
        },
        (None, None) => {}
    }

    let report = run_sweep(&spec)?;
    let csv = emit_csv(&report.rows, &report.header);
    match args.output {
        Some(path) => std::fs::write(&path, csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::ListPresets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            Ok(())
        }
        Command::Validate { scenario_file } => load(&scenario_file).map(|spec| {
            println!("ok: {} (dimension {}, {} outcomes, {} estimates)", spec.name, spec.dimension(), spec.povm.len(), spec.strategy.name());
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
