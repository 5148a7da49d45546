use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ionsim::experiment::{run, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "ionsim", version, about = "Digital open-system simulation with trapped-ion gate circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every circuit identity against its reference unitary or channel
    VerifyIdentities(Flags),
    /// Repeated coherent many-body blocks
    CoherentEvolve(Flags),
    /// Repeated stabilizer pumping
    Pump(Flags),
    /// Cool the two-plaquette toric code
    CoolToric(Flags),
    /// Cool the seven-qubit color code
    CoolColorcode(Flags),
    /// Encoded |0> and transversal logical gates
    LogicalDemo(Flags),
    /// Repeated QND stabilizer readout
    QndMeasure(Flags),
    /// Monte Carlo over noisy pump sequences
    NoiseMc(Flags),
    /// Trotterized circuits against the integrated master equation
    TrotterVsOde(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON experiment config
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed, overrides the config
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV files and the manifest
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the circuits used and write circuit.txt
    #[arg(long)]
    dump_circuit: bool,
    /// Build subset MS gates from global MS gates and refocusing pulses
    #[arg(long)]
    refocus: bool,
    /// Compare unitaries without global-phase freedom
    #[arg(long)]
    strict_phase: bool,
}

fn split(cmd: Command) -> (Experiment, Flags) {
    match cmd {
        Command::VerifyIdentities(f) => (Experiment::VerifyIdentities, f),
        Command::CoherentEvolve(f) => (Experiment::CoherentEvolve, f),
        Command::Pump(f) => (Experiment::Pump, f),
        Command::CoolToric(f) => (Experiment::CoolToric, f),
        Command::CoolColorcode(f) => (Experiment::CoolColorcode, f),
        Command::LogicalDemo(f) => (Experiment::LogicalDemo, f),
        Command::QndMeasure(f) => (Experiment::QndMeasure, f),
        Command::NoiseMc(f) => (Experiment::NoiseMc, f),
        Command::TrotterVsOde(f) => (Experiment::TrotterVsOde, f),
    }
}

fn fail(kind: &str, message: String) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": kind, "message": message }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let (experiment, flags) = split(Cli::parse().command);
    let mut config = match &flags.config {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(c) => c,
            Err(e) => return fail("config", e.to_string()),
        },
        None => ExperimentConfig::new(experiment),
    };
    if config.experiment != experiment {
        return fail(
            "config",
            format!("config is for {} but the subcommand is {}", config.experiment.name(), experiment.name()),
        );
    }
    if flags.seed.is_some() {
        config.seed = flags.seed;
    }
    config.refocus |= flags.refocus;
    config.strict_phase |= flags.strict_phase;
    config.dump_circuit |= flags.dump_circuit;
    let out_dir = flags.out.or_else(|| config.out.clone());
    match run(&config, out_dir.as_deref()) {
        Ok(out) => {
            for line in &out.lines {
                println!("{line}");
            }
            if config.dump_circuit {
                for c in &out.circuits {
                    print!("{c}");
                }
            }
            if out_dir.is_none() {
                for (name, body) in &out.files {
                    if name.ends_with(".csv") && !name.starts_with("trajectories") {
                        println!("== {name}");
                        print!("{body}");
                    }
                }
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(error_kind(&e), e.to_string()),
    }
}

fn error_kind(e: &ionsim::Error) -> &'static str {
    use ionsim::Error::*;
    match e {
        Capacity { .. } => "capacity",
        QubitMismatch { .. } | QubitOutOfRange { .. } => "qubits",
        Domain(_) => "domain",
        InvalidCircuit(_) => "circuit",
        NotHermitian { .. } => "hermiticity",
        Completeness { .. } => "completeness",
        Accuracy { .. } => "accuracy",
        Parse { .. } => "parse",
        Config(_) => "config",
        Io(_) => "io",
    }
}
