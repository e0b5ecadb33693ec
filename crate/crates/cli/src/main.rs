use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dms_core::net::{InitMode, Nonlinearity};

mod commands;
mod io;

/// Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
#[derive(Parser)]
#[command(name = "dms", version, about = "Discrete morphological symmetry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the orbit basis of equivariant maps between two representations.
    Basis(BasisArgs),
    /// Count free parameters of an equivariant map.
    Count(CountArgs),
    /// Augment a CSV dataset with every group element, or orbit-average targets.
    Augment(AugmentArgs),
    #[command(subcommand)]
    Net(NetCommand),
    #[command(subcommand)]
    Robot(RobotCommand),
}

#[derive(Args)]
struct BasisArgs {
    #[arg(long)]
    rep_in: PathBuf,
    #[arg(long)]
    rep_out: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Also compute the dense nullspace and compare spans.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = dms_core::basis::DEFAULT_ORACLE_TOL)]
    tol: f64,
    /// Write a JSON report next to the output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    rep_in: PathBuf,
    #[arg(long)]
    rep_out: PathBuf,
    /// Print the result as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AugmentArgs {
    /// Symmetry file: named representations and isometries.
    #[arg(long)]
    group: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Input is group-major stacked targets; write their orbit averages.
    #[arg(long)]
    orbit_average: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum NetCommand {
    /// Per-layer pre-activation statistics of a freshly initialized deep net.
    InitStats(InitStatsArgs),
    /// Check a weights file for equivariance.
    Verify(NetVerifyArgs),
    /// Fit a net to a random equivariant teacher by gradient descent.
    DemoTrain(DemoTrainArgs),
}

#[derive(Args)]
struct InitStatsArgs {
    /// Built-in group name (c2, k4, d8, ...) or representation file.
    #[arg(long)]
    group: String,
    #[arg(long, default_value_t = 20)]
    depth: usize,
    #[arg(long, default_value_t = 256)]
    width: usize,
    #[arg(long, default_value = "relu")]
    nonlinearity: Nonlinearity,
    /// fan_in, fan_out or constant:<std>
    #[arg(long, default_value = "fan_in")]
    init: InitMode,
    #[arg(long, default_value_t = 256)]
    batch: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the table as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct NetVerifyArgs {
    /// Net spec JSON.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    weights: PathBuf,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DemoTrainArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Where to write the trained weights.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 0.05)]
    lr: f64,
    #[arg(long, default_value_t = 128)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum RobotCommand {
    /// Certify candidate symmetries of a robot on sampled configurations.
    Verify(RobotVerifyArgs),
}

#[derive(Args)]
struct RobotVerifyArgs {
    #[arg(long)]
    robot: PathBuf,
    #[arg(long)]
    candidates: PathBuf,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Basis(a) => commands::basis::run(a),
        Command::Count(a) => commands::count::run(a),
        Command::Augment(a) => commands::augment::run(a),
        Command::Net(NetCommand::InitStats(a)) => commands::net::init_stats(a),
        Command::Net(NetCommand::Verify(a)) => commands::net::verify(a),
        Command::Net(NetCommand::DemoTrain(a)) => commands::net::demo_train(a),
        Command::Robot(RobotCommand::Verify(a)) => commands::robot::verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
