//! `camnet`: sensing-quality evaluation and reconfiguration for camera
//! networks observing point targets.
//!
//! Exit codes: 0 success, 1 input error, 2 `evaluate` found uncovered
//! targets, 3 `optimize`/`oracle` ended infeasible (outputs still written).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use camnet_cli::commands::{
    cmd_evaluate, cmd_map, cmd_optimize, cmd_oracle, cmd_simulate_error, CommandOutput,
};
use camnet_cli::raster::PlaneSpec;
use camnet_cli::scene_file::parse_grid_size;
use camnet_core::{Mode, ObjectiveKind, DEFAULT_MAX_EVALS, DEFAULT_STARTS};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Ptz,
    Drone,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Self {
        match arg {
            ModeArg::Ptz => Mode::Ptz,
            ModeArg::Drone => Mode::Drone,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Mean,
    Minimax,
}

impl From<ObjectiveArg> for ObjectiveKind {
    fn from(arg: ObjectiveArg) -> Self {
        match arg {
            ObjectiveArg::Mean => ObjectiveKind::Mean,
            ObjectiveArg::Minimax => ObjectiveKind::Minimax,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "camnet", version, about = "Sensing-quality evaluation and reconfiguration for camera networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a scene: per-pair quality, per-target fusion, objective values.
    Evaluate {
        /// Scene JSON file.
        scene: PathBuf,
    },
    /// Reconfigure the network with the multi-start solver.
    Optimize {
        scene: PathBuf,
        /// Which variables move: camera axes (ptz) or positions (drone).
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "mean")]
        objective: ObjectiveArg,
        /// Independent local searches (start 0 is the current configuration).
        #[arg(long, default_value_t = DEFAULT_STARTS)]
        starts: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total objective-evaluation budget across starts.
        #[arg(long, default_value_t = DEFAULT_MAX_EVALS)]
        max_evals: u32,
        /// Where to write the optimized scene.
        #[arg(long)]
        out: PathBuf,
    },
    /// Export the fused-quality map of a workspace plane.
    Map {
        scene: PathBuf,
        /// Raster size as WxH, e.g. 64x48.
        #[arg(long)]
        grid: String,
        /// Sampling plane, e.g. z=0.
        #[arg(long)]
        plane: String,
        /// Output file; .pgm or .csv picks the format.
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive grid-search oracle with a resolution slack estimate.
    Oracle {
        scene: PathBuf,
        /// Grid vertices per decision variable.
        #[arg(long)]
        grid_points: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "mean")]
        objective: ObjectiveArg,
        /// Optional path for the best-vertex scene.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pixel-quantization error trials for one camera-target pair.
    SimulateError {
        scene: PathBuf,
        #[arg(long)]
        camera: String,
        #[arg(long)]
        target: String,
        /// Segment length on the target plane, millimeters.
        #[arg(long, default_value_t = 100.0)]
        length: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(command: Command) -> anyhow::Result<CommandOutput> {
    match command {
        Command::Evaluate { scene } => cmd_evaluate(&scene),
        Command::Optimize {
            scene,
            mode,
            objective,
            starts,
            seed,
            max_evals,
            out,
        } => cmd_optimize(
            &scene,
            mode.into(),
            objective.into(),
            starts,
            seed,
            max_evals,
            &out,
        ),
        Command::Map {
            scene,
            grid,
            plane,
            out,
        } => {
            let grid = parse_grid_size(&grid)?;
            let plane: PlaneSpec = plane.parse()?;
            cmd_map(&scene, grid, plane, &out)
        }
        Command::Oracle {
            scene,
            grid_points,
            mode,
            objective,
            out,
        } => cmd_oracle(
            &scene,
            grid_points,
            mode.into(),
            objective.into(),
            out.as_deref(),
        ),
        Command::SimulateError {
            scene,
            camera,
            target,
            length,
            trials,
            seed,
        } => cmd_simulate_error(&scene, &camera, &target, length, trials, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are not errors; anything else is input error.
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli.command) {
        Ok(output) => {
            print!("{}", output.stdout);
            ExitCode::from(output.exit_code as u8)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
