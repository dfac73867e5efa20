//! Command-line front end. Machine-readable JSON goes to stdout, human
//! diagnostics to stderr. Exit codes: 0 success, 1 domain failure (limit
//! violations, infeasible requests, failed validation), 2 bad input or
//! file-format problems.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rtspa::apps::{
    blocking_force, gait_plan, plan_grip, simulate_gait, Direction, GripperLayout,
    ObjectDescriptor, ShapeClass,
};
use rtspa::geometry::ActuatorGeometry;
use rtspa::io;
use rtspa::material::{fit_ogden, MaterialModel};
use rtspa::sam::{forward_kinematics, tip_bend_angle, tip_twist, Configuration};
use rtspa::solver::{solve, SolveRequest, SolveStatus};
use rtspa::workspace::{mirror_yz, sweep, workspace_metrics, SweepMode, SweepSpec};
use rtspa::Error;

#[derive(Parser)]
#[command(name = "rtspa", version, about = "RT-SPA kinematics and planning toolkit")]
struct Cli {
    /// Geometry JSON file; built-in defaults when omitted.
    #[arg(long, global = true)]
    geometry: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a geometry against the design constraints.
    Validate,
    /// Sweep a mode and export the reachable point cloud.
    Workspace(WorkspaceArgs),
    /// Forward kinematics of one configuration.
    Fk(FkArgs),
    /// Find a configuration reaching a target point.
    Solve(SolveArgs),
    /// Fit the hyperelastic model to uniaxial test data.
    FitMaterial(FitArgs),
    /// Plan and simulate a locomotion gait.
    Gait(GaitArgs),
    /// Plan a grasp for an object.
    Grip(GripArgs),
    /// Blocking-force estimate for one configuration.
    Force(ForceArgs),
}

#[derive(Args)]
struct WorkspaceArgs {
    /// Sweep mode: mode1, mode2 or bending.
    #[arg(long)]
    mode: String,
    #[arg(long, default_value_t = 5.0)]
    angle_step: f64,
    #[arg(long, default_value_t = 50)]
    pressure_steps: usize,
    /// Append the x-mirrored copies.
    #[arg(long)]
    mirror: bool,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Optional ASCII PLY export.
    #[arg(long)]
    ply: Option<PathBuf>,
}

#[derive(Args)]
struct FkArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta2: f64,
    #[arg(long, default_value_t = 0.0)]
    pressure: f64,
}

#[derive(Args)]
struct SolveArgs {
    /// Target tip position as "x,y,z" in mm.
    #[arg(long, allow_hyphen_values = true)]
    target: String,
    /// Secondary tip-twist target, degrees.
    #[arg(long, allow_negative_numbers = true)]
    twist: Option<f64>,
    /// Position tolerance in mm.
    #[arg(long, default_value_t = 0.5)]
    tol: f64,
    #[arg(long, default_value_t = 5000)]
    max_evals: usize,
}

#[derive(Args)]
struct FitArgs {
    /// Uniaxial test data, lambda,stress_mpa CSV.
    #[arg(long)]
    stress_csv: PathBuf,
    /// Optional JSON report export.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GaitArgs {
    /// Direction: +x, -x, +y, -y, cw or ccw.
    #[arg(long)]
    direction: String,
    #[arg(long, default_value_t = 3)]
    cycles: usize,
    /// Optional plan JSON export.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GripArgs {
    /// Object size (largest grasped dimension), mm.
    #[arg(long)]
    size: f64,
    /// Shape class: compact, flat, oversized or delicate.
    #[arg(long)]
    shape: String,
    /// Gripper layout JSON; built-in defaults when omitted.
    #[arg(long)]
    layout: Option<PathBuf>,
    /// Optional plan JSON export.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ForceArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta1: f64,
    #[arg(long, default_value_t = 0.0)]
    pressure: f64,
}

fn init_threads() {
    if let Ok(v) = std::env::var("RTSPA_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring invalid RTSPA_THREADS={v:?}"),
        }
    }
}

fn load_geometry(cli: &Cli) -> Result<ActuatorGeometry, Error> {
    match &cli.geometry {
        Some(path) => io::load_geometry(path),
        None => Ok(ActuatorGeometry::default()),
    }
}

fn emit<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let geom = load_geometry(cli)?;
    match &cli.command {
        Command::Validate => {
            let report = geom.validate();
            emit(&report);
            if report.passed() {
                eprintln!("geometry ok");
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("geometry violates design constraints");
                Ok(ExitCode::from(1))
            }
        }
        Command::Workspace(args) => {
            let report = geom.validate();
            if !report.passed() {
                let names: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
                return Err(Error::InvalidGeometry(format!(
                    "failed checks: {}",
                    names.join(", ")
                )));
            }
            let mode = match args.mode.as_str() {
                "mode1" => SweepMode::Mode1,
                "mode2" => SweepMode::Mode2,
                "bending" => SweepMode::Bending,
                other => {
                    return Err(Error::Format(format!(
                        "unknown sweep mode {other:?}; expected mode1, mode2 or bending"
                    )))
                }
            };
            let mut spec = SweepSpec::new(mode);
            spec.angle_step = args.angle_step;
            spec.pressure_steps = args.pressure_steps;
            let mat = MaterialModel::default_for(&geom);
            let mut samples = sweep(&geom, &mat, &spec)?;
            if args.mirror {
                samples = mirror_yz(&samples);
            }
            io::write_workspace_csv(&args.out, &samples)?;
            if let Some(ply) = &args.ply {
                io::write_workspace_ply(ply, &samples)?;
            }
            let metrics = workspace_metrics(&samples);
            emit(&metrics);
            eprintln!("wrote {} samples to {}", samples.len(), args.out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Fk(args) => {
            let mat = MaterialModel::default_for(&geom);
            let cfg = Configuration::new(args.theta1, args.theta2, args.pressure);
            let chain = forward_kinematics(&geom, &mat, &cfg)?;
            let twist = tip_twist(&geom, &mat, &cfg)?;
            let bend = tip_bend_angle(&geom, &mat, &cfg)?;
            let tip = chain.tip_pose.position;
            emit(&serde_json::json!({
                "tip_mm": [tip.x, tip.y, tip.z],
                "tip_twist_deg": twist,
                "tip_bend_deg": bend,
                "markers_mm": chain
                    .markers
                    .iter()
                    .map(|m| [m.x, m.y, m.z])
                    .collect::<Vec<_>>(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => {
            let parts: Vec<f64> = args
                .target
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Error::Format(format!("bad --target {:?}: {e}", args.target)))?;
            if parts.len() != 3 {
                return Err(Error::Format(format!(
                    "bad --target {:?}: expected three comma-separated numbers",
                    args.target
                )));
            }
            let mat = MaterialModel::default_for(&geom);
            let mut req = SolveRequest::for_target(parts[0], parts[1], parts[2]);
            req.twist_target = args.twist;
            req.tolerance = args.tol;
            req.max_evals = args.max_evals;
            match solve(&geom, &mat, &req) {
                Ok(result) => {
                    let converged = result.status == SolveStatus::Converged;
                    emit(&result);
                    if converged {
                        Ok(ExitCode::SUCCESS)
                    } else {
                        eprintln!("best effort only: residual above tolerance");
                        Ok(ExitCode::from(1))
                    }
                }
                Err(err @ Error::Unreachable { .. }) => {
                    eprintln!("error: {err}");
                    Ok(ExitCode::from(2))
                }
                Err(err) => Err(err),
            }
        }
        Command::FitMaterial(args) => {
            let samples = io::read_stress_csv(&args.stress_csv)?;
            let fit = fit_ogden(&samples)?;
            let report = serde_json::json!({
                "mu_mpa": fit.model.mu,
                "alpha": fit.model.alpha,
                "rmse_mpa": fit.rmse_mpa,
                "youngs_modulus_mpa": fit.model.youngs_modulus(),
            });
            if let Some(out) = &args.out {
                std::fs::write(out, format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable output")))?;
                eprintln!("wrote fit to {}", out.display());
            }
            emit(&report);
            Ok(ExitCode::SUCCESS)
        }
        Command::Gait(args) => {
            let direction: Direction = args.direction.parse()?;
            let mat = MaterialModel::default_for(&geom);
            let plan = gait_plan(direction, &geom);
            if let Some(out) = &args.out {
                io::write_plan_json(out, &plan)?;
                eprintln!("wrote plan to {}", out.display());
            }
            let trajectory = simulate_gait(&plan, args.cycles, &geom, &mat)?;
            emit(&serde_json::json!({
                "label": plan.label,
                "period_s": plan.period_s,
                "steps": plan.steps,
                "trajectory": trajectory,
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Grip(args) => {
            let layout = match &args.layout {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    serde_json::from_str::<GripperLayout>(&text)
                        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?
                }
                None => GripperLayout::default(),
            };
            let shape = match args.shape.as_str() {
                "compact" => ShapeClass::Compact,
                "flat" => ShapeClass::Flat,
                "oversized" => ShapeClass::Oversized,
                "delicate" => ShapeClass::Delicate,
                other => {
                    return Err(Error::Format(format!(
                        "unknown shape {other:?}; expected compact, flat, oversized or delicate"
                    )))
                }
            };
            let mat = MaterialModel::default_for(&geom);
            let object = ObjectDescriptor { size_mm: args.size, shape };
            let plan = plan_grip(&layout, &geom, &mat, &object)?;
            if let Some(out) = &args.out {
                io::write_plan_json(out, &plan.sequence)?;
                eprintln!("wrote plan to {}", out.display());
            }
            emit(&plan);
            Ok(ExitCode::SUCCESS)
        }
        Command::Force(args) => {
            let mat = MaterialModel::default_for(&geom);
            let force = blocking_force(&geom, &mat, args.theta1, args.pressure)?;
            emit(&serde_json::json!({
                "force_n": force,
                "theta1_deg": args.theta1,
                "pressure_mpa": args.pressure,
            }));
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// 2 for malformed inputs, 1 for domain violations.
fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Format(_) | Error::InvalidGeometry(_) | Error::Io(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}
