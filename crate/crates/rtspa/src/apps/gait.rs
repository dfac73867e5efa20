//! Quadruped gait primitives and the idealized anchored-foot locomotion
//! model.
//!
//! The robot carries four actuators as legs at the corners of a square
//! body. Legs 0 and 1 point along +x, legs 2 and 3 along -x; odd legs are
//! mirrored assemblies of the even ones. A Mixed-mode θ2 lean re-orients a
//! leg's push direction in the ground plane, which is how the ±y and
//! rotation plans steer.
//!
//! Anchor model: when a leg's pressure rises its foot is pinned and the body
//! displaces by minus the mean stance-foot displacement (plus the matching
//! rotation about the body center); while pressure falls the feet are free
//! and the body stays put.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::ActuatorGeometry;
use crate::material::MaterialModel;
use crate::sam::{forward_kinematics, Configuration};

/// Half side of the square body, mm (mount lever arm of the anchor model).
pub const BODY_HALF_MM: f64 = 50.0;

/// Fraction of the contact limits used by the plan angles, leaving margin
/// for any valid geometry.
const REORIENT_FRAC: f64 = 0.75;
const ROTATE_FRAC: f64 = 0.67;

/// Locomotion directions of the gait planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    PlusX,
    MinusX,
    PlusY,
    MinusY,
    Cw,
    Ccw,
}

impl std::str::FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+x" => Ok(Direction::PlusX),
            "-x" => Ok(Direction::MinusX),
            "+y" => Ok(Direction::PlusY),
            "-y" => Ok(Direction::MinusY),
            "cw" => Ok(Direction::Cw),
            "ccw" => Ok(Direction::Ccw),
            other => Err(Error::Format(format!(
                "unknown direction {other:?}; expected one of +x, -x, +y, -y, cw, ccw"
            ))),
        }
    }
}

/// One timed command for one actuator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommandStep {
    pub t_s: f64,
    pub actuator: usize,
    pub config: Configuration,
}

// Wire schema for plan export.
#[derive(Serialize, Deserialize)]
struct WireStep {
    t_s: f64,
    actuator: usize,
    theta1_deg: f64,
    theta2_deg: f64,
    pressure_mpa: f64,
}

impl Serialize for CommandStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireStep {
            t_s: self.t_s,
            actuator: self.actuator,
            theta1_deg: self.config.transform.theta1,
            theta2_deg: self.config.transform.theta2,
            pressure_mpa: self.config.pressure,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CommandStep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WireStep::deserialize(d)?;
        if w.actuator >= 4 {
            return Err(D::Error::custom(format!("actuator id {} out of range", w.actuator)));
        }
        Ok(CommandStep {
            t_s: w.t_s,
            actuator: w.actuator,
            config: Configuration::new(w.theta1_deg, w.theta2_deg, w.pressure_mpa),
        })
    }
}

/// Timed list of per-actuator configurations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommandSequence {
    pub label: String,
    /// Cycle period in seconds; replaying the steps shifted by this period
    /// repeats the motion.
    pub period_s: f64,
    pub steps: Vec<CommandStep>,
}

impl CommandSequence {
    /// Checks times non-decreasing, actuator ids < 4 and every configuration
    /// against `geom`.
    pub fn validate(&self, geom: &ActuatorGeometry) -> Result<()> {
        let mut prev = f64::NEG_INFINITY;
        for s in &self.steps {
            if s.t_s < prev {
                return Err(Error::Format(format!(
                    "step times must be non-decreasing, got {} after {}",
                    s.t_s, prev
                )));
            }
            prev = s.t_s;
            if s.actuator >= 4 {
                return Err(Error::Format(format!("actuator id {} out of range", s.actuator)));
            }
            s.config.validate(geom)?;
        }
        Ok(())
    }
}

fn step(t_s: f64, actuator: usize, theta1: f64, theta2: f64, pressure: f64) -> CommandStep {
    CommandStep {
        t_s,
        actuator,
        config: Configuration::new(theta1, theta2, pressure),
    }
}

/// Builds the cyclic plan for one locomotion direction.
///
/// ±x keep every actuator at θ1 = θ2 = 0 and cycle pressure on one opposing
/// pair. ±y first re-orient all four actuators with a Mixed-mode lean
/// (motor A compensating so θ1 stays zero), then cycle pressure. cw/ccw
/// set one diagonal pair perpendicular via Mixed-mode as pivots and run
/// Mode 1 pressure cycles on the other diagonal.
pub fn gait_plan(direction: Direction, geom: &ActuatorGeometry) -> CommandSequence {
    let p = geom.p_max;
    let lean = REORIENT_FRAC * geom.theta2_max_deg();
    let tilt = ROTATE_FRAC * geom.theta1_max_deg();
    let mut steps = Vec::new();
    let label;
    match direction {
        Direction::PlusX | Direction::MinusX => {
            // Stance pair: front legs (0, 1) drive +x, rear legs (2, 3)
            // drive -x; the two plans are time-mirror images with the
            // pressure phases swapped between the opposing pairs.
            let stance: [usize; 2] = if direction == Direction::PlusX { [0, 1] } else { [2, 3] };
            label = if direction == Direction::PlusX { "gait+x" } else { "gait-x" };
            for a in 0..4 {
                steps.push(step(0.0, a, 0.0, 0.0, 0.0));
            }
            for &a in &stance {
                steps.push(step(1.0, a, 0.0, 0.0, p));
            }
            for &a in &stance {
                steps.push(step(2.0, a, 0.0, 0.0, 0.0));
            }
        }
        Direction::PlusY | Direction::MinusY => {
            let sign = if direction == Direction::PlusY { 1.0 } else { -1.0 };
            label = if direction == Direction::PlusY { "gait+y" } else { "gait-y" };
            // Re-orient all four actuators: +lean on the +x pair, -lean on
            // the -x pair turns every push toward the same world y.
            for a in 0..4 {
                let lean_a = if a < 2 { sign * lean } else { -sign * lean };
                steps.push(step(0.0, a, 0.0, lean_a, 0.0));
            }
            for a in 0..4 {
                let lean_a = if a < 2 { sign * lean } else { -sign * lean };
                steps.push(step(1.0, a, 0.0, lean_a, p));
            }
            for a in 0..4 {
                let lean_a = if a < 2 { sign * lean } else { -sign * lean };
                steps.push(step(2.0, a, 0.0, lean_a, 0.0));
            }
        }
        Direction::Cw | Direction::Ccw => {
            // Diagonal (0, 2) drives cw, diagonal (1, 3) drives ccw; the
            // other diagonal leans perpendicular as pivots.
            let (stance, pivots): ([usize; 2], [usize; 2]) = if direction == Direction::Cw {
                ([0, 2], [1, 3])
            } else {
                ([1, 3], [0, 2])
            };
            label = if direction == Direction::Cw { "gait-cw" } else { "gait-ccw" };
            for &a in &pivots {
                steps.push(step(0.0, a, 0.0, lean, 0.0));
            }
            for &a in &stance {
                steps.push(step(0.0, a, tilt, 0.0, 0.0));
            }
            for &a in &stance {
                steps.push(step(1.0, a, tilt, 0.0, p));
            }
            for &a in &stance {
                steps.push(step(2.0, a, tilt, 0.0, 0.0));
            }
        }
    }
    CommandSequence {
        label: label.to_string(),
        period_s: 2.0,
        steps,
    }
}

/// Planar body pose of the simulated robot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanarPose {
    pub x: f64,
    pub y: f64,
    pub yaw_deg: f64,
}

fn mount(actuator: usize) -> (f64, f64) {
    let h = BODY_HALF_MM;
    match actuator {
        0 => (h, h),
        1 => (h, -h),
        2 => (-h, -h),
        _ => (-h, h),
    }
}

fn leg_yaw(actuator: usize) -> f64 {
    if actuator < 2 {
        0.0
    } else {
        std::f64::consts::PI
    }
}

/// Mirror handedness of the leg assembly: odd legs are mirrored.
fn mirror(actuator: usize) -> f64 {
    if actuator % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Planar foot position of one leg in the body frame. The leg's leaned
/// backbone axis maps along its ground-plane bearing (mount yaw plus the
/// commanded θ2, the Mixed-mode re-orientation); the out-of-plane x maps
/// laterally with the mirror handedness. The along-axis reach is the tip
/// projected on the leaned axis, which makes it independent of the lean
/// sign so that opposing legs push symmetrically.
fn foot_planar(
    actuator: usize,
    cfg: &Configuration,
    geom: &ActuatorGeometry,
    mat: &MaterialModel,
) -> Result<(f64, f64)> {
    let tip = forward_kinematics(geom, mat, cfg)?.tip_pose.position;
    let t2 = cfg.transform.theta2.to_radians();
    let bearing = leg_yaw(actuator) + t2;
    let along = tip.y * t2.sin() + tip.z * t2.cos();
    let lateral = mirror(actuator) * tip.x;
    let (c, s) = (bearing.cos(), bearing.sin());
    let (mx, my) = mount(actuator);
    Ok((mx + c * along - s * lateral, my + s * along + c * lateral))
}

/// Replays `seq` for `cycles` cycles through the anchored-foot model and
/// returns the body trajectory, one pose per stance phase plus the start.
pub fn simulate_gait(
    seq: &CommandSequence,
    cycles: usize,
    geom: &ActuatorGeometry,
    mat: &MaterialModel,
) -> Result<Vec<PlanarPose>> {
    seq.validate(geom)?;

    // Group steps into events by time, preserving order.
    let mut events: Vec<(f64, Vec<&CommandStep>)> = Vec::new();
    for s in &seq.steps {
        match events.last_mut() {
            Some((t, group)) if *t == s.t_s => group.push(s),
            _ => events.push((s.t_s, vec![s])),
        }
    }

    let mut configs = [Configuration::new(0.0, 0.0, 0.0); 4];
    let mut pose = PlanarPose { x: 0.0, y: 0.0, yaw_deg: 0.0 };
    let mut trajectory = vec![pose];

    for _ in 0..cycles {
        for (_, group) in &events {
            let old = configs;
            for s in group {
                configs[s.actuator] = s.config;
            }
            let stance: Vec<usize> = (0..4)
                .filter(|&a| configs[a].pressure > old[a].pressure)
                .collect();
            if stance.is_empty() {
                continue;
            }
            let mut dx = 0.0;
            let mut dy = 0.0;
            let mut dyaw = 0.0;
            for &a in &stance {
                let (ox, oy) = foot_planar(a, &old[a], geom, mat)?;
                let (nx, ny) = foot_planar(a, &configs[a], geom, mat)?;
                let (fx, fy) = (nx - ox, ny - oy);
                dx += fx;
                dy += fy;
                let (rx, ry) = mount(a);
                dyaw += (rx * fy - ry * fx) / (rx * rx + ry * ry);
            }
            let n = stance.len() as f64;
            let (bdx, bdy, bdyaw) = (-dx / n, -dy / n, -dyaw / n);
            let yaw = pose.yaw_deg.to_radians();
            pose = PlanarPose {
                x: pose.x + yaw.cos() * bdx - yaw.sin() * bdy,
                y: pose.y + yaw.sin() * bdx + yaw.cos() * bdy,
                yaw_deg: pose.yaw_deg + bdyaw.to_degrees(),
            };
            trajectory.push(pose);
        }
    }
    Ok(trajectory)
}
