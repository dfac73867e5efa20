//! Four-finger gripper: opening computation and grasp mode planning.
//!
//! Fingers hang from a circular base, each with its local +y pointing
//! radially outward, so a Mixed-mode θ2 lean swings a finger outward (wider
//! opening) and pressurized bending curls it inward (closing). The opening
//! model is planar: opening = 2 * min over fingers of
//! (base radius + lever scale * radial tip displacement).

use serde::{Deserialize, Serialize};

use crate::apps::gait::CommandStep;
use crate::apps::CommandSequence;
use crate::error::{Error, Result};
use crate::geometry::ActuatorGeometry;
use crate::material::MaterialModel;
use crate::sam::{forward_kinematics, Configuration};

/// Object sizes below this fraction of the nominal opening grasp with a
/// two-finger pinch instead of the full cage.
pub const TWO_FINGER_FRAC: f64 = 0.45;

/// Pressure fraction for the delicate pseudo-parallel grasp.
const DELICATE_PRESSURE_FRAC: f64 = 0.5;

/// Mounting layout of the gripper.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GripperLayout {
    pub n_fingers: usize,
    /// Diameter of the circle through the finger mounts, mm.
    pub base_diameter_mm: f64,
    /// Geometric amplification of radial tip motion at the grasp plane
    /// (finger mounting angle and standoff folded into one constant).
    pub mount_lever_scale: f64,
}

impl Default for GripperLayout {
    fn default() -> Self {
        GripperLayout {
            n_fingers: 4,
            base_diameter_mm: 120.0,
            mount_lever_scale: 2.9792,
        }
    }
}

impl GripperLayout {
    pub fn validate(&self) -> Result<()> {
        if self.n_fingers < 2 {
            return Err(Error::Format(format!(
                "gripper needs at least 2 fingers, got {}",
                self.n_fingers
            )));
        }
        if !(self.base_diameter_mm > 0.0) || !(self.mount_lever_scale > 0.0) {
            return Err(Error::Format(
                "base diameter and lever scale must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Coarse shape classes of the grasp target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeClass {
    Compact,
    Flat,
    Oversized,
    Delicate,
}

/// The object to grasp.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ObjectDescriptor {
    pub size_mm: f64,
    pub shape: ShapeClass,
}

/// Grasp strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GripMode {
    Cage,
    TwoFinger,
    EnhancedOpening,
    PseudoParallel,
}

/// A planned grasp: the selected mode, the opening the plan starts from,
/// and the command sequence realizing it.
#[derive(Debug, Clone, Serialize)]
pub struct GripPlan {
    pub mode: GripMode,
    pub opening_mm: f64,
    pub sequence: CommandSequence,
}

/// Opening between opposing fingertips, mm, for one configuration per
/// finger. Radial tip displacement is the tip's local +y coordinate; the
/// minimum over fingers governs because the narrowest pair contacts first.
pub fn gripper_opening(
    layout: &GripperLayout,
    geom: &ActuatorGeometry,
    mat: &MaterialModel,
    configs: &[Configuration],
) -> Result<f64> {
    layout.validate()?;
    if configs.len() != layout.n_fingers {
        return Err(Error::Format(format!(
            "expected {} finger configurations, got {}",
            layout.n_fingers,
            configs.len()
        )));
    }
    let mut half_min = f64::INFINITY;
    for cfg in configs {
        let tip = forward_kinematics(geom, mat, cfg)?.tip_pose.position;
        let half = layout.base_diameter_mm / 2.0 + layout.mount_lever_scale * tip.y;
        half_min = half_min.min(half);
    }
    Ok((2.0 * half_min).max(0.0))
}

fn uniform_configs(n: usize, theta1: f64, theta2: f64, pressure: f64) -> Vec<Configuration> {
    vec![Configuration::new(theta1, theta2, pressure); n]
}

fn steps_for_all(t_s: f64, n: usize, theta1: f64, theta2: f64, pressure: f64) -> Vec<CommandStep> {
    (0..n)
        .map(|a| CommandStep {
            t_s,
            actuator: a,
            config: Configuration::new(theta1, theta2, pressure),
        })
        .collect()
}

/// Maximum opening with every finger leaned fully outward, unpressurized.
pub fn max_opening(
    layout: &GripperLayout,
    geom: &ActuatorGeometry,
    mat: &MaterialModel,
) -> Result<f64> {
    let lean = geom.theta2_max_deg();
    gripper_opening(
        layout,
        geom,
        mat,
        &uniform_configs(layout.n_fingers, 0.0, lean, 0.0),
    )
}

/// Selects a grasp mode for `object` and emits the command sequence.
///
/// Oversized targets (wider than the nominal opening) lean the fingers out
/// first; targets beyond even the enhanced opening are rejected. Delicate
/// targets use a Mode 1 pseudo-parallel pinch at reduced pressure; small
/// compact or flat targets pinch with one opposing finger pair; the rest
/// cage with all fingers.
pub fn plan_grip(
    layout: &GripperLayout,
    geom: &ActuatorGeometry,
    mat: &MaterialModel,
    object: &ObjectDescriptor,
) -> Result<GripPlan> {
    layout.validate()?;
    if !(object.size_mm > 0.0) {
        return Err(Error::Format(format!(
            "object size must be positive, got {}",
            object.size_mm
        )));
    }
    let nominal = layout.base_diameter_mm;
    let widest = max_opening(layout, geom, mat)?;
    if object.size_mm > widest {
        return Err(Error::InfeasibleGrip {
            size: object.size_mm,
            max_opening: widest,
        });
    }

    let mode = match object.shape {
        ShapeClass::Delicate => GripMode::PseudoParallel,
        ShapeClass::Oversized => GripMode::EnhancedOpening,
        _ if object.size_mm > nominal => GripMode::EnhancedOpening,
        ShapeClass::Flat => GripMode::TwoFinger,
        ShapeClass::Compact => {
            if object.size_mm <= TWO_FINGER_FRAC * nominal {
                GripMode::TwoFinger
            } else {
                GripMode::Cage
            }
        }
    };

    let n = layout.n_fingers;
    let p = geom.p_max;
    let lean = geom.theta2_max_deg();
    let tilt = 0.67 * geom.theta1_max_deg();
    let (opening_mm, steps) = match mode {
        GripMode::Cage => {
            let opening = gripper_opening(layout, geom, mat, &uniform_configs(n, 0.0, 0.0, 0.0))?;
            let mut steps = steps_for_all(0.0, n, 0.0, 0.0, 0.0);
            steps.extend(steps_for_all(1.0, n, 0.0, 0.0, p));
            (opening, steps)
        }
        GripMode::TwoFinger => {
            let opening = gripper_opening(layout, geom, mat, &uniform_configs(n, 0.0, 0.0, 0.0))?;
            let mut steps = steps_for_all(0.0, n, 0.0, 0.0, 0.0);
            // One opposing pair closes; the others stay clear.
            for a in [0, n / 2] {
                steps.push(CommandStep {
                    t_s: 1.0,
                    actuator: a,
                    config: Configuration::new(0.0, 0.0, p),
                });
            }
            (opening, steps)
        }
        GripMode::EnhancedOpening => {
            let opening = gripper_opening(layout, geom, mat, &uniform_configs(n, 0.0, lean, 0.0))?;
            let mut steps = steps_for_all(0.0, n, 0.0, lean, 0.0);
            steps.extend(steps_for_all(1.0, n, 0.0, 0.0, p));
            (opening, steps)
        }
        GripMode::PseudoParallel => {
            let opening = gripper_opening(layout, geom, mat, &uniform_configs(n, tilt, 0.0, 0.0))?;
            let mut steps = steps_for_all(0.0, n, tilt, 0.0, 0.0);
            steps.extend(steps_for_all(1.0, n, tilt, 0.0, DELICATE_PRESSURE_FRAC * p));
            (opening, steps)
        }
    };

    Ok(GripPlan {
        mode,
        opening_mm,
        sequence: CommandSequence {
            label: format!("grip-{}", serde_json::to_string(&mode).unwrap().trim_matches('"')),
            period_s: 2.0,
            steps,
        },
    })
}
