//! Forward kinematics of the pressurized soft actuation chain.
//!
//! Piecewise-constant-curvature model realized as discrete hinge joints at
//! the unit contacts. Each joint bends by an angle proportional to the part
//! of the pillow expansion that exceeds the transformation gap, about an
//! axis tilted by (θ1, θ2), plus an explicit twist about the local backbone
//! tangent driven by the unit tilt θ1.
//!
//! Coordinate convention: the root tangent points along +z; pure bending
//! (θ1 = θ2 = 0) stays in the y-z plane; the θ2 shear also lives in the y-z
//! plane, so out-of-plane x motion appears only through θ1. Negating θ1 at
//! fixed θ2 mirrors the chain across the y-z plane exactly.

use nalgebra::{Unit, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ActuatorGeometry;
use crate::material::MaterialModel;
use crate::rrm::TransformState;

/// Joint gain: bending degrees per mm of interference beyond contact onset.
/// Calibration constant; the device provides no constitutive actuator law.
pub const K_PHI_DEG_PER_MM: f64 = 8.0;

/// Per-joint bending cap, degrees.
pub const PHI_CAP_DEG: f64 = 35.0;

/// Twist gain: per-joint twist = K_TWIST * phi * (W/L)^2 * sin(theta1).
/// The (W/L)^2 factor models the contact overlap and lever arm both growing
/// with the unit width.
pub const K_TWIST: f64 = 0.5;

/// Number of markers along the chain.
pub const MARKER_COUNT: usize = 10;

/// One actuator's commanded state: transformation angles plus pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub transform: TransformState,
    pub pressure: f64,
}

impl Configuration {
    pub fn new(theta1: f64, theta2: f64, pressure: f64) -> Self {
        Configuration {
            transform: TransformState::new(theta1, theta2),
            pressure,
        }
    }

    /// Checks angle limits against `geom` and the pressure bound.
    pub fn validate(&self, geom: &ActuatorGeometry) -> Result<()> {
        self.transform.check_limits(geom)?;
        if !(0.0..=geom.p_max + 1e-12).contains(&self.pressure) {
            return Err(Error::PressureOutOfRange {
                value: self.pressure,
                max: geom.p_max,
            });
        }
        Ok(())
    }
}

/// A rigid transform: position in mm plus unit-quaternion orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub position: Vector3<f64>,
    pub orientation: UnitQuaternion<f64>,
}

impl Frame {
    fn identity() -> Self {
        Frame {
            position: Vector3::zeros(),
            orientation: UnitQuaternion::identity(),
        }
    }
}

/// Pose chain of the actuator: one frame per unit boundary plus the root,
/// ten marker positions evenly spaced by arc length, and the tip pose.
#[derive(Debug, Clone)]
pub struct PoseChain {
    pub frames: Vec<Frame>,
    pub markers: Vec<Vector3<f64>>,
    pub tip_pose: Frame,
}

/// Per-joint bending angle in degrees:
/// phi = clip(k_phi * max(0, e(p) - g(theta1)), 0, phi_cap).
/// Zero until the pillow expansion overcomes the transformation gap.
pub fn joint_angle(
    pressure: f64,
    theta1_deg: f64,
    geom: &ActuatorGeometry,
    mat: &MaterialModel,
) -> Result<f64> {
    let e = mat.expansion(pressure)?;
    let g = geom.gap(theta1_deg)?;
    Ok((K_PHI_DEG_PER_MM * (e - g).max(0.0)).min(PHI_CAP_DEG))
}

/// Per-joint twist in degrees; odd in theta1, zero in pure bending.
fn joint_twist_deg(phi_deg: f64, theta1_deg: f64, geom: &ActuatorGeometry) -> f64 {
    let ratio = geom.unit_width / geom.unit_spacing;
    K_TWIST * phi_deg * ratio * ratio * theta1_deg.to_radians().sin()
}

/// Sheared inter-unit segment direction: the θ2 base rotation tilts each
/// segment in the y-z plane while unit orientations stay fixed.
fn shear_direction(theta2_deg: f64) -> Vector3<f64> {
    let t2 = theta2_deg.to_radians();
    Vector3::new(0.0, t2.sin(), t2.cos())
}

/// Joint bending axis: the x axis rotated by θ1 about z, then tilted with
/// the shear so it stays perpendicular to the sheared backbone tangent.
/// At θ1 = 0 the axis is x for any θ2, keeping pure bending in the y-z plane.
fn bend_axis(theta1_deg: f64, theta2_deg: f64) -> Vector3<f64> {
    let t1 = theta1_deg.to_radians();
    let t2 = theta2_deg.to_radians();
    Vector3::new(t1.cos(), t1.sin() * t2.cos(), -t1.sin() * t2.sin())
}

/// Forward kinematics: root frame at the origin, root segment of one unit
/// height along +z, then (n_units - 1) sheared segments of length L, each
/// preceded by a hinge joint. Deterministic.
pub fn forward_kinematics(
    geom: &ActuatorGeometry,
    mat: &MaterialModel,
    cfg: &Configuration,
) -> Result<PoseChain> {
    cfg.validate(geom)?;
    let t = &cfg.transform;
    let phi_deg = joint_angle(cfg.pressure, t.theta1, geom, mat)?;
    let psi_deg = joint_twist_deg(phi_deg, t.theta1, geom);

    let d = shear_direction(t.theta2);
    let u = bend_axis(t.theta1, t.theta2);
    let q_joint = UnitQuaternion::from_axis_angle(&Unit::new_normalize(u), phi_deg.to_radians())
        * UnitQuaternion::from_axis_angle(&Unit::new_normalize(d), psi_deg.to_radians());

    let n = geom.n_units;
    let mut frames = Vec::with_capacity(n + 1);
    frames.push(Frame::identity());

    // Root segment: unsheared, one unit height along +z.
    let mut pose = Frame {
        position: Vector3::new(0.0, 0.0, geom.unit_height),
        orientation: UnitQuaternion::identity(),
    };
    frames.push(pose);

    for _ in 1..n {
        let orientation = UnitQuaternion::new_normalize((pose.orientation * q_joint).into_inner());
        let position = pose.position + orientation * (d * geom.unit_spacing);
        pose = Frame { position, orientation };
        frames.push(pose);
    }

    let markers = place_markers(&frames);
    Ok(PoseChain {
        tip_pose: pose,
        frames,
        markers,
    })
}

/// Markers evenly spaced by arc length along the frame polyline, tip
/// included, root excluded.
fn place_markers(frames: &[Frame]) -> Vec<Vector3<f64>> {
    let pts: Vec<Vector3<f64>> = frames.iter().map(|f| f.position).collect();
    let mut cum = vec![0.0];
    for w in pts.windows(2) {
        cum.push(cum.last().unwrap() + (w[1] - w[0]).norm());
    }
    let total = *cum.last().unwrap();
    (1..=MARKER_COUNT)
        .map(|k| {
            let s = total * k as f64 / MARKER_COUNT as f64;
            let mut seg = 1;
            while seg < cum.len() - 1 && cum[seg] < s {
                seg += 1;
            }
            let len = cum[seg] - cum[seg - 1];
            let f = if len > 0.0 { (s - cum[seg - 1]) / len } else { 1.0 };
            pts[seg - 1] + (pts[seg] - pts[seg - 1]) * f.clamp(0.0, 1.0)
        })
        .collect()
}

/// Rotation of the tip frame about the backbone tangent relative to the
/// root, degrees, via swing-twist decomposition about the root tangent.
pub fn tip_twist(geom: &ActuatorGeometry, mat: &MaterialModel, cfg: &Configuration) -> Result<f64> {
    let chain = forward_kinematics(geom, mat, cfg)?;
    let axis = shear_direction(cfg.transform.theta2);
    Ok(twist_about(&chain.tip_pose.orientation, &axis))
}

/// Twist component (degrees) of `q` about unit axis `a`.
pub fn twist_about(q: &UnitQuaternion<f64>, a: &Vector3<f64>) -> f64 {
    let mut c = *q.quaternion();
    if c.w < 0.0 {
        c = -c;
    }
    let proj = c.imag().dot(a);
    (2.0 * proj.atan2(c.w)).to_degrees()
}

/// Total bending of the chain: angle between the tip tangent and the root
/// tangent, degrees.
pub fn tip_bend_angle(geom: &ActuatorGeometry, mat: &MaterialModel, cfg: &Configuration) -> Result<f64> {
    let chain = forward_kinematics(geom, mat, cfg)?;
    let root_t = shear_direction(cfg.transform.theta2);
    let tip_t = chain.tip_pose.orientation * root_t;
    Ok(root_t.dot(&tip_t).clamp(-1.0, 1.0).acos().to_degrees())
}
