//! Rigid rotation mechanism: maps the two servo angles through the parallel
//! 4-bar to the transformation angles (θ1, θ2) and labels the four actuation
//! modes.
//!
//! The 4-bar transmits rotation 1:1, so only the two input angles matter.
//! Motor B drives the base tilt θ2; motor A drives the unit tilt on top of it:
//! θ2 = α_B and θ1 = α_A - α_B. This is the single kinematic assumption of
//! the module; it reproduces all four described mode behaviors exactly
//! (motor A alone tilts units, motor B alone shears the chain with the
//! passive θ1 = -θ2, both idle is plain bending).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ActuatorGeometry, ANGLE_EPS_DEG};

/// Servo travel from the neutral position, degrees.
pub const MOTOR_RANGE_DEG: f64 = 90.0;

/// Commanded servo angles, degrees from neutral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorState {
    pub alpha_a: f64,
    pub alpha_b: f64,
}

/// The four actuation modes selected by which servo is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Bending,
    Mode1,
    Mode2,
    Mixed,
}

/// Transformation angles with the mode they realize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformState {
    pub theta1: f64,
    pub theta2: f64,
    pub mode: Mode,
}

impl TransformState {
    /// Builds a transform state, inferring the mode label. The label follows
    /// the motor semantics: motor A idle means θ1 = -θ2 (Mode 2), motor B
    /// idle means θ2 = 0 (Mode 1).
    pub fn new(theta1: f64, theta2: f64) -> Self {
        let alpha_a = theta1 + theta2;
        let alpha_b = theta2;
        let mode = match (alpha_a == 0.0, alpha_b == 0.0) {
            (true, true) => Mode::Bending,
            (false, true) => Mode::Mode1,
            (true, false) => Mode::Mode2,
            (false, false) => Mode::Mixed,
        };
        TransformState { theta1, theta2, mode }
    }

    /// Identity transform (both motors idle).
    pub fn identity() -> Self {
        TransformState::new(0.0, 0.0)
    }

    /// Checks both angles against the contact limits of `geom`.
    pub fn check_limits(&self, geom: &ActuatorGeometry) -> Result<()> {
        let t1_max = geom.theta1_max_deg();
        if self.theta1.abs() > t1_max + ANGLE_EPS_DEG {
            return Err(Error::ContactViolation {
                which: "theta1",
                value: self.theta1.abs(),
                limit: t1_max,
            });
        }
        let t2_max = geom.theta2_max_deg();
        if self.theta2.abs() > t2_max + ANGLE_EPS_DEG {
            return Err(Error::ContactViolation {
                which: "theta2",
                value: self.theta2.abs(),
                limit: t2_max,
            });
        }
        Ok(())
    }
}

/// Motor angles to transformation angles, range-checked against `geom`.
pub fn motors_to_transform(m: MotorState, geom: &ActuatorGeometry) -> Result<TransformState> {
    for (which, v) in [("A", m.alpha_a), ("B", m.alpha_b)] {
        if v.abs() > MOTOR_RANGE_DEG + ANGLE_EPS_DEG {
            return Err(Error::MotorSaturation { which: if which == "A" { "A" } else { "B" }, required: v });
        }
    }
    let t = TransformState::new(m.alpha_a - m.alpha_b, m.alpha_b);
    t.check_limits(geom)?;
    Ok(t)
}

/// Transformation angles back to motor angles. Inverse of
/// [`motors_to_transform`] on the valid domain (up to one floating-point
/// rounding in alpha_A); motor A compensates so that θ1 can be held while
/// θ2 changes.
pub fn transform_to_motors(t: &TransformState, geom: &ActuatorGeometry) -> Result<MotorState> {
    t.check_limits(geom)?;
    let alpha_b = t.theta2;
    let alpha_a = t.theta1 + t.theta2;
    if alpha_a.abs() > MOTOR_RANGE_DEG + ANGLE_EPS_DEG {
        return Err(Error::MotorSaturation { which: "A", required: alpha_a });
    }
    if alpha_b.abs() > MOTOR_RANGE_DEG + ANGLE_EPS_DEG {
        return Err(Error::MotorSaturation { which: "B", required: alpha_b });
    }
    Ok(MotorState { alpha_a, alpha_b })
}
