//! Application-level planners: quadruped gait primitives, gripper mode
//! selection and opening computation, and the qualitative blocking-force
//! estimator.

mod gait;
mod gripper;

pub use gait::{gait_plan, simulate_gait, CommandSequence, CommandStep, Direction, PlanarPose};
pub use gripper::{
    gripper_opening, max_opening, plan_grip, GripMode, GripPlan, GripperLayout, ObjectDescriptor,
    ShapeClass,
};

use crate::error::Result;
use crate::geometry::ActuatorGeometry;
use crate::material::MaterialModel;

/// Force gain, calibration constant of the qualitative estimator.
pub const K_FORCE: f64 = 0.25;

/// Qualitative blocking-force estimate in N:
/// F = k_F * p * A_contact * max(0, e(p) - g(theta1)) / lever, with the
/// contact area W * unit_height and the backbone length as lever arm.
///
/// Captures both measured trends: at theta1 = 0 the force grows with the
/// unit width (smaller gap, larger contact), and at fixed width it grows
/// with theta1 (gap shrinks as units rotate).
pub fn blocking_force(
    geom: &ActuatorGeometry,
    mat: &MaterialModel,
    theta1_deg: f64,
    pressure: f64,
) -> Result<f64> {
    let e = mat.expansion(pressure)?;
    let g = geom.gap(theta1_deg)?;
    let area = geom.unit_width * geom.unit_height;
    let lever = geom.total_length();
    Ok(K_FORCE * pressure * area * (e - g).max(0.0) / lever)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (ActuatorGeometry, MaterialModel) {
        let geom = ActuatorGeometry::default();
        let mat = MaterialModel::default_for(&geom);
        (geom, mat)
    }

    #[test]
    fn zero_force_without_pressure() {
        let (geom, mat) = setup();
        assert_eq!(blocking_force(&geom, &mat, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(blocking_force(&geom, &mat, 30.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn force_grows_with_unit_width() {
        let (geom, mat) = setup();
        let mut wide = geom;
        wide.unit_width = 8.0;
        let f_narrow = blocking_force(&geom, &mat, 0.0, 0.5).unwrap();
        let f_wide = blocking_force(&wide, &mat, 0.0, 0.5).unwrap();
        assert!(f_wide >= f_narrow);
    }

    #[test]
    fn force_grows_with_tilt() {
        let (geom, mat) = setup();
        let f0 = blocking_force(&geom, &mat, 0.0, 0.5).unwrap();
        let f30 = blocking_force(&geom, &mat, 30.0, 0.5).unwrap();
        assert!(f30 >= f0);
    }
}
