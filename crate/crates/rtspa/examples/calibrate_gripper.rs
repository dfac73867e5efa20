//! Recomputes the gripper mount lever scale from the kinematics: picks the
//! scale so that the fully leaned-out, unpressurized gripper reaches the
//! 263 mm reference opening on the default geometry. Run after changing
//! the default geometry and paste the printed value into
//! configs/gripper_layout.json.

use rtspa::geometry::ActuatorGeometry;
use rtspa::material::MaterialModel;
use rtspa::sam::{forward_kinematics, Configuration};

const REFERENCE_OPENING_MM: f64 = 263.0;
const BASE_DIAMETER_MM: f64 = 120.0;

fn main() {
    let geom = ActuatorGeometry::default();
    let mat = MaterialModel::default_for(&geom);
    let lean = geom.theta2_max_deg();
    let cfg = Configuration::new(0.0, lean, 0.0);
    let tip = forward_kinematics(&geom, &mat, &cfg)
        .expect("default geometry is valid")
        .tip_pose
        .position;
    let lateral = tip.y;
    let scale = (REFERENCE_OPENING_MM / 2.0 - BASE_DIAMETER_MM / 2.0) / lateral;
    println!("full lean           : {lean:.4} deg");
    println!("lateral tip motion  : {lateral:.4} mm");
    println!("mount_lever_scale   : {scale:.4}");
    println!(
        "check: opening at full lean = {:.4} mm",
        2.0 * (BASE_DIAMETER_MM / 2.0 + scale * lateral)
    );
}
