//! Kinematics, workspace analysis, and configuration planning engine for a
//! reconfigurable transformable soft pneumatic actuator (RT-SPA).
//!
//! The actuator combines a servo-driven rigid rotation mechanism (a parallel
//! 4-bar commanding the transformation angles θ1/θ2) with a pressurized soft
//! actuation chain. This crate models the transformation geometry, the
//! hyperelastic pillow material, the pressurized chain kinematics, workspace
//! sweeps, inverse configuration solving, and the application-level planners
//! (gait, gripping, blocking force).

pub mod apps;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod io;
pub mod material;
pub mod optim;
pub mod rrm;
pub mod sam;
pub mod solver;
pub mod workspace;

pub use error::{Error, Result};
