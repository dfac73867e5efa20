//! Transformation geometry of the actuator: gap/angle relations, limits and
//! validity checks for one RT-SPA design.
//!
//! The contact relation `cos θ1 = (W + g) / L` ties the transformation angle
//! to the clearance between adjacent actuation units; the admissible range of
//! θ1 ends where the units touch (g = 0).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack applied to angle-range checks so that configurations sitting exactly
/// on a contact limit are accepted despite rounding.
pub const ANGLE_EPS_DEG: f64 = 1e-9;

/// All lengths and counts defining one RT-SPA. Lengths in mm, pressure in MPa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActuatorGeometry {
    /// Actuation unit width.
    #[serde(rename = "W")]
    pub unit_width: f64,
    /// Center distance between adjacent actuation units along the backbone.
    #[serde(rename = "L")]
    pub unit_spacing: f64,
    /// Distance between adjacent actuator bases.
    #[serde(rename = "G")]
    pub base_distance: f64,
    /// SAM base width; governs the θ2 limit through the same contact relation.
    #[serde(rename = "B")]
    pub base_width: f64,
    /// Number of actuation units in the chain.
    pub n_units: usize,
    /// Axial extent of one unit.
    pub unit_height: f64,
    /// Pillow front/back face side length.
    pub face_side: f64,
    /// Pillow front/back wall thickness.
    pub wall_thickness: f64,
    /// Maximum rated pressure.
    pub p_max: f64,
}

impl Default for ActuatorGeometry {
    /// Shipped default design. W, face_side, wall_thickness and p_max come
    /// from the printed 7.1 mm-width design; the remaining lengths are
    /// engineering defaults chosen for geometric consistency and are
    /// calibratable.
    fn default() -> Self {
        ActuatorGeometry {
            unit_width: 7.1,
            unit_spacing: 10.0,
            base_distance: 4.0,
            base_width: 6.0,
            n_units: 4,
            unit_height: 10.0,
            face_side: 20.0,
            wall_thickness: 1.0,
            p_max: 0.5,
        }
    }
}

/// Outcome of one invariant check.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Per-invariant pass/fail report; the geometry is valid iff every check passed.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&ValidationCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

impl ActuatorGeometry {
    /// Checks every design invariant and reports pass/fail per check.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let lengths = [
            ("W", self.unit_width),
            ("L", self.unit_spacing),
            ("G", self.base_distance),
            ("B", self.base_width),
            ("unit_height", self.unit_height),
            ("face_side", self.face_side),
            ("wall_thickness", self.wall_thickness),
        ];
        let bad: Vec<&str> = lengths
            .iter()
            .filter(|(_, v)| !(*v > 0.0))
            .map(|(n, _)| *n)
            .collect();
        checks.push(ValidationCheck {
            name: "lengths_positive",
            passed: bad.is_empty(),
            detail: if bad.is_empty() {
                "all lengths > 0".into()
            } else {
                format!("non-positive lengths: {bad:?}")
            },
        });
        checks.push(ValidationCheck {
            name: "unit_width_below_spacing",
            passed: self.unit_width > 0.0 && self.unit_width < self.unit_spacing,
            detail: format!("W = {} vs L = {}", self.unit_width, self.unit_spacing),
        });
        checks.push(ValidationCheck {
            name: "base_width_below_spacing",
            passed: self.base_width > 0.0 && self.base_width < self.unit_spacing,
            detail: format!("B = {} vs L = {}", self.base_width, self.unit_spacing),
        });
        let gap0 = self.unit_spacing - self.unit_width;
        checks.push(ValidationCheck {
            name: "base_distance_exceeds_gap",
            passed: self.base_distance > gap0,
            detail: format!("G = {} vs L - W = {}", self.base_distance, gap0),
        });
        checks.push(ValidationCheck {
            name: "unit_count",
            passed: self.n_units >= 2,
            detail: format!("n_units = {}", self.n_units),
        });
        checks.push(ValidationCheck {
            name: "pressure_positive",
            passed: self.p_max > 0.0,
            detail: format!("p_max = {}", self.p_max),
        });
        ValidationReport { checks }
    }

    /// Maximum transformation angle θ1 in degrees: arccos(W / L), the angle
    /// at which adjacent units come into contact.
    pub fn theta1_max_deg(&self) -> f64 {
        (self.unit_width / self.unit_spacing).acos().to_degrees()
    }

    /// Maximum transformation angle θ2 in degrees: arccos(B / L), the same
    /// contact relation applied to the base width.
    pub fn theta2_max_deg(&self) -> f64 {
        (self.base_width / self.unit_spacing).acos().to_degrees()
    }

    /// Gap between adjacent unit faces at transformation angle θ1 (degrees):
    /// g = L cos θ1 - W. Zero at ±θ1_max, maximal (L - W) at θ1 = 0.
    pub fn gap(&self, theta1_deg: f64) -> Result<f64> {
        let limit = self.theta1_max_deg();
        if theta1_deg.abs() > limit + ANGLE_EPS_DEG {
            return Err(Error::AngleOutOfRange {
                what: "theta1",
                value: theta1_deg,
                lo: -limit,
                hi: limit,
            });
        }
        let g = self.unit_spacing * theta1_deg.to_radians().cos() - self.unit_width;
        Ok(g.max(0.0))
    }

    /// Straight-chain backbone length: one unit height plus (n - 1) center
    /// distances. Segment lengths are pressure-invariant.
    pub fn total_length(&self) -> f64 {
        self.unit_height + (self.n_units as f64 - 1.0) * self.unit_spacing
    }
}
