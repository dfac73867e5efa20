//! File formats: geometry JSON, stress-strain CSV, workspace point-cloud
//! CSV (with exact float round-trip), ASCII PLY export, and plan JSON.
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading
//! a written file reproduces every value bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::apps::CommandSequence;
use crate::error::{Error, Result};
use crate::geometry::ActuatorGeometry;
use crate::material::StressStrainSample;
use crate::workspace::WorkspaceSample;

const STRESS_HEADER: &str = "lambda,stress_mpa";
const WORKSPACE_HEADER: &str = "x_mm,y_mm,z_mm,marker,theta1_deg,theta2_deg,pressure_mpa,mirrored";

/// Loads an actuator geometry from a JSON file. Unknown fields are
/// rejected.
pub fn load_geometry(path: &Path) -> Result<ActuatorGeometry> {
    let text = fs::read_to_string(path)?;
    let geom: ActuatorGeometry = serde_json::from_str(&text)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    Ok(geom)
}

pub fn save_geometry(path: &Path, geom: &ActuatorGeometry) -> Result<()> {
    let mut text = serde_json::to_string_pretty(geom).expect("geometry serializes");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn parse_f64(field: &str, line_no: usize, raw: &str) -> Result<f64> {
    raw.trim().parse().map_err(|_| {
        Error::Format(format!("line {line_no}: invalid {field} value {raw:?}"))
    })
}

/// Reads uniaxial stress-strain samples from `lambda,stress_mpa` CSV.
pub fn read_stress_csv(path: &Path) -> Result<Vec<StressStrainSample>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == STRESS_HEADER => {}
        other => {
            return Err(Error::Format(format!(
                "expected header {STRESS_HEADER:?}, got {:?}",
                other.map(|(_, l)| l).unwrap_or("")
            )))
        }
    }
    let mut samples = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let (Some(l), Some(s), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(Error::Format(format!("line {}: expected 2 columns", i + 1)));
        };
        samples.push(StressStrainSample {
            lambda: parse_f64("lambda", i + 1, l)?,
            stress_mpa: parse_f64("stress_mpa", i + 1, s)?,
        });
    }
    Ok(samples)
}

pub fn write_stress_csv(path: &Path, samples: &[StressStrainSample]) -> Result<()> {
    let mut out = String::from(STRESS_HEADER);
    out.push('\n');
    for s in samples {
        writeln!(out, "{},{}", s.lambda, s.stress_mpa).unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes workspace samples as CSV. Values round-trip exactly through
/// [`read_workspace_csv`].
pub fn write_workspace_csv(path: &Path, samples: &[WorkspaceSample]) -> Result<()> {
    let mut out = String::from(WORKSPACE_HEADER);
    out.push('\n');
    for s in samples {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.x, s.y, s.z, s.marker, s.theta1, s.theta2, s.pressure, s.mirrored
        )
        .unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_workspace_csv(path: &Path) -> Result<Vec<WorkspaceSample>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == WORKSPACE_HEADER => {}
        other => {
            return Err(Error::Format(format!(
                "expected header {WORKSPACE_HEADER:?}, got {:?}",
                other.map(|(_, l)| l).unwrap_or("")
            )))
        }
    }
    let mut samples = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(Error::Format(format!(
                "line {}: expected 8 columns, got {}",
                i + 1,
                cols.len()
            )));
        }
        let marker: usize = cols[3].trim().parse().map_err(|_| {
            Error::Format(format!("line {}: invalid marker index {:?}", i + 1, cols[3]))
        })?;
        let mirrored: bool = cols[7].trim().parse().map_err(|_| {
            Error::Format(format!("line {}: invalid mirrored flag {:?}", i + 1, cols[7]))
        })?;
        samples.push(WorkspaceSample {
            x: parse_f64("x_mm", i + 1, cols[0])?,
            y: parse_f64("y_mm", i + 1, cols[1])?,
            z: parse_f64("z_mm", i + 1, cols[2])?,
            marker,
            theta1: parse_f64("theta1_deg", i + 1, cols[4])?,
            theta2: parse_f64("theta2_deg", i + 1, cols[5])?,
            pressure: parse_f64("pressure_mpa", i + 1, cols[6])?,
            mirrored,
        });
    }
    Ok(samples)
}

/// Writes the sample positions as an ASCII PLY point cloud.
pub fn write_workspace_ply(path: &Path, samples: &[WorkspaceSample]) -> Result<()> {
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    writeln!(out, "element vertex {}", samples.len()).unwrap();
    out.push_str("property double x\nproperty double y\nproperty double z\nend_header\n");
    for s in samples {
        writeln!(out, "{} {} {}", s.x, s.y, s.z).unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes a command sequence as the plan JSON schema: a flat list of
/// `{t_s, actuator, theta1_deg, theta2_deg, pressure_mpa}` steps.
pub fn write_plan_json(path: &Path, seq: &CommandSequence) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&seq.steps).expect("steps serialize");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
