//! Workspace sweep protocol: grids over transformation angle and pressure,
//! marker point clouds, y-z mirroring, and workspace metrics.

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::ActuatorGeometry;
use crate::hull::convex_hull_volume;
use crate::material::MaterialModel;
use crate::sam::{forward_kinematics, Configuration, MARKER_COUNT};

/// Which actuation mode the sweep exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMode {
    /// θ1 runs 0..θ1_max, θ2 = 0.
    Mode1,
    /// θ2 runs 0..min(θ1_max, θ2_max) with the passive θ1 = -θ2; the θ1
    /// contact limit also binds because of the passive coupling.
    Mode2,
    /// The single θ1 = θ2 = 0 line (equivalent conventional PneuNet).
    Bending,
}

/// Sweep protocol parameters. Defaults follow the measurement protocol:
/// 5-degree angle steps and a discretized 0..p_max pressure ramp.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub angle_step: f64,
    pub pressure_steps: usize,
    /// Marker indices to record; all ten by default.
    pub markers: Vec<usize>,
}

impl SweepSpec {
    pub fn new(mode: SweepMode) -> Self {
        SweepSpec {
            mode,
            angle_step: 5.0,
            pressure_steps: 50,
            markers: (0..MARKER_COUNT).collect(),
        }
    }
}

/// One marker position with the configuration that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceSample {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub marker: usize,
    pub theta1: f64,
    pub theta2: f64,
    pub pressure: f64,
    pub mirrored: bool,
}

impl WorkspaceSample {
    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }
}

/// Angle grid: 0, step, 2 step, ..., with a final partial step clamped to
/// `max` so the contact boundary is always represented.
pub fn angle_levels(max: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0, "angle step must be positive");
    let mut levels = vec![0.0];
    let mut a = step;
    while a < max - 1e-9 {
        levels.push(a);
        a += step;
    }
    if max > 1e-12 {
        levels.push(max);
    }
    levels
}

fn pressure_levels(p_max: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "need at least 2 pressure steps");
    (0..steps)
        .map(|i| p_max * i as f64 / (steps - 1) as f64)
        .collect()
}

/// Runs the sweep. Output is deterministic and ordered angle-major,
/// pressure-minor, marker-minor; grid points are evaluated in parallel but
/// collected by grid index.
pub fn sweep(
    geom: &ActuatorGeometry,
    mat: &MaterialModel,
    spec: &SweepSpec,
) -> Result<Vec<WorkspaceSample>> {
    let angles: Vec<(f64, f64)> = match spec.mode {
        SweepMode::Mode1 => angle_levels(geom.theta1_max_deg(), spec.angle_step)
            .into_iter()
            .map(|t1| (t1, 0.0))
            .collect(),
        SweepMode::Mode2 => {
            let max = geom.theta2_max_deg().min(geom.theta1_max_deg());
            angle_levels(max, spec.angle_step)
                .into_iter()
                .map(|t2| (-t2, t2))
                .collect()
        }
        SweepMode::Bending => vec![(0.0, 0.0)],
    };
    let pressures = pressure_levels(geom.p_max, spec.pressure_steps);

    let grid: Vec<(f64, f64, f64)> = angles
        .iter()
        .flat_map(|&(t1, t2)| pressures.iter().map(move |&p| (t1, t2, p)))
        .collect();

    let per_point: Vec<Result<Vec<WorkspaceSample>>> = grid
        .par_iter()
        .map(|&(t1, t2, p)| {
            let chain = forward_kinematics(geom, mat, &Configuration::new(t1, t2, p))?;
            Ok(spec
                .markers
                .iter()
                .map(|&m| {
                    let pos = chain.markers[m];
                    WorkspaceSample {
                        x: pos.x,
                        y: pos.y,
                        z: pos.z,
                        marker: m,
                        theta1: t1,
                        theta2: t2,
                        pressure: p,
                        mirrored: false,
                    }
                })
                .collect())
        })
        .collect();

    let mut out = Vec::with_capacity(grid.len() * spec.markers.len());
    for r in per_point {
        out.extend(r?);
    }
    Ok(out)
}

/// Returns the input plus copies mirrored about the y-z plane (x negated,
/// mirrored flag set). Samples on the plane are still duplicated; the flag
/// distinguishes them.
pub fn mirror_yz(samples: &[WorkspaceSample]) -> Vec<WorkspaceSample> {
    let mut out = samples.to_vec();
    out.extend(samples.iter().map(|s| WorkspaceSample {
        x: -s.x,
        mirrored: true,
        ..*s
    }));
    out
}

/// Aggregate workspace metrics.
#[derive(Debug, Clone, Serialize)]
pub struct WorkspaceMetrics {
    pub sample_count: usize,
    pub bbox_min: [f64; 3],
    pub bbox_max: [f64; 3],
    pub hull_volume_mm3: f64,
    /// Maximum absolute tip (marker 9) coordinate per axis.
    pub max_tip_excursion_mm: [f64; 3],
}

/// Deterministic metrics over a sample cloud: axis-aligned bounding box,
/// convex-hull volume, and per-axis tip excursion.
pub fn workspace_metrics(samples: &[WorkspaceSample]) -> WorkspaceMetrics {
    let mut bbox_min = [f64::INFINITY; 3];
    let mut bbox_max = [f64::NEG_INFINITY; 3];
    let mut tip = [0.0f64; 3];
    for s in samples {
        for (i, v) in [s.x, s.y, s.z].into_iter().enumerate() {
            bbox_min[i] = bbox_min[i].min(v);
            bbox_max[i] = bbox_max[i].max(v);
            if s.marker == MARKER_COUNT - 1 {
                tip[i] = tip[i].max(v.abs());
            }
        }
    }
    if samples.is_empty() {
        bbox_min = [0.0; 3];
        bbox_max = [0.0; 3];
    }
    let pts: Vec<Vector3<f64>> = samples.iter().map(|s| s.position()).collect();
    WorkspaceMetrics {
        sample_count: samples.len(),
        bbox_min,
        bbox_max,
        hull_volume_mm3: convex_hull_volume(&pts),
        max_tip_excursion_mm: tip,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup() -> (ActuatorGeometry, MaterialModel) {
        let geom = ActuatorGeometry::default();
        let mat = MaterialModel::default_for(&geom);
        (geom, mat)
    }

    #[test]
    fn bending_sweep_counts_and_planarity() {
        let (geom, mat) = setup();
        let mut spec = SweepSpec::new(SweepMode::Bending);
        spec.pressure_steps = 2;
        let samples = sweep(&geom, &mat, &spec).unwrap();
        assert_eq!(samples.len(), 2 * 10);
        for s in &samples {
            assert!(s.x.abs() < 1e-9);
        }
    }

    #[test]
    fn mode1_level_count_matches_grid_arithmetic() {
        // theta1_max = 44.77 at 5-degree steps: 0, 5, ..., 40, then the
        // clamped 44.77 level -> 10 levels.
        let (geom, _) = setup();
        let levels = angle_levels(geom.theta1_max_deg(), 5.0);
        assert_eq!(levels.len(), 10);
        assert_eq!(levels[0], 0.0);
        assert_relative_eq!(*levels.last().unwrap(), geom.theta1_max_deg());
    }

    #[test]
    fn oversized_step_clamps_to_two_levels() {
        let (geom, _) = setup();
        let levels = angle_levels(geom.theta2_max_deg(), 60.0);
        assert_eq!(levels.len(), 2);
    }

    #[test]
    fn zero_pressure_row_matches_forward_kinematics() {
        let (geom, mat) = setup();
        let mut spec = SweepSpec::new(SweepMode::Mode1);
        spec.pressure_steps = 3;
        let samples = sweep(&geom, &mat, &spec).unwrap();
        let chain = forward_kinematics(&geom, &mat, &Configuration::new(0.0, 0.0, 0.0)).unwrap();
        for (k, s) in samples.iter().take(10).enumerate() {
            assert_relative_eq!(s.z, chain.markers[k].z, epsilon = 1e-12);
            assert_eq!(s.pressure, 0.0);
        }
    }

    #[test]
    fn mode2_applies_passive_theta1() {
        let (geom, mat) = setup();
        let mut spec = SweepSpec::new(SweepMode::Mode2);
        spec.pressure_steps = 2;
        let samples = sweep(&geom, &mat, &spec).unwrap();
        for s in &samples {
            assert_eq!(s.theta1, -s.theta2);
        }
    }

    #[test]
    fn mirror_involution_and_flags() {
        assert!(mirror_yz(&[]).is_empty());
        let one = [WorkspaceSample {
            x: 3.0,
            y: 1.0,
            z: 2.0,
            marker: 0,
            theta1: 5.0,
            theta2: 0.0,
            pressure: 0.1,
            mirrored: false,
        }];
        let two = mirror_yz(&one);
        assert_eq!(two.len(), 2);
        assert_eq!(two[1].x, -3.0);
        assert!(two[1].mirrored);
        // A second mirror is the identity modulo flags.
        let four = mirror_yz(&two);
        assert_eq!(four.len(), 4);
        let xs: Vec<f64> = four.iter().map(|s| s.x).collect();
        assert_eq!(xs, vec![3.0, -3.0, -3.0, 3.0]);
    }

    #[test]
    fn mirrored_cloud_has_zero_mean_x() {
        let (geom, mat) = setup();
        let samples = mirror_yz(&sweep(&geom, &mat, &SweepSpec::new(SweepMode::Mode1)).unwrap());
        let mean_x: f64 = samples.iter().map(|s| s.x).sum::<f64>() / samples.len() as f64;
        assert!(mean_x.abs() < 1e-9);
    }

    #[test]
    fn bending_samples_subset_of_mode1() {
        let (geom, mat) = setup();
        let mut b = SweepSpec::new(SweepMode::Bending);
        b.pressure_steps = 5;
        let mut m1 = SweepSpec::new(SweepMode::Mode1);
        m1.pressure_steps = 5;
        let bending = sweep(&geom, &mat, &b).unwrap();
        let mode1 = sweep(&geom, &mat, &m1).unwrap();
        for s in &bending {
            assert!(mode1.iter().any(|t| t == s), "missing {s:?}");
        }
    }

    #[test]
    fn metrics_known_solids() {
        let tetra: Vec<WorkspaceSample> = [
            (0.0, 0.0, 0.0),
            (1.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
            (0.0, 0.0, 1.0),
        ]
        .iter()
        .map(|&(x, y, z)| WorkspaceSample {
            x,
            y,
            z,
            marker: 9,
            theta1: 0.0,
            theta2: 0.0,
            pressure: 0.0,
            mirrored: false,
        })
        .collect();
        let m = workspace_metrics(&tetra);
        assert_relative_eq!(m.hull_volume_mm3, 1.0 / 6.0, epsilon = 1e-12);
        assert_eq!(m.bbox_max, [1.0, 1.0, 1.0]);
        assert_eq!(m.max_tip_excursion_mm, [1.0, 1.0, 1.0]);
    }

    #[test]
    fn planar_bending_cloud_has_zero_volume_and_flat_bbox() {
        let (geom, mat) = setup();
        let samples = sweep(&geom, &mat, &SweepSpec::new(SweepMode::Bending)).unwrap();
        let m = workspace_metrics(&samples);
        assert_eq!(m.hull_volume_mm3, 0.0);
        assert!(m.bbox_max[0] - m.bbox_min[0] < 1e-9);
    }

    #[test]
    fn hull_monotone_under_nested_sweeps() {
        let (geom, mat) = setup();
        let mut small = SweepSpec::new(SweepMode::Mode1);
        small.pressure_steps = 5;
        small.angle_step = 20.0;
        let mut big = small.clone();
        big.angle_step = 10.0;
        let vs = workspace_metrics(&sweep(&geom, &mat, &small).unwrap()).hull_volume_mm3;
        let vb = workspace_metrics(&sweep(&geom, &mat, &big).unwrap()).hull_volume_mm3;
        assert!(vb >= vs - 1e-9, "vb={vb} vs={vs}");
    }
}
