//! Inverse configuration solver: finds (θ1, θ2, p) whose tip position best
//! reaches a target point, with an optional tip-twist objective.
//!
//! Derivative-free search, because the joint law has a non-smooth contact
//! kink at e(p) = g(θ1). A fixed dense lattice scores the basins first;
//! bounded Nelder-Mead refines the best cells and polishes the winner.
//! Everything is deterministic: fixed lattice, fixed start count, ties
//! broken by lattice order.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ActuatorGeometry;
use crate::material::MaterialModel;
use crate::optim::{nelder_mead, pattern_search};
use crate::sam::{forward_kinematics, tip_twist, Configuration};

/// Weight of the secondary twist objective, mm per degree.
pub const TWIST_WEIGHT_MM_PER_DEG: f64 = 0.1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveRequest {
    pub target: [f64; 3],
    pub twist_target: Option<f64>,
    pub tolerance: f64,
    pub max_evals: usize,
}

impl SolveRequest {
    pub fn for_target(x: f64, y: f64, z: f64) -> Self {
        SolveRequest {
            target: [x, y, z],
            twist_target: None,
            tolerance: 0.5,
            max_evals: 5000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    BestEffort,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub configuration: Configuration,
    pub achieved: [f64; 3],
    pub residual: f64,
    pub evals: usize,
    pub status: SolveStatus,
}

fn validate_request(req: &SolveRequest) -> Result<()> {
    if !(req.tolerance > 0.0) {
        return Err(Error::Format(format!(
            "tolerance must be positive, got {}",
            req.tolerance
        )));
    }
    if req.max_evals < 100 {
        return Err(Error::Format(format!(
            "max_evals must be at least 100, got {}",
            req.max_evals
        )));
    }
    Ok(())
}

/// Solves for the configuration whose tip best reaches `req.target`.
///
/// Errors immediately when the target lies beyond the backbone length (a
/// cheap reachability bound). Otherwise always returns the best
/// configuration found; `status` is `Converged` iff the position residual is
/// within tolerance.
pub fn solve(geom: &ActuatorGeometry, mat: &MaterialModel, req: &SolveRequest) -> Result<SolveResult> {
    validate_request(req)?;
    let target = Vector3::new(req.target[0], req.target[1], req.target[2]);
    let reach = geom.total_length();
    if target.norm() > reach + 1e-9 {
        return Err(Error::Unreachable {
            x: target.x,
            y: target.y,
            z: target.z,
            reach,
        });
    }

    let t1m = geom.theta1_max_deg();
    let t2m = geom.theta2_max_deg();
    // The third search coordinate s maps to pressure as p = p_max s^3.
    // Expansion goes with the cube root of pressure, so in s the joint
    // response is roughly linear and the near-zero-pressure regime (where
    // the contact kink lives) gets its fair share of resolution.
    let lo = [-t1m, -t2m, 0.0];
    let hi = [t1m, t2m, 1.0];
    let pressure_of = |s: f64| geom.p_max * s * s * s;

    let mut evals_used = 0usize;
    let objective = |x: &[f64]| -> (f64, f64) {
        let cfg = Configuration::new(x[0], x[1], pressure_of(x[2]));
        match forward_kinematics(geom, mat, &cfg) {
            Ok(chain) => {
                let residual = (chain.tip_pose.position - target).norm();
                let mut obj = residual;
                if let Some(tw) = req.twist_target {
                    // Chain already computed; twist re-derivation is cheap.
                    let twist = tip_twist(geom, mat, &cfg).unwrap_or(0.0);
                    obj += TWIST_WEIGHT_MM_PER_DEG * (twist - tw).abs();
                }
                (obj, residual)
            }
            Err(_) => (f64::INFINITY, f64::INFINITY),
        }
    };

    // Phase 1: score a dense fixed lattice (one evaluation per cell) to map
    // the basins. Lattice nodes sit strictly inside the box.
    // Lattice resolution backs off when the budget is tight so scoring never
    // eats more than a third of the allowed evaluations.
    let lattice = ((req.max_evals / 3) as f64).cbrt().floor().clamp(2.0, 9.0) as usize;
    let mut cells: Vec<(f64, [f64; 3])> = Vec::with_capacity(lattice * lattice * lattice);
    for i in 0..lattice {
        for j in 0..lattice {
            for k in 0..lattice {
                let frac = |idx: usize| (idx as f64 + 0.5) / lattice as f64;
                let x = [
                    lo[0] + frac(i) * (hi[0] - lo[0]),
                    lo[1] + frac(j) * (hi[1] - lo[1]),
                    lo[2] + frac(k) * (hi[2] - lo[2]),
                ];
                evals_used += 1;
                cells.push((objective(&x).0, x));
            }
        }
    }
    cells.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

    // Phase 2: local search from the best lattice cells; the final slice of
    // the budget polishes the overall winner. A Nelder-Mead iteration may
    // run a few evaluations past its budget check; the margin keeps the
    // total within max_evals.
    const EVAL_MARGIN: usize = 8;
    const LOCAL_STARTS: usize = 12;
    let remaining = req.max_evals.saturating_sub(evals_used + EVAL_MARGIN);
    let per_start = (remaining / (LOCAL_STARTS + 2)).max(20);
    // Seeded with the best scored cell so a tiny budget still yields an answer.
    let mut best: Option<(f64, Vec<f64>)> = cells.first().map(|(fx, s)| (*fx, s.to_vec()));
    for (fx0, s) in cells.iter().take(LOCAL_STARTS) {
        if evals_used + per_start + EVAL_MARGIN > req.max_evals {
            break;
        }
        let r = nelder_mead(|x| objective(x).0, s, &lo, &hi, per_start, 1e-12);
        evals_used += r.evals;
        let (fx, x) = if r.fx < *fx0 { (r.fx, r.x) } else { (*fx0, s.to_vec()) };
        let better = match &best {
            None => true,
            Some((bfx, _)) => fx < *bfx,
        };
        if better {
            best = Some((fx, x));
        }
        if best.as_ref().map(|(fx, _)| *fx <= req.tolerance * 0.1).unwrap_or(false) {
            break;
        }
    }
    let (mut fx, mut x) = best.expect("at least one start ran");
    // Phase 3: alternate simplex and compass polish on the winner until the
    // budget runs out. The compass passes un-stick the kinked ridges where
    // a collapsed simplex stalls.
    loop {
        let remaining = req.max_evals
            .saturating_sub(evals_used)
            .saturating_sub(EVAL_MARGIN);
        if remaining < 50 || fx <= req.tolerance * 0.1 {
            break;
        }
        let budget = remaining.min(600);
        let r = pattern_search(|x| objective(x).0, &x, &lo, &hi, budget / 2, 0.05);
        evals_used += r.evals;
        let r2 = nelder_mead(|x| objective(x).0, &r.x, &lo, &hi, budget - r.evals.min(budget), 1e-12);
        evals_used += r2.evals;
        let (nfx, nx) = if r2.fx < r.fx { (r2.fx, r2.x) } else { (r.fx, r.x) };
        let improved = nfx < fx - 1e-15;
        if nfx < fx {
            fx = nfx;
            x = nx;
        }
        if !improved {
            break;
        }
    }

    let cfg = Configuration::new(x[0], x[1], pressure_of(x[2]));
    let chain = forward_kinematics(geom, mat, &cfg)?;
    let residual = (chain.tip_pose.position - target).norm();
    Ok(SolveResult {
        configuration: cfg,
        achieved: [
            chain.tip_pose.position.x,
            chain.tip_pose.position.y,
            chain.tip_pose.position.z,
        ],
        residual,
        evals: evals_used,
        status: if residual <= req.tolerance {
            SolveStatus::Converged
        } else {
            SolveStatus::BestEffort
        },
    })
}

/// Whether `target` is reachable under the default request, plus the nearest
/// residual found.
pub fn reachability(
    geom: &ActuatorGeometry,
    mat: &MaterialModel,
    target: [f64; 3],
) -> (bool, f64) {
    let req = SolveRequest::for_target(target[0], target[1], target[2]);
    match solve(geom, mat, &req) {
        Ok(r) => (r.status == SolveStatus::Converged, r.residual),
        Err(_) => (false, f64::INFINITY),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (ActuatorGeometry, MaterialModel) {
        let geom = ActuatorGeometry::default();
        let mat = MaterialModel::default_for(&geom);
        (geom, mat)
    }

    fn tip_of(geom: &ActuatorGeometry, mat: &MaterialModel, cfg: &Configuration) -> [f64; 3] {
        let p = forward_kinematics(geom, mat, cfg).unwrap().tip_pose.position;
        [p.x, p.y, p.z]
    }

    #[test]
    fn round_trip_single_config() {
        let (geom, mat) = setup();
        let target = tip_of(&geom, &mat, &Configuration::new(20.0, 0.0, 0.3));
        let r = solve(&geom, &mat, &SolveRequest::for_target(target[0], target[1], target[2])).unwrap();
        assert_eq!(r.status, SolveStatus::Converged, "residual {}", r.residual);
        assert!(r.residual <= 0.5);
        assert!(r.evals <= 5000);
    }

    #[test]
    fn unpressurized_point_converges_near_zero_pressure() {
        let (geom, mat) = setup();
        let target = tip_of(&geom, &mat, &Configuration::new(0.0, 0.0, 0.0));
        let r = solve(&geom, &mat, &SolveRequest::for_target(target[0], target[1], target[2])).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        // The straight-up tip is only reachable without contact engagement.
        let e = mat.expansion(r.configuration.pressure).unwrap();
        let g = geom.gap(r.configuration.transform.theta1).unwrap();
        assert!(e <= g + 0.1, "contact should stay disengaged: e={e} g={g}");
    }

    #[test]
    fn far_target_unreachable() {
        let (geom, mat) = setup();
        let far = geom.total_length() * 10.0;
        let err = solve(&geom, &mat, &SolveRequest::for_target(far, 0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Unreachable { .. }));
    }

    #[test]
    fn request_preconditions_enforced() {
        let (geom, mat) = setup();
        let mut req = SolveRequest::for_target(0.0, 0.0, 30.0);
        req.tolerance = 0.0;
        assert!(solve(&geom, &mat, &req).is_err());
        let mut req = SolveRequest::for_target(0.0, 0.0, 30.0);
        req.max_evals = 50;
        assert!(solve(&geom, &mat, &req).is_err());
    }

    #[test]
    fn deterministic_results() {
        let (geom, mat) = setup();
        let req = SolveRequest::for_target(5.0, -10.0, 30.0);
        let a = solve(&geom, &mat, &req).unwrap();
        let b = solve(&geom, &mat, &req).unwrap();
        assert_eq!(a.residual.to_bits(), b.residual.to_bits());
        assert_eq!(a.achieved, b.achieved);
        assert_eq!(a.evals, b.evals);
    }

    #[test]
    fn mirrored_target_symmetry() {
        let (geom, mat) = setup();
        let target = tip_of(&geom, &mat, &Configuration::new(25.0, 10.0, 0.4));
        let orig = solve(&geom, &mat, &SolveRequest::for_target(target[0], target[1], target[2])).unwrap();
        let mirr = solve(&geom, &mat, &SolveRequest::for_target(-target[0], target[1], target[2])).unwrap();
        assert_eq!(orig.status, mirr.status);
        assert!((orig.residual - mirr.residual).abs() <= 2.0 * 0.5);
    }

    #[test]
    fn reachability_wraps_solve() {
        let (geom, mat) = setup();
        let target = tip_of(&geom, &mat, &Configuration::new(10.0, 0.0, 0.2));
        let (ok, res) = reachability(&geom, &mat, target);
        assert!(ok);
        assert!(res <= 0.5);
        let (ok, _) = reachability(&geom, &mat, [1000.0, 0.0, 0.0]);
        assert!(!ok);
    }

    #[test]
    fn twist_target_biases_solution() {
        let (geom, mat) = setup();
        let target = tip_of(&geom, &mat, &Configuration::new(30.0, 0.0, 0.5));
        let mut req = SolveRequest::for_target(target[0], target[1], target[2]);
        req.twist_target = Some(10.0);
        let r = solve(&geom, &mat, &req).unwrap();
        assert!(r.residual.is_finite());
    }
}
