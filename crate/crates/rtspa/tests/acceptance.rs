//! End-to-end acceptance checks, one test per release criterion. Each test
//! prints a single pass line; tolerances are part of the release contract.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rtspa::apps::{blocking_force, gait_plan, gripper_opening, simulate_gait, Direction, GripperLayout};
use rtspa::geometry::ActuatorGeometry;
use rtspa::material::{fit_ogden, synthesize_samples, MaterialModel, OgdenModel, select_wall_thickness, DEFAULT_STRAIN_CAP};
use rtspa::rrm::{motors_to_transform, Mode, MotorState};
use rtspa::sam::{forward_kinematics, tip_bend_angle, tip_twist, Configuration};
use rtspa::solver::{solve, SolveRequest, SolveStatus};
use rtspa::workspace::{mirror_yz, sweep, workspace_metrics, SweepMode, SweepSpec};

fn default_setup() -> (ActuatorGeometry, MaterialModel) {
    let geom = ActuatorGeometry::default();
    let mat = MaterialModel::default_for(&geom);
    (geom, mat)
}

fn random_valid_geometry(rng: &mut ChaCha8Rng) -> ActuatorGeometry {
    let mut g = ActuatorGeometry::default();
    g.unit_spacing = rng.gen_range(5.0..20.0);
    g.unit_width = g.unit_spacing * rng.gen_range(0.3..0.95);
    g.base_width = g.unit_spacing * rng.gen_range(0.3..0.95);
    g.base_distance = (g.unit_spacing - g.unit_width) * rng.gen_range(1.01..1.5);
    g
}

#[test]
fn criterion_01_contact_angle_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let g = random_valid_geometry(&mut rng);
        let lhs = g.unit_spacing * g.theta1_max_deg().to_radians().cos();
        assert!(
            (lhs - g.unit_width).abs() / g.unit_width < 1e-9,
            "L cos(theta1_max) = {lhs}, W = {}",
            g.unit_width
        );
    }
    let g = ActuatorGeometry::default();
    assert!((g.theta1_max_deg() - 44.77).abs() < 0.01);
    println!("criterion 01 contact angle relation: PASS");
}

#[test]
fn criterion_02_gap_law() {
    let g = ActuatorGeometry::default();
    assert_eq!(g.gap(0.0).unwrap(), g.unit_spacing - g.unit_width);
    assert!(g.gap(g.theta1_max_deg()).unwrap() <= 1e-9);
    let mut prev = f64::INFINITY;
    for i in 0..100 {
        let t1 = g.theta1_max_deg() * i as f64 / 99.0;
        let gap = g.gap(t1).unwrap();
        assert!(gap < prev, "gap not strictly decreasing at step {i}");
        prev = gap;
    }
    println!("criterion 02 gap law: PASS");
}

#[test]
fn criterion_03_mode_semantics() {
    let g = ActuatorGeometry::default();
    let rows = [
        (0.0, 0.0, Mode::Bending),
        (30.0, 0.0, Mode::Mode1),
        (0.0, 40.0, Mode::Mode2),
        (30.0, 20.0, Mode::Mixed),
    ];
    for (a, b, mode) in rows {
        let t = motors_to_transform(MotorState { alpha_a: a, alpha_b: b }, &g).unwrap();
        assert_eq!(t.mode, mode, "motors ({a}, {b})");
        assert_eq!(t.theta2, b);
        assert_eq!(t.theta1, a - b);
    }
    // Motor B alone: the units tilt passively opposite the base.
    let t = motors_to_transform(MotorState { alpha_a: 0.0, alpha_b: 40.0 }, &g).unwrap();
    assert_eq!(t.theta1, -t.theta2);
    println!("criterion 03 mode semantics: PASS");
}

#[test]
fn criterion_04_planarity() {
    let (geom, mat) = default_setup();
    let bending = sweep(&geom, &mat, &SweepSpec::new(SweepMode::Bending)).unwrap();
    for s in &bending {
        assert!(s.x.abs() < 1e-9, "bending sample x = {}", s.x);
    }
    let mirrored = mirror_yz(&sweep(&geom, &mat, &SweepSpec::new(SweepMode::Mode1)).unwrap());
    let mean_x = mirrored.iter().map(|s| s.x).sum::<f64>() / mirrored.len() as f64;
    assert!(mean_x.abs() < 1e-9);
    println!("criterion 04 planarity: PASS");
}

#[test]
fn criterion_05_workspace_enhancement() {
    let (geom, mat) = default_setup();
    let bending = sweep(&geom, &mat, &SweepSpec::new(SweepMode::Bending)).unwrap();
    let mode1 = mirror_yz(&sweep(&geom, &mat, &SweepSpec::new(SweepMode::Mode1)).unwrap());
    let mb = workspace_metrics(&bending);
    let m1 = workspace_metrics(&mode1);
    assert_eq!(mb.hull_volume_mm3, 0.0);
    assert!(m1.hull_volume_mm3 > 0.0);
    assert!(m1.bbox_min[0] < mb.bbox_min[0] && m1.bbox_max[0] > mb.bbox_max[0]);
    println!("criterion 05 workspace enhancement: PASS");
}

#[test]
fn criterion_06_width_trends() {
    let widths = [6.1, 7.1, 8.1];
    let mut bends = Vec::new();
    let mut twists = Vec::new();
    for w in widths {
        let mut geom = ActuatorGeometry::default();
        geom.unit_width = w;
        let mat = MaterialModel::default_for(&geom);
        bends.push(tip_bend_angle(&geom, &mat, &Configuration::new(0.0, 0.0, 0.5)).unwrap());
        let t1 = geom.theta1_max_deg();
        twists.push(tip_twist(&geom, &mat, &Configuration::new(t1, 0.0, 0.5)).unwrap());
    }
    for pair in bends.windows(2) {
        assert!(pair[1] >= pair[0] - 1e-12, "bend trend violated: {bends:?}");
    }
    for pair in twists.windows(2) {
        assert!(pair[1] >= pair[0] - 1e-12, "twist trend violated: {twists:?}");
    }
    println!("criterion 06 width trends: PASS");
}

#[test]
fn criterion_07_inverse_round_trip() {
    let (geom, mat) = default_setup();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let t1 = rng.gen_range(-geom.theta1_max_deg()..geom.theta1_max_deg());
        let t2 = rng.gen_range(-geom.theta2_max_deg()..geom.theta2_max_deg());
        let p = rng.gen_range(0.0..geom.p_max);
        let tip = forward_kinematics(&geom, &mat, &Configuration::new(t1, t2, p))
            .unwrap()
            .tip_pose
            .position;
        let r = solve(&geom, &mat, &SolveRequest::for_target(tip.x, tip.y, tip.z)).unwrap();
        assert_eq!(
            r.status,
            SolveStatus::Converged,
            "case {i} ({t1:.2}, {t2:.2}, {p:.3}): residual {}",
            r.residual
        );
        assert!(r.residual <= 0.5);
        assert!(r.evals <= 5000, "case {i}: {} evaluations", r.evals);
    }
    println!("criterion 07 inverse round trip: PASS");
}

#[test]
fn criterion_08_hyperelastic_fit() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let lambdas: Vec<f64> = (0..=20).map(|i| 1.0 + i as f64 * 0.05).collect();
    for _ in 0..50 {
        let truth = OgdenModel {
            mu: rng.gen_range(0.1..5.0),
            alpha: rng.gen_range(1.2..6.0),
        };
        let fit = fit_ogden(&synthesize_samples(&truth, &lambdas)).unwrap();
        assert!((fit.model.mu - truth.mu).abs() / truth.mu < 0.01, "{truth:?} -> {fit:?}");
        assert!((fit.model.alpha - truth.alpha).abs() / truth.alpha < 0.01);
    }
    let nh = OgdenModel { mu: 0.9, alpha: 2.0 };
    for i in 1..=30 {
        let l = 1.0 + i as f64 * 0.05;
        let expected = nh.mu * (l - l.powi(-2));
        assert!((nh.uniaxial_stress(l).unwrap() - expected).abs() < 1e-12);
    }
    println!("criterion 08 hyperelastic fit: PASS");
}

#[test]
fn criterion_09_membrane_surrogate() {
    let (_, mat) = default_setup();
    let thicknesses = [0.7, 0.9, 1.0, 1.2];
    let mut prev = f64::INFINITY;
    for t in thicknesses {
        let mut m = mat;
        m.wall_thickness = t;
        let e = m.expansion(0.5).unwrap();
        assert!(e < prev, "expansion not anti-monotone at t = {t}");
        prev = e;
    }
    let chosen = select_wall_thickness(&thicknesses, &mat, 0.5, DEFAULT_STRAIN_CAP).unwrap();
    assert_eq!(chosen, 0.9);
    println!("criterion 09 membrane surrogate: PASS");
}

#[test]
fn criterion_10_gripper_numbers() {
    let (geom, mat) = default_setup();
    let layout = GripperLayout::default();
    let identity = vec![Configuration::new(0.0, 0.0, 0.0); 4];
    assert_eq!(gripper_opening(&layout, &geom, &mat, &identity).unwrap(), 120.0);
    let lean = vec![Configuration::new(0.0, geom.theta2_max_deg(), 0.0); 4];
    let enhanced = gripper_opening(&layout, &geom, &mat, &lean).unwrap();
    assert!((enhanced - 263.0).abs() <= 0.1 * 263.0, "enhanced = {enhanced}");
    println!("criterion 10 gripper numbers: PASS");
}

#[test]
fn criterion_11_force_trends() {
    // 20x20 grid over (width, tilt); tilt rows stay inside the contact
    // limit of the widest design so every cell is valid.
    let base = ActuatorGeometry::default();
    let widths: Vec<f64> = (0..20).map(|j| 6.0 + 2.4 * j as f64 / 19.0).collect();
    let tilt_cap = 0.9 * (widths.last().unwrap() / base.unit_spacing).acos().to_degrees();
    let tilts: Vec<f64> = (0..20).map(|i| tilt_cap * i as f64 / 19.0).collect();
    let force_at = |w: f64, t1: f64| {
        let mut g = base;
        g.unit_width = w;
        let mat = MaterialModel::default_for(&g);
        blocking_force(&g, &mat, t1, 0.5).unwrap()
    };
    for &t1 in &tilts {
        // Monotone in width along each tilt row.
        let mut prev = -f64::INFINITY;
        for &w in &widths {
            let f = force_at(w, t1);
            assert!(f >= prev - 1e-12, "width trend violated at ({w}, {t1})");
            prev = f;
        }
    }
    for &w in &widths {
        // Monotone in tilt along each width column; zero without pressure.
        let mut prev = -f64::INFINITY;
        for &t1 in &tilts {
            let f = force_at(w, t1);
            assert!(f >= prev - 1e-12, "tilt trend violated at ({w}, {t1})");
            prev = f;
        }
        let mut g = base;
        g.unit_width = w;
        let mat = MaterialModel::default_for(&g);
        assert_eq!(blocking_force(&g, &mat, 0.0, 0.0).unwrap(), 0.0);
    }
    println!("criterion 11 force trends: PASS");
}

#[test]
fn criterion_12_gait_properties() {
    let (geom, mat) = default_setup();

    let fwd = gait_plan(Direction::PlusX, &geom);
    fwd.validate(&geom).unwrap();
    let traj = simulate_gait(&fwd, 1, &geom, &mat).unwrap();
    let last = traj.last().unwrap();
    assert!(last.x.abs() > 0.0);
    assert!(last.y.abs() / last.x.abs() < 1e-6, "stray lateral drift {last:?}");

    let cw = gait_plan(Direction::Cw, &geom);
    cw.validate(&geom).unwrap();
    let traj = simulate_gait(&cw, 1, &geom, &mat).unwrap();
    let last = traj.last().unwrap();
    assert!(last.yaw_deg < 0.0, "cw plan yaw {last:?}");
    // Net translation against the tip excursion of the stance stroke.
    let stance = cw
        .steps
        .iter()
        .find(|s| s.config.pressure > 0.0)
        .expect("cw plan pressurizes");
    let rest = Configuration::new(
        stance.config.transform.theta1,
        stance.config.transform.theta2,
        0.0,
    );
    let tip_rest = forward_kinematics(&geom, &mat, &rest).unwrap().tip_pose.position;
    let tip_full = forward_kinematics(&geom, &mat, &stance.config).unwrap().tip_pose.position;
    let excursion = (tip_full - tip_rest).norm();
    assert!(excursion > 0.0);
    let translation = (last.x * last.x + last.y * last.y).sqrt();
    assert!(
        translation < 0.05 * excursion,
        "translation {translation} vs excursion {excursion}"
    );

    for d in [
        Direction::PlusX,
        Direction::MinusX,
        Direction::PlusY,
        Direction::MinusY,
        Direction::Cw,
        Direction::Ccw,
    ] {
        gait_plan(d, &geom).validate(&geom).unwrap();
    }
    println!("criterion 12 gait properties: PASS");
}
