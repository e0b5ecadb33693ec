use std::path::PathBuf;

use dms_core::rigid::*;
use nalgebra::{DMatrix, DVector, Rotation3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn robot(name: &str) -> KinematicTree {
    load_robot(&fixture(name)).unwrap()
}

/// Random tree: each body hangs off a random earlier body through a random
/// joint type, origin and axis.
fn random_tree(rng: &mut ChaCha8Rng, n_bodies: usize, floating: bool) -> KinematicTree {
    let mut bodies = Vec::new();
    let mut joints = Vec::new();
    for b in 0..n_bodies {
        let a: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.1..1.0));
        let off: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.05..0.05));
        let com: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.3..0.3));
        // diagonally dominant, hence positive definite
        bodies.push(json!({"name": format!("b{b}"), "mass": rng.random_range(0.2..3.0), "com": com,
            "inertia": [a[0], off[0], off[1], a[1], off[2], a[2]]}));
        if b > 0 {
            let kind = ["revolute", "revolute", "prismatic", "fixed"][rng.random_range(0..4)];
            let xyz: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.5..0.5));
            let rpy: [f64; 3] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
            let axis: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            joints.push(json!({"name": format!("j{b}"), "parent": format!("b{}", rng.random_range(0..b)),
                "child": format!("b{b}"), "type": kind, "origin_xyz": xyz, "origin_rpy": rpy, "axis": axis}));
        }
    }
    let base = if floating { "floating" } else { "fixed" };
    load_robot(&json!({"base": base, "bodies": bodies, "joints": joints}).to_string()).unwrap()
}

/// Central differences of CoM positions and orientations along each velocity
/// coordinate.
fn fd_jacobians(tree: &KinematicTree, q: &Configuration, h: f64) -> Vec<(DMatrix<f64>, DMatrix<f64>)> {
    let nv = tree.nv();
    let mut out = vec![(DMatrix::zeros(3, nv), DMatrix::zeros(3, nv)); tree.bodies.len()];
    for j in 0..nv {
        let mut e = vec![0.0; nv];
        e[j] = 1.0;
        let plus = forward_kinematics(tree, &q.integrate(tree, &e, h)).unwrap();
        let minus = forward_kinematics(tree, &q.integrate(tree, &e, -h)).unwrap();
        for (b, body) in tree.bodies.iter().enumerate() {
            let dp = (plus[b].com(&body.com) - minus[b].com(&body.com)) / (2.0 * h);
            // vee of the skew part; exact to O(h³) for a near-identity rotation
            let d = plus[b].rotation * minus[b].rotation.transpose();
            let dr = Vector3::new(d[(2, 1)] - d[(1, 2)], d[(0, 2)] - d[(2, 0)], d[(1, 0)] - d[(0, 1)]) / (4.0 * h);
            out[b].0.set_column(j, &dp);
            out[b].1.set_column(j, &dr);
        }
    }
    out
}

#[test]
fn jacobians_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut trees: Vec<KinematicTree> = (0..6).map(|k| random_tree(&mut rng, 2 + k, k % 2 == 1)).collect();
    for name in ["mini_biped.json", "floating_biped.json", "tri_chain.json"] {
        trees.push(robot(name));
    }
    for tree in &trees {
        for _ in 0..5 {
            let q = random_configuration(tree, &mut rng);
            let analytic = jacobians(tree, &q).unwrap();
            for (a, (fp, fr)) in analytic.iter().zip(fd_jacobians(tree, &q, 1e-7)) {
                assert!((&a.position - fp).amax() < 1e-6);
                assert!((&a.orientation - fr).amax() < 1e-6);
            }
        }
    }
}

#[test]
fn mass_matrix_is_symmetric_psd_and_matches_kinetic_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..8 {
        let tree = random_tree(&mut rng, 3 + k % 4, k % 2 == 0);
        for _ in 0..10 {
            let q = random_configuration(&tree, &mut rng);
            let qd = random_velocity(&tree, &mut rng);
            let m = mass_matrix(&tree, &q).unwrap();
            assert!((&m - m.transpose()).amax() < 1e-12);
            assert!(m.clone().symmetric_eigenvalues().min() >= -1e-10);
            // per-body oracle: Σ ½ m |v|² + ½ ωᵀ I_world ω
            let poses = forward_kinematics(&tree, &q).unwrap();
            let jac = jacobians(&tree, &q).unwrap();
            let v = DVector::from_column_slice(&qd);
            let mut t = 0.0;
            for ((body, pose), j) in tree.bodies.iter().zip(&poses).zip(&jac) {
                let lin = &j.position * &v;
                let w = &j.orientation * &v;
                let w = Vector3::new(w[0], w[1], w[2]);
                t += 0.5 * body.mass * lin.norm_squared() + 0.5 * w.dot(&(world_inertia(&pose.rotation, &body.inertia) * w));
            }
            let te = kinetic_energy(&tree, &q, &qd).unwrap();
            assert!((te - t).abs() <= 1e-10 * t.abs().max(1e-300));
        }
    }
}

#[test]
fn fixtures_load_with_expected_dofs() {
    assert_eq!(robot("mini_biped.json").nj(), 2);
    assert_eq!(robot("floating_biped.json").nv(), 10);
    assert_eq!(robot("tri_chain.json").dof_names().len(), 9);
}

#[test]
fn mirrored_configurations_give_mirrored_poses() {
    let tree = robot("mini_biped.json");
    let poses = forward_kinematics(&tree, &Configuration::from_joints(&[0.7, -0.7])).unwrap();
    let r = Rotation3::from_matrix_unchecked(nalgebra::Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, 1.0))).into_inner();
    assert!((poses[2].translation - r * poses[1].translation).amax() < 1e-15);
    assert!((poses[2].rotation - r * poses[1].rotation * r).amax() < 1e-15);
}

fn identify(robot_file: &str, candidates: &str) -> IdentifyReport {
    let tree = robot(robot_file);
    let cands = load_candidates(&fixture(candidates), &tree).unwrap();
    identify_dms(&tree, &cands, 100, 1e-8, 7).unwrap()
}

#[test]
fn identifies_mirror_and_cycle_groups() {
    for (r, c, order) in [
        ("mini_biped.json", "mini_biped_candidates.json", 2),
        ("floating_biped.json", "floating_biped_candidates.json", 2),
        ("tri_chain.json", "tri_chain_candidates.json", 3),
    ] {
        let report = identify(r, c);
        assert!(report.verdicts.iter().all(|v| v.verified), "{r}: {:?}", report.verdicts);
        assert_eq!(report.group_order, order, "{r}");
        assert!(report.group_check.unwrap().passed());
    }
}

#[test]
fn wrong_pairing_fails_the_jacobian_constraint() {
    let report = identify("mini_biped.json", "mini_biped_wrong_pairing.json");
    let v = &report.verdicts[0];
    assert!(!v.verified);
    let failed: Vec<CheckStage> = v.stages.iter().filter(|s| !s.passed).map(|s| s.stage).collect();
    assert_eq!(failed[0], CheckStage::Kinematics);
    assert_eq!(report.group_order, 1);
}

#[test]
fn perturbed_mass_is_rejected_and_violation_scales() {
    let tree = robot("mini_biped_perturbed.json");
    let cands = load_candidates(&fixture("mini_biped_candidates.json"), &tree).unwrap();
    let report = identify_dms(&tree, &cands, 50, 1e-8, 7).unwrap();
    assert!(!report.verdicts[0].verified);
    let mm = report.verdicts[0].stages.iter().find(|s| s.stage == CheckStage::MassMatrix).unwrap();
    assert!(mm.max_violation > 1e-3);

    // doubling the perturbation roughly doubles the violation
    let text = fixture("mini_biped_perturbed.json").replace("\"mass\": 1.1", "\"mass\": 1.2");
    let tree2 = load_robot(&text).unwrap();
    let report2 = identify_dms(&tree2, &cands, 50, 1e-8, 7).unwrap();
    let mm2 = report2.verdicts[0].stages.iter().find(|s| s.stage == CheckStage::MassMatrix).unwrap();
    let ratio = mm2.max_violation / mm.max_violation;
    assert!((1.8..2.2).contains(&ratio), "{ratio}");
}

#[test]
fn trivial_action_passes_vacuously() {
    let tree = robot("tri_chain.json");
    let report = check_mass_matrix_equivariance(&tree, &DmsAction::trivial(tree.nj()).unwrap(), 10, 1e-12, 0).unwrap();
    assert!(report.passed());
    assert!(report.worst.is_none());
}

#[test]
fn com_momentum_is_equivariant_with_pseudovector_split() {
    for (r, c) in [("floating_biped.json", "floating_biped_candidates.json"), ("tri_chain.json", "tri_chain_candidates.json")] {
        let tree = robot(r);
        let action = identify(r, c).action.unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let q = random_configuration(&tree, &mut rng);
            let qd = random_velocity(&tree, &mut rng);
            let h = com_momentum(&tree, &q, &qd).unwrap();
            for g in action.group().elements() {
                let gq = action.act_configuration(&tree, g, &q).unwrap();
                let gqd = action.velocity_matrix(&tree, g).unwrap() * DVector::from_column_slice(&qd);
                let lhs = com_momentum(&tree, &gq, gqd.as_slice()).unwrap();
                let rhs = action.act_momentum(g, &h);
                let err = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(err < 1e-10, "{r} g={g}: {err}");
                let t = kinetic_energy(&tree, &q, &qd).unwrap();
                let tg = kinetic_energy(&tree, &gq, gqd.as_slice()).unwrap();
                assert!((t - tg).abs() <= 1e-8 * t.max(1.0));
            }
        }
    }
}

#[test]
fn candidate_file_errors() {
    let tree = robot("mini_biped.json");
    let not_bijective = r#"{"candidates": [{"name": "c", "isometry": [[1,0,0],[0,-1,0],[0,0,1]],
        "joints": {"target": [1, 0], "sign": [1, 1]}, "pairing": [["left", "right"]]}]}"#;
    assert!(matches!(load_candidates(not_bijective, &tree), Err(RigidError::Candidate { .. })));
    let wrong_dim = r#"{"candidates": [{"name": "c", "isometry": [[1,0,0],[0,1,0],[0,0,1]],
        "joints": {"target": [0], "sign": [1]}}]}"#;
    assert!(matches!(load_candidates(wrong_dim, &tree), Err(RigidError::Candidate { .. })));
    let trivial = r#"{"candidates": [{"name": "c", "isometry": [[1,0,0],[0,1,0],[0,0,1]],
        "joints": {"target": [0, 1], "sign": [1, 1]}}]}"#;
    let cands = load_candidates(trivial, &tree).unwrap();
    let report = identify_dms(&tree, &cands, 5, 1e-8, 0).unwrap();
    assert_eq!(report.verdicts[0].stages[0].stage, CheckStage::JointSpace);
    assert!(!report.verdicts[0].verified);
}
