use nalgebra::{DMatrix, DVector, Matrix3, Rotation3, Unit, Vector3};

use super::{BaseMode, JointType, KinematicTree, RigidError};

/// A configuration: base pose (ignored for fixed bases) and joint positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub base_rotation: Matrix3<f64>,
    pub base_translation: Vector3<f64>,
    pub joints: DVector<f64>,
}

impl Configuration {
    /// Identity base pose with the given joint positions.
    pub fn from_joints(joints: &[f64]) -> Self {
        Configuration {
            base_rotation: Matrix3::identity(),
            base_translation: Vector3::zeros(),
            joints: DVector::from_column_slice(joints),
        }
    }

    /// `q ⊕ dt·v`: base translated by `v_lin`, base rotated by `exp([ω]×)` in
    /// the world frame, joints moved linearly. Fixed bases ignore the base part.
    pub fn integrate(&self, tree: &KinematicTree, v: &[f64], dt: f64) -> Configuration {
        let b = tree.base_dofs();
        let mut out = self.clone();
        if tree.base == BaseMode::Floating {
            out.base_translation += Vector3::new(v[0], v[1], v[2]) * dt;
            let w = Vector3::new(v[3], v[4], v[5]) * dt;
            out.base_rotation = Rotation3::new(w).into_inner() * self.base_rotation;
        }
        for (k, q) in out.joints.iter_mut().enumerate() {
            *q += v[b + k] * dt;
        }
        out
    }
}

/// World pose of one body frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyPose {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl BodyPose {
    pub fn com(&self, local: &Vector3<f64>) -> Vector3<f64> {
        self.translation + self.rotation * local
    }
}

/// Geometric Jacobians of one body at its CoM: `v = J_P q̇`, `ω = J_R q̇`.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyJacobian {
    pub position: DMatrix<f64>,
    pub orientation: DMatrix<f64>,
}

fn check(tree: &KinematicTree, q: &Configuration) -> Result<(), RigidError> {
    if q.joints.len() != tree.nj() {
        return Err(RigidError::DimMismatch { expected: tree.nj(), got: q.joints.len() });
    }
    Ok(())
}

fn joint_motion(kind: JointType, axis: &Vector3<f64>, q: f64) -> (Matrix3<f64>, Vector3<f64>) {
    match kind {
        JointType::Revolute => (Rotation3::from_axis_angle(&Unit::new_unchecked(*axis), q).into_inner(), Vector3::zeros()),
        JointType::Prismatic => (Matrix3::identity(), axis * q),
        JointType::Fixed => (Matrix3::identity(), Vector3::zeros()),
    }
}

/// World pose of every body frame, indexed like `tree.bodies`.
pub fn forward_kinematics(tree: &KinematicTree, q: &Configuration) -> Result<Vec<BodyPose>, RigidError> {
    check(tree, q)?;
    let mut poses = vec![BodyPose { rotation: Matrix3::identity(), translation: Vector3::zeros() }; tree.bodies.len()];
    if tree.base == BaseMode::Floating {
        poses[tree.root] = BodyPose { rotation: q.base_rotation, translation: q.base_translation };
    }
    for &k in &tree.topo {
        let j = &tree.joints[k];
        let parent = poses[j.parent];
        let value = j.dof.map_or(0.0, |d| q.joints[d]);
        let (rm, tm) = joint_motion(j.kind, &j.axis, value);
        let frame_rot = parent.rotation * j.origin_rotation;
        let frame_pos = parent.translation + parent.rotation * j.origin_translation;
        poses[j.child] = BodyPose { rotation: frame_rot * rm, translation: frame_pos + frame_rot * tm };
    }
    Ok(poses)
}

/// World joint axes and joint-frame origins, indexed like `tree.joints`.
fn joint_frames(tree: &KinematicTree, poses: &[BodyPose]) -> Vec<(Vector3<f64>, Vector3<f64>)> {
    tree.joints
        .iter()
        .map(|j| {
            let parent = poses[j.parent];
            let frame_rot = parent.rotation * j.origin_rotation;
            (frame_rot * j.axis, parent.translation + parent.rotation * j.origin_translation)
        })
        .collect()
}

/// `[v]×` such that `[v]× w = v × w`.
pub fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Jacobians of every body at its CoM, indexed like `tree.bodies`.
pub fn jacobians(tree: &KinematicTree, q: &Configuration) -> Result<Vec<BodyJacobian>, RigidError> {
    let poses = forward_kinematics(tree, q)?;
    let frames = joint_frames(tree, &poses);
    let (nv, nb) = (tree.nv(), tree.base_dofs());
    let mut out = Vec::with_capacity(tree.bodies.len());
    for (b, body) in tree.bodies.iter().enumerate() {
        let c = poses[b].com(&body.com);
        let mut jp = DMatrix::zeros(3, nv);
        let mut jr = DMatrix::zeros(3, nv);
        if tree.base == BaseMode::Floating {
            jp.view_mut((0, 0), (3, 3)).copy_from(&Matrix3::identity());
            // ω × (c − t_B) = −[c − t_B]× ω
            jp.view_mut((0, 3), (3, 3)).copy_from(&(-skew(&(c - q.base_translation))));
            jr.view_mut((0, 3), (3, 3)).copy_from(&Matrix3::identity());
        }
        for k in tree.ancestor_joints(b) {
            let j = &tree.joints[k];
            let Some(d) = j.dof else { continue };
            let (axis, origin) = frames[k];
            match j.kind {
                JointType::Revolute => {
                    jp.view_mut((0, nb + d), (3, 1)).copy_from(&axis.cross(&(c - origin)));
                    jr.view_mut((0, nb + d), (3, 1)).copy_from(&axis);
                }
                JointType::Prismatic => jp.view_mut((0, nb + d), (3, 1)).copy_from(&axis),
                JointType::Fixed => {}
            }
        }
        out.push(BodyJacobian { position: jp, orientation: jr });
    }
    Ok(out)
}

/// Body inertia about its CoM expressed in the world frame.
pub fn world_inertia(rotation: &Matrix3<f64>, inertia: &Matrix3<f64>) -> Matrix3<f64> {
    rotation * inertia * rotation.transpose()
}

/// `M(q) = Σ_k m_k J_Pᵀ J_P + J_Rᵀ (R I Rᵀ) J_R`.
pub fn mass_matrix(tree: &KinematicTree, q: &Configuration) -> Result<DMatrix<f64>, RigidError> {
    let poses = forward_kinematics(tree, q)?;
    let jac = jacobians(tree, q)?;
    let nv = tree.nv();
    let mut m = DMatrix::zeros(nv, nv);
    for ((body, pose), j) in tree.bodies.iter().zip(&poses).zip(&jac) {
        let iw = world_inertia(&pose.rotation, &body.inertia);
        m += j.position.tr_mul(&j.position) * body.mass;
        m += j.orientation.tr_mul(&(DMatrix::from_column_slice(3, 3, iw.as_slice()) * &j.orientation));
    }
    Ok(m)
}

/// Total center of mass in the world frame.
pub fn center_of_mass(tree: &KinematicTree, q: &Configuration) -> Result<Vector3<f64>, RigidError> {
    let poses = forward_kinematics(tree, q)?;
    let total = tree.total_mass();
    let weighted = tree.bodies.iter().zip(&poses).fold(Vector3::zeros(), |acc, (b, p)| acc + p.com(&b.com) * b.mass);
    Ok(if total > 0.0 { weighted / total } else { Vector3::zeros() })
}

/// Centroidal momentum `(h_lin, h_ang)`, angular part about the total CoM.
pub fn com_momentum(tree: &KinematicTree, q: &Configuration, qd: &[f64]) -> Result<[f64; 6], RigidError> {
    if qd.len() != tree.nv() {
        return Err(RigidError::DimMismatch { expected: tree.nv(), got: qd.len() });
    }
    let poses = forward_kinematics(tree, q)?;
    let jac = jacobians(tree, q)?;
    let c = center_of_mass(tree, q)?;
    let qd = DVector::from_column_slice(qd);
    let mut lin = Vector3::zeros();
    let mut ang = Vector3::zeros();
    for ((body, pose), j) in tree.bodies.iter().zip(&poses).zip(&jac) {
        let v = Vector3::from_iterator((&j.position * &qd).iter().copied());
        let w = Vector3::from_iterator((&j.orientation * &qd).iter().copied());
        let p = pose.com(&body.com);
        lin += v * body.mass;
        ang += (p - c).cross(&(v * body.mass)) + world_inertia(&pose.rotation, &body.inertia) * w;
    }
    Ok([lin.x, lin.y, lin.z, ang.x, ang.y, ang.z])
}

/// `½ q̇ᵀ M(q) q̇`.
pub fn kinetic_energy(tree: &KinematicTree, q: &Configuration, qd: &[f64]) -> Result<f64, RigidError> {
    let m = mass_matrix(tree, q)?;
    let v = DVector::from_column_slice(qd);
    if v.len() != m.nrows() {
        return Err(RigidError::DimMismatch { expected: m.nrows(), got: v.len() });
    }
    Ok(0.5 * v.dot(&(&m * &v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigid::load_robot;

    fn pendulum(r: f64, m: f64) -> KinematicTree {
        load_robot(&format!(
            r#"{{"base": "fixed",
              "bodies": [
                {{"name": "base", "mass": 0, "com": [0,0,0], "inertia": [0,0,0,0,0,0]}},
                {{"name": "bob", "mass": {m}, "com": [{r},0,0], "inertia": [0,0,0,0,0,0]}}],
              "joints": [{{"name": "j", "parent": "base", "child": "bob", "type": "revolute", "axis": [0,0,1]}}]}}"#
        ))
        .unwrap()
    }

    #[test]
    fn quarter_turn_maps_x_to_y() {
        let tree = pendulum(1.0, 1.0);
        let poses = forward_kinematics(&tree, &Configuration::from_joints(&[std::f64::consts::FRAC_PI_2])).unwrap();
        assert!((poses[1].rotation * Vector3::x() - Vector3::y()).norm() < 1e-15);
    }

    #[test]
    fn pendulum_jacobian_and_mass() {
        let (r, m) = (0.7, 2.5);
        let tree = pendulum(r, m);
        let q = Configuration::from_joints(&[0.4]);
        let jac = jacobians(&tree, &q).unwrap();
        assert!((jac[1].position.column(0).norm() - r).abs() < 1e-15);
        let mm = mass_matrix(&tree, &q).unwrap();
        assert!((mm[(0, 0)] - m * r * r).abs() < 1e-14);
    }

    #[test]
    fn zero_dof_tree_has_empty_jacobians() {
        let tree = load_robot(r#"{"base": "fixed", "bodies": [{"name": "b", "mass": 1, "com": [0,0,0], "inertia": [1,0,0,1,0,1]}]}"#).unwrap();
        let jac = jacobians(&tree, &Configuration::from_joints(&[])).unwrap();
        assert_eq!(jac[0].position.shape(), (3, 0));
        assert!(matches!(jacobians(&tree, &Configuration::from_joints(&[1.0])), Err(RigidError::DimMismatch { .. })));
    }

    #[test]
    fn free_body_momentum() {
        let tree = load_robot(r#"{"base": "floating", "bodies": [{"name": "b", "mass": 3, "com": [0.1,0,0], "inertia": [1,0,0,1,0,1]}]}"#).unwrap();
        let q = Configuration::from_joints(&[]);
        let h = com_momentum(&tree, &q, &[1.0, -2.0, 0.5, 0.0, 0.0, 0.0]).unwrap();
        let want = [3.0, -6.0, 1.5, 0.0, 0.0, 0.0];
        assert!(h.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-15), "{h:?}");
        assert_eq!(com_momentum(&tree, &q, &[0.0; 6]).unwrap(), [0.0; 6]);
    }
}
