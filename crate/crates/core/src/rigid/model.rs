use std::collections::HashMap;

use nalgebra::{Matrix3, Rotation3, Vector3};
use serde::Deserialize;

use super::RigidError;

#[derive(Debug, Clone, PartialEq)]
pub struct RigidBody {
    pub name: String,
    pub mass: f64,
    /// Center of mass in the body frame.
    pub com: Vector3<f64>,
    /// Rotational inertia about the CoM, body frame.
    pub inertia: Matrix3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointType {
    Revolute,
    Prismatic,
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    pub name: String,
    pub parent: usize,
    pub child: usize,
    pub kind: JointType,
    pub origin_rotation: Matrix3<f64>,
    pub origin_translation: Vector3<f64>,
    /// Unit axis in the joint frame.
    pub axis: Vector3<f64>,
    /// Index into the joint-space coordinates, `None` for fixed joints.
    pub dof: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseMode {
    Fixed,
    Floating,
}

/// A tree of rigid bodies. Joint-space DoFs follow joint declaration order,
/// skipping fixed joints. A floating base adds six velocity coordinates in
/// front: base linear velocity, then base angular velocity, both in the world
/// frame.
#[derive(Debug, Clone)]
pub struct KinematicTree {
    pub base: BaseMode,
    pub bodies: Vec<RigidBody>,
    pub joints: Vec<Joint>,
    pub root: usize,
    /// Joints in an order where every parent body is placed before its child.
    pub(crate) topo: Vec<usize>,
    /// For each body, the joint that attaches it to its parent.
    pub(crate) parent_joint: Vec<Option<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBody {
    name: String,
    mass: f64,
    com: [f64; 3],
    inertia: [f64; 6],
}

fn default_axis() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJoint {
    name: String,
    parent: String,
    child: String,
    #[serde(rename = "type")]
    kind: JointType,
    #[serde(default)]
    origin_xyz: [f64; 3],
    #[serde(default)]
    origin_rpy: [f64; 3],
    #[serde(default = "default_axis")]
    axis: [f64; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRobot {
    base: BaseMode,
    bodies: Vec<RawBody>,
    #[serde(default)]
    joints: Vec<RawJoint>,
}

/// `Rz(yaw) · Ry(pitch) · Rx(roll)`.
pub fn rpy_matrix(rpy: [f64; 3]) -> Matrix3<f64> {
    Rotation3::from_euler_angles(rpy[0], rpy[1], rpy[2]).into_inner()
}

/// Parses and validates a robot description.
pub fn load_robot(text: &str) -> Result<KinematicTree, RigidError> {
    let raw: RawRobot = serde_json::from_str(text).map_err(|e| RigidError::Parse(format!("line {}: {e}", e.line())))?;
    let mut index = HashMap::new();
    let mut bodies = Vec::with_capacity(raw.bodies.len());
    for b in raw.bodies {
        if index.insert(b.name.clone(), bodies.len()).is_some() {
            return Err(RigidError::Parse(format!("duplicate body name {:?}", b.name)));
        }
        let [ixx, ixy, ixz, iyy, iyz, izz] = b.inertia;
        let inertia = Matrix3::new(ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz);
        let bad = |reason: String| RigidError::BadInertia { body: b.name.clone(), reason };
        if !(b.mass.is_finite() && b.mass >= 0.0) {
            return Err(bad(format!("mass {} is not a finite non-negative number", b.mass)));
        }
        if inertia.iter().any(|v| !v.is_finite()) {
            return Err(bad("non-finite inertia entry".into()));
        }
        let min_eig = inertia.symmetric_eigenvalues().min();
        if min_eig < -1e-12 {
            return Err(bad(format!("inertia is not positive semidefinite (eigenvalue {min_eig:.3e})")));
        }
        bodies.push(RigidBody { name: b.name, mass: b.mass, com: Vector3::from(b.com), inertia });
    }
    if bodies.is_empty() {
        return Err(RigidError::Parse("no bodies".into()));
    }

    let mut joint_names = HashMap::new();
    let mut parent_joint = vec![None; bodies.len()];
    let mut joints = Vec::with_capacity(raw.joints.len());
    let mut next_dof = 0;
    for j in raw.joints {
        if joint_names.insert(j.name.clone(), joints.len()).is_some() {
            return Err(RigidError::Parse(format!("duplicate joint name {:?}", j.name)));
        }
        let body = |name: &str| index.get(name).copied().ok_or_else(|| RigidError::UnknownBody(name.to_string()));
        let (parent, child) = (body(&j.parent)?, body(&j.child)?);
        if parent == child {
            return Err(RigidError::TreeCycle(format!("joint {:?} attaches {:?} to itself", j.name, j.child)));
        }
        if parent_joint[child].is_some() {
            return Err(RigidError::TreeCycle(format!("body {:?} has more than one parent joint", j.child)));
        }
        parent_joint[child] = Some(joints.len());
        let axis = Vector3::from(j.axis);
        let norm = axis.norm();
        if j.kind != JointType::Fixed && !(norm.is_finite() && norm > 1e-9) {
            return Err(RigidError::Parse(format!("joint {:?} has a zero axis", j.name)));
        }
        let dof = (j.kind != JointType::Fixed).then(|| {
            next_dof += 1;
            next_dof - 1
        });
        joints.push(Joint {
            name: j.name,
            parent,
            child,
            kind: j.kind,
            origin_rotation: rpy_matrix(j.origin_rpy),
            origin_translation: Vector3::from(j.origin_xyz),
            axis: if norm > 0.0 { axis / norm } else { axis },
            dof,
        });
    }

    let roots: Vec<usize> = (0..bodies.len()).filter(|&b| parent_joint[b].is_none()).collect();
    let root = match roots.as_slice() {
        [r] => *r,
        [] => return Err(RigidError::TreeCycle("every body has a parent".into())),
        many => {
            let names: Vec<&str> = many.iter().map(|&b| bodies[b].name.as_str()).collect();
            return Err(RigidError::Parse(format!("more than one root body: {names:?}")));
        }
    };

    // breadth-first from the root; anything unreached sits on a cycle
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); bodies.len()];
    for (k, j) in joints.iter().enumerate() {
        children[j.parent].push(k);
    }
    let mut topo = Vec::with_capacity(joints.len());
    let mut queue = std::collections::VecDeque::from([root]);
    let mut reached = vec![false; bodies.len()];
    reached[root] = true;
    while let Some(b) = queue.pop_front() {
        for &k in &children[b] {
            let c = joints[k].child;
            if !reached[c] {
                reached[c] = true;
                topo.push(k);
                queue.push_back(c);
            }
        }
    }
    if let Some(b) = reached.iter().position(|r| !r) {
        return Err(RigidError::TreeCycle(format!("body {:?} is on a cycle", bodies[b].name)));
    }

    Ok(KinematicTree { base: raw.base, bodies, joints, root, topo, parent_joint })
}

impl KinematicTree {
    /// Number of joint-space coordinates.
    pub fn nj(&self) -> usize {
        self.joints.iter().filter(|j| j.dof.is_some()).count()
    }

    /// Number of velocity coordinates: `nj`, plus 6 for a floating base.
    pub fn nv(&self) -> usize {
        self.nj() + self.base_dofs()
    }

    pub fn base_dofs(&self) -> usize {
        match self.base {
            BaseMode::Fixed => 0,
            BaseMode::Floating => 6,
        }
    }

    pub fn body_index(&self, name: &str) -> Option<usize> {
        self.bodies.iter().position(|b| b.name == name)
    }

    /// Joint-space DoF names in coordinate order.
    pub fn dof_names(&self) -> Vec<&str> {
        self.joints.iter().filter(|j| j.dof.is_some()).map(|j| j.name.as_str()).collect()
    }

    /// Actuated joints on the path from the root to `body`, root first.
    pub(crate) fn ancestor_joints(&self, body: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut b = body;
        while let Some(j) = self.parent_joint[b] {
            path.push(j);
            b = self.joints[j].parent;
        }
        path.reverse();
        path
    }

    pub fn total_mass(&self) -> f64 {
        self.bodies.iter().map(|b| b.mass).sum()
    }
}
