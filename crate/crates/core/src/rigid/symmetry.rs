use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix3, Quaternion, UnitQuaternion, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{mass_matrix, BaseMode, Configuration, JointType, KinematicTree, RigidError};
use crate::augment::IsometrySet;
use crate::group::{FiniteGroup, GenPerm, Representation};

/// How a symmetry group acts on a robot: an isometry of 3-space and a signed
/// permutation of the joint-space coordinates per element.
#[derive(Debug, Clone)]
pub struct DmsAction {
    joints: Representation,
    isometries: IsometrySet,
}

impl DmsAction {
    pub fn new(joints: Representation, isometries: IsometrySet) -> Result<Self, RigidError> {
        if !joints.group().same_as(isometries.group()) {
            return Err(RigidError::Group(crate::group::GroupError::GroupMismatch));
        }
        Ok(DmsAction { joints, isometries })
    }

    /// The identity-only action on `nj` joint coordinates.
    pub fn trivial(nj: usize) -> Result<Self, RigidError> {
        let group = Arc::new(FiniteGroup::from_cayley(1, vec![0], vec![])?);
        let joints = Representation::trivial(group.clone(), nj.max(1));
        let isometries = IsometrySet::from_generator_images(group, &[])?;
        Ok(DmsAction { joints, isometries })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.joints.group()
    }

    pub fn joints(&self) -> &Representation {
        &self.joints
    }

    pub fn isometries(&self) -> &IsometrySet {
        &self.isometries
    }

    fn check_dims(&self, tree: &KinematicTree) -> Result<(), RigidError> {
        // a zero-DoF tree is paired with a placeholder one-dimensional rep
        if tree.nj() != self.joints.dim() && !(tree.nj() == 0 && self.joints.dim() == 1) {
            return Err(RigidError::DimMismatch { expected: tree.nj(), got: self.joints.dim() });
        }
        Ok(())
    }

    /// `g·q`: base pose `(R R_B Rᵀ, R t_B)`, joints `ρ_js(g) q_js`.
    pub fn act_configuration(&self, tree: &KinematicTree, g: usize, q: &Configuration) -> Result<Configuration, RigidError> {
        self.check_dims(tree)?;
        Ok(act_configuration(tree, self.isometries.matrix(g), self.joints.matrix(g), q))
    }

    /// `ρ_Q(g)` on velocity coordinates: `R` on base linear velocity,
    /// `det(R)·R` on base angular velocity, `ρ_js(g)` on joint rates.
    pub fn velocity_matrix(&self, tree: &KinematicTree, g: usize) -> Result<DMatrix<f64>, RigidError> {
        self.check_dims(tree)?;
        Ok(velocity_matrix(tree, self.isometries.matrix(g), self.joints.matrix(g)))
    }

    /// `g·(h_lin, h_ang) = (R h_lin, det(R)·R h_ang)`.
    pub fn act_momentum(&self, g: usize, h: &[f64; 6]) -> [f64; 6] {
        let lin = self.isometries.matrix(g) * Vector3::new(h[0], h[1], h[2]);
        let ang = self.isometries.pseudo(g) * Vector3::new(h[3], h[4], h[5]);
        [lin.x, lin.y, lin.z, ang.x, ang.y, ang.z]
    }
}

pub(crate) fn act_configuration(tree: &KinematicTree, r: &Matrix3<f64>, perm: &GenPerm, q: &Configuration) -> Configuration {
    let joints = if tree.nj() == 0 { q.joints.clone() } else { DVector::from_vec(perm.apply(q.joints.as_slice())) };
    Configuration { base_rotation: r * q.base_rotation * r.transpose(), base_translation: r * q.base_translation, joints }
}

pub(crate) fn velocity_matrix(tree: &KinematicTree, r: &Matrix3<f64>, perm: &GenPerm) -> DMatrix<f64> {
    let nb = tree.base_dofs();
    let mut m = DMatrix::zeros(tree.nv(), tree.nv());
    if tree.base == BaseMode::Floating {
        m.view_mut((0, 0), (3, 3)).copy_from(r);
        m.view_mut((3, 3), (3, 3)).copy_from(&(r * r.determinant().signum()));
    }
    if tree.nj() > 0 {
        for i in 0..perm.dim() {
            let (t, s) = perm.image(i);
            m[(nb + t, nb + i)] = f64::from(s);
        }
    }
    m
}

/// Uniformly random rotation from a normalized Gaussian quaternion.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let c: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    UnitQuaternion::from_quaternion(Quaternion::new(c[0], c[1], c[2], c[3])).to_rotation_matrix().into_inner()
}

/// Revolute DoFs uniform in `[−π, π]`, prismatic in `[−0.5, 0.5]`, base
/// orientation uniform over rotations, base translation in `[−1, 1]³`.
pub fn random_configuration<R: Rng + ?Sized>(tree: &KinematicTree, rng: &mut R) -> Configuration {
    let mut q = Configuration::from_joints(&vec![0.0; tree.nj()]);
    if tree.base == BaseMode::Floating {
        q.base_rotation = random_rotation(rng);
        q.base_translation = Vector3::from_fn(|_, _| rng.random_range(-1.0..=1.0));
    }
    for j in &tree.joints {
        if let Some(d) = j.dof {
            q.joints[d] = match j.kind {
                JointType::Prismatic => rng.random_range(-0.5..=0.5),
                _ => rng.random_range(-PI..=PI),
            };
        }
    }
    q
}

/// Standard normal velocity coordinates.
pub fn random_velocity<R: Rng + ?Sized>(tree: &KinematicTree, rng: &mut R) -> Vec<f64> {
    (0..tree.nv()).map(|_| rng.sample(StandardNormal)).collect()
}

/// Outcome of a sampled equivariance check. Passing means "verified on
/// `samples` configurations", nothing stronger.
#[derive(Debug, Clone, Serialize)]
pub struct MassMatrixReport {
    pub samples: usize,
    pub tol: f64,
    pub max_violation: f64,
    /// `(group element, sample index)` of the worst violation.
    pub worst: Option<(usize, usize)>,
}

impl MassMatrixReport {
    pub fn passed(&self) -> bool {
        self.max_violation <= self.tol
    }
}

/// Checks `M(g·q) = ρ_Q(g) M(q) ρ_Q(g)ᵀ` for every non-identity element over
/// random configurations. `ρ_Q` is orthogonal so `ρ_Q⁻¹ = ρ_Qᵀ`.
pub fn check_mass_matrix_equivariance(
    tree: &KinematicTree,
    action: &DmsAction,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<MassMatrixReport, RigidError> {
    action.check_dims(tree)?;
    let group = action.group().clone();
    let rhos: Vec<DMatrix<f64>> = group.elements().map(|g| action.velocity_matrix(tree, g)).collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = MassMatrixReport { samples, tol, max_violation: 0.0, worst: None };
    for s in 0..samples {
        let q = random_configuration(tree, &mut rng);
        let m = mass_matrix(tree, &q)?;
        for g in group.elements().filter(|&g| g != group.identity()) {
            let gq = action.act_configuration(tree, g, &q)?;
            let lhs = mass_matrix(tree, &gq)?;
            let rhs = &rhos[g] * &m * rhos[g].transpose();
            let err = if lhs.is_empty() { 0.0 } else { (lhs - rhs).amax() };
            if report.worst.is_none() || err > report.max_violation {
                report.max_violation = err;
                report.worst = Some((g, s));
            }
        }
    }
    Ok(report)
}
