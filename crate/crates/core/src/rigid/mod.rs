//! Small rigid-body trees: kinematics, the generalized mass matrix, centroidal
//! momentum, and sampled certification of morphological symmetries.

mod identify;
mod kinematics;
mod model;
mod symmetry;

pub use identify::{identify_dms, load_candidates, CandidateDms, CandidateVerdict, CheckStage, IdentifyReport, StageResult};
pub use kinematics::{
    center_of_mass, com_momentum, forward_kinematics, jacobians, kinetic_energy, mass_matrix, skew, world_inertia,
    BodyJacobian, BodyPose, Configuration,
};
pub use model::{load_robot, rpy_matrix, BaseMode, Joint, JointType, KinematicTree, RigidBody};
pub use symmetry::{
    check_mass_matrix_equivariance, random_configuration, random_rotation, random_velocity, DmsAction, MassMatrixReport,
};

use thiserror::Error;

use crate::augment::AugmentError;
use crate::group::GroupError;

#[derive(Debug, Error)]
pub enum RigidError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("kinematic tree: {0}")]
    TreeCycle(String),
    #[error("body {body:?}: bad inertia: {reason}")]
    BadInertia { body: String, reason: String },
    #[error("unknown body {0:?}")]
    UnknownBody(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("candidate {name:?}: {reason}")]
    Candidate { name: String, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Augment(#[from] AugmentError),
}
