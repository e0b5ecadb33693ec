use nalgebra::{DMatrix, Matrix3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::symmetry::{act_configuration, velocity_matrix};
use super::{
    check_mass_matrix_equivariance, forward_kinematics, jacobians, mass_matrix, random_configuration, world_inertia,
    DmsAction, KinematicTree, MassMatrixReport, RigidError,
};
use crate::augment::{IsometrySet, ISOMETRY_TOL};
use crate::group::{close_jointly, GenPerm, DEFAULT_ORDER_CAP};

/// A user-proposed morphological symmetry: an isometry of 3-space, its
/// joint-space signed permutation, and the body map `k ↦ pairing[k]` saying
/// body `k` at `q` plays the role of body `pairing[k]` at `g·q`.
#[derive(Debug, Clone)]
pub struct CandidateDms {
    pub name: String,
    pub isometry: Matrix3<f64>,
    pub joints: GenPerm,
    pub pairing: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCandidate {
    name: String,
    isometry: [[f64; 3]; 3],
    joints: GenPerm,
    #[serde(default)]
    pairing: Vec<[String; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCandidates {
    candidates: Vec<RawCandidate>,
}

/// Parses a candidate file against `tree`. Each pairing entry `[k, i]` maps
/// body `k` to body `i`; bodies not listed map to themselves. The resulting
/// map must be a bijection.
pub fn load_candidates(text: &str, tree: &KinematicTree) -> Result<Vec<CandidateDms>, RigidError> {
    let raw: RawCandidates = serde_json::from_str(text).map_err(|e| RigidError::Parse(format!("line {}: {e}", e.line())))?;
    raw.candidates
        .into_iter()
        .map(|c| {
            let bad = |reason: String| RigidError::Candidate { name: c.name.clone(), reason };
            let isometry = Matrix3::from_fn(|i, j| c.isometry[i][j]);
            let orth = (isometry.transpose() * isometry - Matrix3::identity()).amax();
            if !orth.is_finite() || orth > ISOMETRY_TOL {
                return Err(bad(format!("isometry is not orthogonal (|RᵀR - I| = {orth:.3e})")));
            }
            if c.joints.dim() != tree.nj() {
                return Err(bad(format!("joint permutation has dimension {}, robot has {} DoF", c.joints.dim(), tree.nj())));
            }
            let mut pairing: Vec<usize> = (0..tree.bodies.len()).collect();
            let mut assigned = vec![false; tree.bodies.len()];
            for [from, to] in &c.pairing {
                let k = tree.body_index(from).ok_or_else(|| RigidError::UnknownBody(from.clone()))?;
                let i = tree.body_index(to).ok_or_else(|| RigidError::UnknownBody(to.clone()))?;
                if std::mem::replace(&mut assigned[k], true) {
                    return Err(bad(format!("body {from:?} is paired twice")));
                }
                pairing[k] = i;
            }
            let mut hit = vec![false; pairing.len()];
            for &i in &pairing {
                if std::mem::replace(&mut hit[i], true) {
                    return Err(bad(format!("pairing is not a bijection: body {:?} is hit twice", tree.bodies[i].name)));
                }
            }
            Ok(CandidateDms { name: c.name, isometry, joints: c.joints, pairing })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStage {
    /// Non-trivial joint-space action.
    JointSpace,
    /// Paired bodies share mass and principal moments.
    Inertia,
    /// Paired CoM positions, world inertias and Jacobians agree.
    Kinematics,
    MassMatrix,
}

impl CheckStage {
    fn label(self) -> &'static str {
        match self {
            CheckStage::JointSpace => "joint-space",
            CheckStage::Inertia => "inertia",
            CheckStage::Kinematics => "Jacobian-constraint",
            CheckStage::MassMatrix => "mass-matrix",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageResult {
    pub stage: CheckStage,
    pub max_violation: f64,
    pub worst_sample: Option<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateVerdict {
    pub name: String,
    pub verified: bool,
    pub stages: Vec<StageResult>,
    /// Why the first failing stage failed.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentifyReport {
    pub samples: usize,
    pub tol: f64,
    pub verdicts: Vec<CandidateVerdict>,
    /// Order of the group generated by the verified candidates (1 if none).
    pub group_order: usize,
    /// Mass-matrix check over every element of the generated group.
    pub group_check: Option<MassMatrixReport>,
    #[serde(skip)]
    pub action: Option<DmsAction>,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn sorted_eigs(m: &Matrix3<f64>) -> [f64; 3] {
    let mut e: [f64; 3] = m.symmetric_eigenvalues().into();
    e.sort_by(f64::total_cmp);
    e
}

fn inertia_stage(tree: &KinematicTree, c: &CandidateDms, tol: f64) -> (StageResult, Option<String>) {
    let mut worst = 0.0f64;
    let mut reason = None;
    for (k, &i) in c.pairing.iter().enumerate() {
        let (bk, bi) = (&tree.bodies[k], &tree.bodies[i]);
        let dm = rel(bk.mass, bi.mass);
        let (ek, ei) = (sorted_eigs(&bk.inertia), sorted_eigs(&bi.inertia));
        let de = ek.iter().zip(&ei).map(|(a, b)| rel(*a, *b)).fold(0.0, f64::max);
        let err = dm.max(de);
        if err > worst {
            worst = err;
            if err > tol {
                reason = Some(if dm >= de {
                    format!("body {:?} mass {} differs from paired {:?} mass {}", bk.name, bk.mass, bi.name, bi.mass)
                } else {
                    format!("body {:?} principal moments {ek:?} differ from paired {:?} {ei:?}", bk.name, bi.name)
                });
            }
        }
    }
    (StageResult { stage: CheckStage::Inertia, max_violation: worst, worst_sample: None, passed: worst <= tol }, reason)
}

fn amax(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        0.0
    } else {
        m.amax()
    }
}

fn sampled_stages(tree: &KinematicTree, c: &CandidateDms, samples: usize, tol: f64, seed: u64) -> Result<[StageResult; 2], RigidError> {
    let r = c.isometry;
    let det = r.determinant().signum();
    let rho = velocity_matrix(tree, &r, &c.joints);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kin = StageResult { stage: CheckStage::Kinematics, max_violation: 0.0, worst_sample: None, passed: true };
    let mut mm = StageResult { stage: CheckStage::MassMatrix, max_violation: 0.0, worst_sample: None, passed: true };
    let note = |st: &mut StageResult, err: f64, s: usize| {
        if st.worst_sample.is_none() || err > st.max_violation {
            st.max_violation = err;
            st.worst_sample = Some(s);
        }
    };
    for s in 0..samples {
        let q = random_configuration(tree, &mut rng);
        let gq = act_configuration(tree, &r, &c.joints, &q);
        let (pq, pg) = (forward_kinematics(tree, &q)?, forward_kinematics(tree, &gq)?);
        let (jq, jg) = (jacobians(tree, &q)?, jacobians(tree, &gq)?);
        let mut err = 0.0f64;
        for (k, &i) in c.pairing.iter().enumerate() {
            let (bk, bi) = (&tree.bodies[k], &tree.bodies[i]);
            err = err.max((pg[i].com(&bi.com) - r * pq[k].com(&bk.com)).amax());
            let ik = world_inertia(&pq[k].rotation, &bk.inertia);
            err = err.max((world_inertia(&pg[i].rotation, &bi.inertia) - r * ik * r.transpose()).amax());
            let r_dyn = DMatrix::from_column_slice(3, 3, r.as_slice());
            err = err.max(amax(&(&jg[i].position * &rho - &r_dyn * &jq[k].position)));
            err = err.max(amax(&(&jg[i].orientation * &rho - &r_dyn * &jq[k].orientation * det)));
        }
        note(&mut kin, err, s);
        let lhs = mass_matrix(tree, &gq)?;
        let rhs = &rho * mass_matrix(tree, &q)? * rho.transpose();
        note(&mut mm, amax(&(lhs - rhs)), s);
    }
    kin.passed = kin.max_violation <= tol;
    mm.passed = mm.max_violation <= tol;
    Ok([kin, mm])
}

fn reason_for(stage: &StageResult) -> String {
    let at = stage.worst_sample.map(|s| format!(" at sample {s}")).unwrap_or_default();
    format!("{} violation {:.1e}{at}", stage.stage.label(), stage.max_violation)
}

/// Certifies each candidate on `samples` random configurations, then closes
/// the verified ones into a group and re-checks mass-matrix equivariance over
/// every element. A verified candidate is "verified on N samples", not proven.
pub fn identify_dms(
    tree: &KinematicTree,
    candidates: &[CandidateDms],
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<IdentifyReport, RigidError> {
    let mut verdicts = Vec::with_capacity(candidates.len());
    for c in candidates {
        let mut stages = Vec::new();
        let mut reason = None;
        let trivial = c.joints.is_identity();
        stages.push(StageResult { stage: CheckStage::JointSpace, max_violation: 0.0, worst_sample: None, passed: !trivial });
        if trivial {
            reason = Some("joint-space representation is trivial".to_string());
        }
        let (inertia, why) = inertia_stage(tree, c, tol);
        if reason.is_none() && !inertia.passed {
            reason = why;
        }
        stages.push(inertia);
        for st in sampled_stages(tree, c, samples, tol, seed)? {
            if reason.is_none() && !st.passed {
                reason = Some(reason_for(&st));
            }
            stages.push(st);
        }
        verdicts.push(CandidateVerdict { name: c.name.clone(), verified: reason.is_none(), stages, reason });
    }

    let verified: Vec<&CandidateDms> = candidates.iter().zip(&verdicts).filter(|(_, v)| v.verified).map(|(c, _)| c).collect();
    if verified.is_empty() {
        return Ok(IdentifyReport { samples, tol, verdicts, group_order: 1, group_check: None, action: None });
    }
    let joint_gens: Vec<GenPerm> = verified.iter().map(|c| c.joints.clone()).collect();
    let body_gens: Vec<GenPerm> = verified
        .iter()
        .map(|c| GenPerm::permutation(c.pairing.clone()))
        .collect::<Result<_, _>>()?;
    let (group, mut reps) = close_jointly(&[joint_gens, body_gens], DEFAULT_ORDER_CAP)?;
    let joints = reps.swap_remove(0);
    let images: Vec<Matrix3<f64>> = verified.iter().map(|c| c.isometry).collect();
    let isometries = IsometrySet::from_generator_images(group.clone(), &images)?;
    let action = DmsAction::new(joints, isometries)?;
    let check = check_mass_matrix_equivariance(tree, &action, samples, tol, seed)?;
    Ok(IdentifyReport { samples, tol, verdicts, group_order: group.order(), group_check: Some(check), action: Some(action) })
}
