use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::{AugmentError, IsometrySet};
use crate::group::{close_jointly, FiniteGroup, RepSpec, Representation, DEFAULT_ORDER_CAP};

/// Symmetry group file: named joint-space/leg representations given by
/// generator images, and named isometry sets given by one 3×3 matrix per
/// generator. Generator `k` of every entry describes the same group element.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetrySpec {
    pub reps: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub isometries: BTreeMap<String, Vec<[[f64; 3]; 3]>>,
}

/// A resolved symmetry group with all of its named actions.
#[derive(Debug, Clone)]
pub struct SymmetryContext {
    pub group: Arc<FiniteGroup>,
    pub reps: BTreeMap<String, Representation>,
    pub isometries: BTreeMap<String, IsometrySet>,
}

impl SymmetrySpec {
    pub fn from_json(text: &str) -> Result<Self, AugmentError> {
        serde_json::from_str(text).map_err(|e| AugmentError::Parse { line: e.line(), message: e.to_string() })
    }

    /// Closes the group generated jointly by every representation (in name
    /// order) and extends each isometry set over it.
    pub fn resolve(&self) -> Result<SymmetryContext, AugmentError> {
        if self.reps.is_empty() {
            return Err(AugmentError::Schema { field: "reps".into(), reason: "at least one representation is required".into() });
        }
        let mut names = Vec::new();
        let mut gens = Vec::new();
        for (name, value) in &self.reps {
            let spec = RepSpec::from_value(value.clone())
                .map_err(|e| AugmentError::Schema { field: name.clone(), reason: e.to_string() })?;
            names.push(name.clone());
            gens.push(spec.generators);
        }
        let (group, reps) = close_jointly(&gens, DEFAULT_ORDER_CAP)?;
        let reps = names.into_iter().zip(reps).collect();
        let isometries = self
            .isometries
            .iter()
            .map(|(name, images)| {
                let mats: Vec<Matrix3<f64>> = images.iter().map(|r| Matrix3::from_fn(|i, j| r[i][j])).collect();
                IsometrySet::from_generator_images(group.clone(), &mats)
                    .map(|set| (name.clone(), set))
                    .map_err(|e| AugmentError::Schema { field: name.clone(), reason: e.to_string() })
            })
            .collect::<Result<_, _>>()?;
        Ok(SymmetryContext { group, reps, isometries })
    }
}

/// How one measurement field transforms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldKind {
    /// `ρ_js(g)` from a named representation.
    JointSpace { rep: String },
    /// `R(ĝ) v`.
    E3Vector { isometry: String },
    /// `det R(ĝ) · R(ĝ) v` (angular velocity, angular momentum).
    E3Pseudovector { isometry: String },
    /// `L` stacked 3-vectors, one per leg: `(P_legs(g) ⊗ R(ĝ)) v`.
    KronPermVector { legs: String, isometry: String },
    /// One-hot or logit vector over the `2^L` contact states.
    CategoricalContact { legs: String },
    /// Flattened (row-major) homogeneous 4×4 pose `X ↦ H X H⁻¹`, `H = diag(R(ĝ), 1)`.
    PoseConjugation { isometry: String },
    /// Left unchanged; width taken from the field's `dim` (default 1).
    InvariantScalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    pub name: String,
    /// Declared width, checked against the kind when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(flatten)]
    pub kind: FieldKind,
}

/// Ordered field layout of one measurement row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementSchema {
    pub fields: Vec<Field>,
}

impl MeasurementSchema {
    pub fn from_json(text: &str) -> Result<Self, AugmentError> {
        serde_json::from_str(text).map_err(|e| AugmentError::Parse { line: e.line(), message: e.to_string() })
    }
}
