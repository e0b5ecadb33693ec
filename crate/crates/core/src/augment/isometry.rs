use std::sync::Arc;

use nalgebra::Matrix3;

use super::AugmentError;
use crate::group::FiniteGroup;

/// Orthogonality and homomorphism tolerance for isometry images.
pub const ISOMETRY_TOL: f64 = 1e-12;

/// One origin-fixing isometry of 3-space per group element.
#[derive(Debug, Clone)]
pub struct IsometrySet {
    group: Arc<FiniteGroup>,
    mats: Vec<Matrix3<f64>>,
    dets: Vec<f64>,
}

impl IsometrySet {
    /// Extends generator images along the group's BFS words and checks the
    /// result is an orthogonal representation.
    pub fn from_generator_images(group: Arc<FiniteGroup>, images: &[Matrix3<f64>]) -> Result<Self, AugmentError> {
        if images.len() != group.generators().len() {
            return Err(AugmentError::Isometry(format!(
                "expected {} generator images, got {}",
                group.generators().len(),
                images.len()
            )));
        }
        for (k, r) in images.iter().enumerate() {
            let err = (r.transpose() * r - Matrix3::identity()).amax();
            if err > ISOMETRY_TOL {
                return Err(AugmentError::Isometry(format!("generator {k} is not orthogonal (|RᵀR - I| = {err:.3e})")));
            }
        }
        let mut mats = vec![Matrix3::<f64>::identity(); group.order()];
        for g in group.elements() {
            if let Some((parent, slot)) = group.word_step(g) {
                mats[g] = mats[parent] * images[slot];
            }
        }
        for g in group.elements() {
            for h in group.elements() {
                let err = (mats[group.mul(g, h)] - mats[g] * mats[h]).amax();
                if err > ISOMETRY_TOL {
                    return Err(AugmentError::Isometry(format!(
                        "images are not a homomorphism at ({g}, {h}) (error {err:.3e})"
                    )));
                }
            }
        }
        let dets = mats.iter().map(|m| m.determinant().signum()).collect();
        Ok(IsometrySet { group, mats, dets })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn matrix(&self, g: usize) -> &Matrix3<f64> {
        &self.mats[g]
    }

    /// `det R(g)`, exactly `±1`.
    pub fn det(&self, g: usize) -> f64 {
        self.dets[g]
    }

    /// `det(R)·R`, the action on pseudovectors.
    pub fn pseudo(&self, g: usize) -> Matrix3<f64> {
        self.mats[g] * self.dets[g]
    }
}

/// Reflection through the plane with unit normal `n`: `I − 2nnᵀ`.
pub fn reflection(normal: [f64; 3]) -> Matrix3<f64> {
    let n = nalgebra::Vector3::from(normal).normalize();
    Matrix3::identity() - 2.0 * n * n.transpose()
}
