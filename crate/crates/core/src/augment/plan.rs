use std::sync::Arc;

use nalgebra::{DMatrix, Matrix3, Matrix4};

use super::{contact_state_rep, AugmentError, FieldKind, IsometrySet, MeasurementSchema, SymmetryContext};
use crate::group::{FiniteGroup, GenPerm, Representation};

/// Per-element action on one field.
#[derive(Debug, Clone)]
enum Block {
    Perm(Vec<GenPerm>),
    Linear3(Vec<Matrix3<f64>>),
    /// Leg permutation and rotation; acts on `L` stacked 3-vectors.
    Kron { legs: Vec<GenPerm>, rot: Vec<Matrix3<f64>> },
    /// `H X Hᵀ` with `H = diag(R, 1)`; `H` is orthogonal so `Hᵀ = H⁻¹`.
    Conjugate(Vec<Matrix4<f64>>),
    Identity,
}

#[derive(Debug, Clone)]
struct CompiledField {
    name: String,
    offset: usize,
    dim: usize,
    block: Block,
}

/// A schema compiled against a symmetry group: one block-diagonal transform
/// `T(g)` per element over the flat measurement row.
#[derive(Debug, Clone)]
pub struct AugmentationPlan {
    group: Arc<FiniteGroup>,
    width: usize,
    fields: Vec<CompiledField>,
}

fn lookup<'a, T>(map: &'a std::collections::BTreeMap<String, T>, key: &str, field: &str, what: &str) -> Result<&'a T, AugmentError> {
    map.get(key)
        .ok_or_else(|| AugmentError::Schema { field: field.into(), reason: format!("unknown {what} {key:?}") })
}

fn pose_matrix(r: &Matrix3<f64>) -> Matrix4<f64> {
    let mut h = Matrix4::identity();
    h.fixed_view_mut::<3, 3>(0, 0).copy_from(r);
    h
}

pub fn compile_schema(schema: &MeasurementSchema, ctx: &SymmetryContext) -> Result<AugmentationPlan, AugmentError> {
    let group = ctx.group.clone();
    let elements = || group.elements();
    let mut fields = Vec::with_capacity(schema.fields.len());
    let mut offset = 0;
    let mut seen = std::collections::BTreeSet::new();
    for field in &schema.fields {
        let name = field.name.as_str();
        if !seen.insert(name) {
            return Err(AugmentError::Schema { field: name.into(), reason: "duplicate field name".into() });
        }
        let iso = |key: &str| lookup(&ctx.isometries, key, name, "isometry");
        let rep = |key: &str| lookup(&ctx.reps, key, name, "representation");
        let (dim, block) = match &field.kind {
            FieldKind::JointSpace { rep: key } => {
                let r = rep(key)?;
                (r.dim(), Block::Perm(r.matrices().to_vec()))
            }
            FieldKind::E3Vector { isometry } => {
                let s = iso(isometry)?;
                (3, Block::Linear3(elements().map(|g| *s.matrix(g)).collect()))
            }
            FieldKind::E3Pseudovector { isometry } => {
                let s = iso(isometry)?;
                (3, Block::Linear3(elements().map(|g| s.pseudo(g)).collect()))
            }
            FieldKind::KronPermVector { legs, isometry } => {
                let (l, s) = (rep(legs)?, iso(isometry)?);
                let block = Block::Kron { legs: l.matrices().to_vec(), rot: elements().map(|g| *s.matrix(g)).collect() };
                (3 * l.dim(), block)
            }
            FieldKind::CategoricalContact { legs } => {
                let l: &Representation = rep(legs)?;
                let perms = elements()
                    .map(|g| contact_state_rep(l.dim(), l.matrix(g)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| AugmentError::Schema { field: name.into(), reason: e.to_string() })?;
                (1 << l.dim(), Block::Perm(perms))
            }
            FieldKind::PoseConjugation { isometry } => {
                let s: &IsometrySet = iso(isometry)?;
                (16, Block::Conjugate(elements().map(|g| pose_matrix(s.matrix(g))).collect()))
            }
            FieldKind::InvariantScalar => (field.dim.unwrap_or(1), Block::Identity),
        };
        if let Some(declared) = field.dim {
            if declared != dim {
                return Err(AugmentError::Schema {
                    field: name.into(),
                    reason: format!("declared dim {declared} but the transform acts on {dim}"),
                });
            }
        }
        if dim == 0 {
            return Err(AugmentError::Schema { field: name.into(), reason: "zero width".into() });
        }
        fields.push(CompiledField { name: name.into(), offset, dim, block });
        offset += dim;
    }
    Ok(AugmentationPlan { group, width: offset, fields })
}

impl AugmentationPlan {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// CSV column names: the field name for 1-wide fields, `name_k` otherwise.
    pub fn headers(&self) -> Vec<String> {
        self.fields
            .iter()
            .flat_map(|f| {
                (0..f.dim).map(move |k| if f.dim == 1 { f.name.clone() } else { format!("{}_{k}", f.name) })
            })
            .collect()
    }

    /// `T(g) row`, field by field.
    pub fn augment_row(&self, g: usize, row: &[f64]) -> Result<Vec<f64>, AugmentError> {
        if row.len() != self.width {
            return Err(AugmentError::DimMismatch { expected: self.width, got: row.len() });
        }
        if g >= self.order() {
            return Err(AugmentError::UnknownElement(g));
        }
        let mut out = vec![0.0; self.width];
        for f in &self.fields {
            let src = &row[f.offset..f.offset + f.dim];
            let dst = &mut out[f.offset..f.offset + f.dim];
            match &f.block {
                Block::Perm(p) => dst.copy_from_slice(&p[g].apply(src)),
                Block::Linear3(r) => {
                    let v = r[g] * nalgebra::Vector3::from_column_slice(src);
                    dst.copy_from_slice(v.as_slice());
                }
                Block::Kron { legs, rot } => {
                    for leg in 0..legs[g].dim() {
                        let (t, s) = legs[g].image(leg);
                        let v = rot[g] * nalgebra::Vector3::from_column_slice(&src[3 * leg..3 * leg + 3]) * f64::from(s);
                        dst[3 * t..3 * t + 3].copy_from_slice(v.as_slice());
                    }
                }
                Block::Conjugate(h) => {
                    let x = Matrix4::from_row_slice(src);
                    let y = h[g] * x * h[g].transpose();
                    for i in 0..4 {
                        for j in 0..4 {
                            dst[4 * i + j] = y[(i, j)];
                        }
                    }
                }
                Block::Identity => dst.copy_from_slice(src),
            }
        }
        Ok(out)
    }

    /// `T(g)` as a dense `width × width` matrix. Pose conjugation is linear in
    /// `X`, so it materializes as `H ⊗ H` on the row-major flattening.
    pub fn dense(&self, g: usize) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(self.width, self.width);
        for f in &self.fields {
            let o = f.offset;
            match &f.block {
                Block::Perm(p) => {
                    for i in 0..f.dim {
                        let (r, s) = p[g].image(i);
                        t[(o + r, o + i)] = f64::from(s);
                    }
                }
                Block::Linear3(r) => t.view_mut((o, o), (3, 3)).copy_from(&r[g]),
                Block::Kron { legs, rot } => {
                    for leg in 0..legs[g].dim() {
                        let (r, s) = legs[g].image(leg);
                        t.view_mut((o + 3 * r, o + 3 * leg), (3, 3)).copy_from(&(rot[g] * f64::from(s)));
                    }
                }
                Block::Conjugate(h) => {
                    let h = &h[g];
                    for r in 0..16 {
                        for c in 0..16 {
                            t[(o + r, o + c)] = h[(r / 4, c / 4)] * h[(r % 4, c % 4)];
                        }
                    }
                }
                Block::Identity => {
                    for i in 0..f.dim {
                        t[(o + i, o + i)] = 1.0;
                    }
                }
            }
        }
        t
    }

    /// All `|G|` images of every row, `g`-major: rows `g·N .. (g+1)·N` hold
    /// `T(g)` applied to the input in order. Each block is one matrix product.
    pub fn augment_dataset(&self, rows: &DMatrix<f64>) -> Result<DMatrix<f64>, AugmentError> {
        if rows.ncols() != self.width {
            return Err(AugmentError::DimMismatch { expected: self.width, got: rows.ncols() });
        }
        let n = rows.nrows();
        let mut out = DMatrix::zeros(self.order() * n, self.width);
        for g in self.group.elements() {
            let block = rows * self.dense(g).transpose();
            out.view_mut((g * n, 0), (n, self.width)).copy_from(&block);
        }
        Ok(out)
    }

    /// Symmetrizes `g`-major targets: `y_{g,i} := T(g) (1/|G|) Σ_h T(h)⁻¹ y_{h,i}`.
    pub fn orbit_average(&self, targets: &DMatrix<f64>) -> Result<DMatrix<f64>, AugmentError> {
        let order = self.order();
        if targets.ncols() != self.width {
            return Err(AugmentError::DimMismatch { expected: self.width, got: targets.ncols() });
        }
        if targets.nrows() % order != 0 {
            return Err(AugmentError::DimMismatch { expected: order * (targets.nrows() / order + 1), got: targets.nrows() });
        }
        let n = targets.nrows() / order;
        let dense: Vec<DMatrix<f64>> = self.group.elements().map(|g| self.dense(g)).collect();
        // T(h)⁻¹ = T(h⁻¹); rows are samples so we right-multiply by transposes
        let mut mean = DMatrix::zeros(n, self.width);
        for h in self.group.elements() {
            let block = targets.rows(h * n, n);
            mean += block * dense[self.group.inverse(h)].transpose();
        }
        mean /= order as f64;
        let mut out = DMatrix::zeros(order * n, self.width);
        for g in self.group.elements() {
            out.view_mut((g * n, 0), (n, self.width)).copy_from(&(&mean * dense[g].transpose()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::{Field, SymmetrySpec};

    fn reflection_ctx() -> SymmetryContext {
        let text = r#"{
          "reps": {"legs": {"dim": 2, "generators": [{"target": [1, 0]}]}},
          "isometries": {"E": [[[-1, 0, 0], [0, 1, 0], [0, 0, 1]]]}
        }"#;
        SymmetrySpec::from_json(text).unwrap().resolve().unwrap()
    }

    fn one(kind: FieldKind) -> MeasurementSchema {
        MeasurementSchema { fields: vec![Field { name: "f".into(), dim: None, kind }] }
    }

    #[test]
    fn vector_and_pseudovector_under_reflection() {
        let ctx = reflection_ctx();
        let plan = compile_schema(&one(FieldKind::E3Vector { isometry: "E".into() }), &ctx).unwrap();
        assert_eq!(plan.augment_row(1, &[1.0, 2.0, 3.0]).unwrap(), vec![-1.0, 2.0, 3.0]);
        let plan = compile_schema(&one(FieldKind::E3Pseudovector { isometry: "E".into() }), &ctx).unwrap();
        assert_eq!(plan.augment_row(1, &[0.0, 0.0, 1.0]).unwrap(), vec![0.0, 0.0, -1.0]);
        assert_eq!(plan.augment_row(1, &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, -2.0, -3.0]);
    }

    #[test]
    fn identity_leaves_rows_unchanged() {
        let ctx = reflection_ctx();
        let schema = MeasurementSchema {
            fields: vec![
                Field { name: "p".into(), dim: Some(6), kind: FieldKind::KronPermVector { legs: "legs".into(), isometry: "E".into() } },
                Field { name: "X".into(), dim: None, kind: FieldKind::PoseConjugation { isometry: "E".into() } },
            ],
        };
        let plan = compile_schema(&schema, &ctx).unwrap();
        let row: Vec<f64> = (0..22).map(f64::from).collect();
        assert_eq!(plan.augment_row(0, &row).unwrap(), row);
        let g1 = plan.augment_row(1, &row).unwrap();
        // legs swap and x flips
        assert_eq!(&g1[..6], &[-3.0, 4.0, 5.0, -0.0, 1.0, 2.0]);
    }

    #[test]
    fn pose_conjugation_matches_dense() {
        let ctx = reflection_ctx();
        let plan = compile_schema(&one(FieldKind::PoseConjugation { isometry: "E".into() }), &ctx).unwrap();
        let row: Vec<f64> = (0..16).map(|k| (k as f64).sin()).collect();
        let via_rows = plan.augment_row(1, &row).unwrap();
        let via_dense = plan.dense(1) * nalgebra::DVector::from_vec(row);
        for (a, b) in via_rows.iter().zip(via_dense.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn schema_errors_name_the_field() {
        let ctx = reflection_ctx();
        let bad = MeasurementSchema {
            fields: vec![Field { name: "v".into(), dim: Some(4), kind: FieldKind::E3Vector { isometry: "E".into() } }],
        };
        assert!(matches!(compile_schema(&bad, &ctx), Err(AugmentError::Schema { field, .. }) if field == "v"));
        let missing = one(FieldKind::E3Vector { isometry: "nope".into() });
        assert!(matches!(compile_schema(&missing, &ctx), Err(AugmentError::Schema { .. })));
    }

    #[test]
    fn orbit_average_fixes_corruption() {
        let ctx = reflection_ctx();
        let plan = compile_schema(&one(FieldKind::E3Vector { isometry: "E".into() }), &ctx).unwrap();
        let y = [0.3, -1.0, 2.0];
        let mut gy = plan.augment_row(1, &y).unwrap();
        gy[0] += 0.25;
        let targets = DMatrix::from_row_slice(2, 3, &[y, [gy[0], gy[1], gy[2]]].concat());
        let avg = plan.orbit_average(&targets).unwrap();
        let row0: Vec<f64> = avg.row(0).iter().copied().collect();
        let row1: Vec<f64> = avg.row(1).iter().copied().collect();
        let mapped = plan.augment_row(1, &row0).unwrap();
        for (a, b) in mapped.iter().zip(&row1) {
            assert!((a - b).abs() < 1e-12);
        }
        let again = plan.orbit_average(&avg).unwrap();
        assert!((again - &avg).amax() < 1e-12);
    }
}
