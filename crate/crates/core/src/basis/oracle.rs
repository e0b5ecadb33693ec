//! Brute-force nullspace of the stacked fix-point constraints. Quadratic in
//! `mn` on both axes, so it is only for checking [`orbit_basis`](super::orbit_basis).

use nalgebra::DMatrix;

use super::{BasisError, EquivBasis};
use crate::group::Representation;

/// Largest `mn` the oracle accepts unless told otherwise.
pub const DEFAULT_ORACLE_CAP: usize = 4096;

/// Default pivot tolerance on the unit-scale integer constraint matrices.
pub const DEFAULT_ORACLE_TOL: f64 = 1e-10;

fn dense(rep: &Representation, g: usize) -> DMatrix<f64> {
    let d = rep.dim();
    let rows = rep.matrix(g).to_dense();
    DMatrix::from_fn(d, d, |i, j| f64::from(rows[i][j]))
}

/// Row-major Kronecker product, written out entry by entry.
fn kronecker(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (br, bc) = b.shape();
    DMatrix::from_fn(a.nrows() * br, a.ncols() * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

/// Orthonormal basis (as columns) of the equivariant `m × n` maps, from the
/// stacked system `(ρ_out(g) ⊗ ρ_in(g⁻¹)ᵀ − I) vec(W) = 0` over non-identity `g`.
pub fn dense_nullspace_oracle(
    rep_in: &Representation,
    rep_out: &Representation,
    tol: f64,
    cap: usize,
) -> Result<DMatrix<f64>, BasisError> {
    if !rep_in.group().same_as(rep_out.group()) {
        return Err(BasisError::GroupMismatch);
    }
    let group = rep_out.group();
    let mn = rep_in.dim() * rep_out.dim();
    if mn > cap {
        return Err(BasisError::CapExceeded { mn, cap });
    }
    // Constraint blocks are folded in one at a time and only the independent
    // reduced rows are carried forward, so memory stays at 2mn x mn.
    let mut kept = DMatrix::<f64>::zeros(0, mn);
    let mut pivots = Vec::new();
    for g in group.elements().skip(1) {
        let in_t = dense(rep_in, group.inverse(g)).transpose();
        let mut block = kronecker(&dense(rep_out, g), &in_t);
        for i in 0..mn {
            block[(i, i)] -= 1.0;
        }
        let mut stacked = DMatrix::<f64>::zeros(kept.nrows() + mn, mn);
        stacked.view_mut((0, 0), kept.shape()).copy_from(&kept);
        stacked.view_mut((kept.nrows(), 0), (mn, mn)).copy_from(&block);
        let (reduced, p) = rref(stacked, tol);
        kept = reduced.rows(0, p.len()).into_owned();
        pivots = p;
    }
    Ok(orthonormalize(nullspace_from_rref(&kept, &pivots), tol))
}

/// Reduced row echelon form by Gauss-Jordan elimination with partial
/// pivoting. A column whose best remaining pivot is `<= tol` in magnitude is
/// treated as free. Returns the pivot columns in row order.
fn rref(mut a: DMatrix<f64>, tol: f64) -> (DMatrix<f64>, Vec<usize>) {
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows).map(|i| (i, a[(i, c)].abs())).fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            continue;
        }
        a.swap_rows(r, best);
        let p = a[(r, c)];
        for j in c..cols {
            a[(r, j)] /= p;
        }
        for i in 0..rows {
            if i != r {
                let f = a[(i, c)];
                if f != 0.0 {
                    for j in c..cols {
                        a[(i, j)] -= f * a[(r, j)];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// One nullspace vector per free column of a matrix in reduced row echelon form.
fn nullspace_from_rref(a: &DMatrix<f64>, pivots: &[usize]) -> DMatrix<f64> {
    let cols = a.ncols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = DMatrix::<f64>::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = 1.0;
        for (row, &p) in pivots.iter().enumerate() {
            basis[(p, k)] = -a[(row, f)];
        }
    }
    basis
}

/// Modified Gram-Schmidt; drops columns that collapse below `tol`.
fn orthonormalize(v: DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let mut out: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(v.ncols());
    for k in 0..v.ncols() {
        let mut u = v.column(k).into_owned();
        for q in &out {
            let d = q.dot(&u);
            u.axpy(-d, q, 1.0);
        }
        let norm = u.norm();
        if norm > tol {
            out.push(u / norm);
        }
    }
    if out.is_empty() {
        DMatrix::zeros(v.nrows(), 0)
    } else {
        DMatrix::from_columns(&out)
    }
}

/// Agreement between an orbit basis and an oracle nullspace.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OracleComparison {
    pub orbit_rank: usize,
    pub oracle_rank: usize,
    /// Largest `‖u − QQᵀu‖` over normalized orbit vectors `u`.
    pub max_residual: f64,
}

impl OracleComparison {
    pub fn agrees(&self, tol: f64) -> bool {
        self.orbit_rank == self.oracle_rank && self.max_residual < tol
    }
}

pub fn compare_with_oracle(basis: &EquivBasis, oracle: &DMatrix<f64>) -> OracleComparison {
    let mn = basis.m * basis.n;
    assert_eq!(oracle.nrows(), mn, "oracle rows must equal mn");
    let mut max_residual: f64 = 0.0;
    for orbit in &basis.orbits {
        let u = nalgebra::DVector::from_vec(orbit.to_dense(mn)).normalize();
        let proj = oracle * (oracle.transpose() * &u);
        max_residual = max_residual.max((u - proj).norm());
    }
    OracleComparison { orbit_rank: basis.rank(), oracle_rank: oracle.ncols(), max_residual }
}
