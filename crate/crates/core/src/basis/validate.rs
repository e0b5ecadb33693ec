use serde::Serialize;

use super::{burnside_rank, EquivBasis};
use crate::group::Representation;

/// Result of checking a basis against the fix-point equations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisReport {
    pub rank: usize,
    /// `None` when the reps do not admit an integral orbit count.
    pub burnside_rank: Option<usize>,
    pub zero_forced: usize,
    pub max_violation: f64,
    /// First `(orbit, g, i, j)` with `|(ρ_out(g)W − Wρ_in(g))_{ij}| > tol`.
    pub first_violation: Option<Violation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub orbit: usize,
    pub g: usize,
    pub i: usize,
    pub j: usize,
}

impl BasisReport {
    pub fn rank_matches(&self) -> bool {
        self.burnside_rank == Some(self.rank)
    }

    pub fn passed(&self) -> bool {
        self.first_violation.is_none() && self.rank_matches()
    }
}

/// Materializes every orbit as a matrix and checks `ρ_out(g) W = W ρ_in(g)`
/// for all `g`, plus rank agreement with the orbit count.
pub fn validate_basis(basis: &EquivBasis, rep_in: &Representation, rep_out: &Representation, tol: f64) -> BasisReport {
    let group = rep_out.group();
    let (m, n) = (basis.m, basis.n);
    let mut max_violation: f64 = 0.0;
    let mut first_violation = None;
    let shape_ok = rep_out.dim() == m && rep_in.dim() == n;
    if shape_ok {
        for (k, orbit) in basis.orbits.iter().enumerate() {
            let w = orbit.to_dense(m * n);
            for g in group.elements() {
                let (po, pi) = (rep_out.matrix(g), rep_in.matrix(g));
                // (ρ_out W)[t_i, j] = s_i W[i, j];  (W ρ_in)[i, j] = s_j W[i, t_j]
                let mut lhs = vec![0.0; m * n];
                let mut rhs = vec![0.0; m * n];
                for i in 0..m {
                    let (ti, si) = po.image(i);
                    for j in 0..n {
                        let (tj, sj) = pi.image(j);
                        lhs[ti * n + j] = f64::from(si) * w[i * n + j];
                        rhs[i * n + j] = f64::from(sj) * w[i * n + tj];
                    }
                }
                for (idx, (a, b)) in lhs.iter().zip(&rhs).enumerate() {
                    let d = (a - b).abs();
                    max_violation = max_violation.max(d);
                    if d > tol && first_violation.is_none() {
                        first_violation = Some(Violation { orbit: k, g, i: idx / n, j: idx % n });
                    }
                }
            }
        }
    }
    BasisReport {
        rank: basis.rank(),
        burnside_rank: burnside_rank(rep_in, rep_out).ok(),
        zero_forced: basis.zero_forced.len(),
        max_violation: if shape_ok { max_violation } else { f64::INFINITY },
        first_violation: if shape_ok {
            first_violation
        } else {
            Some(Violation { orbit: 0, g: 0, i: m, j: n })
        },
    }
}
