use super::BasisError;
use crate::group::Representation;

/// Dimension of the equivariant map space by orbit counting:
/// `r = (1/|G|) Σ_g tr ρ_out(g) · tr ρ_in(g⁻¹)`.
///
/// Traces are signed. For plain permutations the trace is the number of fixed
/// coordinates; with signs only the trace form gives the invariant-subspace
/// dimension.
pub fn burnside_rank(rep_in: &Representation, rep_out: &Representation) -> Result<usize, BasisError> {
    if !rep_in.group().same_as(rep_out.group()) {
        return Err(BasisError::GroupMismatch);
    }
    let group = rep_out.group();
    let (chi_in, chi_out) = (rep_in.character(), rep_out.character());
    let sum: i64 = group.elements().map(|g| chi_out[g] * chi_in[group.inverse(g)]).sum();
    let order = group.order() as i64;
    if sum < 0 || sum % order != 0 {
        return Err(BasisError::NonIntegralRank { sum, order: group.order() });
    }
    Ok((sum / order) as usize)
}
