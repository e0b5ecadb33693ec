use serde::{Deserialize, Serialize};

use super::BasisError;
use crate::group::{GenPerm, Representation};

/// One shared parameter: the signed orbit of a flat index of `vec(W)` under
/// `ρ_W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedOrbit {
    /// `(flat index, sign)` sorted by index; the first entry is the canonical
    /// index and always has sign `+1`.
    pub entries: Vec<(usize, i8)>,
}

impl SignedOrbit {
    pub fn canonical_index(&self) -> usize {
        self.entries[0].0
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Dense `±1` vector of length `len`.
    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut v = vec![0.0; len];
        for &(i, s) in &self.entries {
            v[i] = f64::from(s);
        }
        v
    }
}

/// Basis of the `G`-equivariant `m × n` linear maps, one orbit per free
/// coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivBasis {
    pub m: usize,
    pub n: usize,
    pub orbits: Vec<SignedOrbit>,
    /// Orbits whose entries are pinned to zero by a sign contradiction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero_forced: Vec<SignedOrbit>,
}

impl EquivBasis {
    /// Number of free coefficients `r`.
    pub fn rank(&self) -> usize {
        self.orbits.len()
    }

    /// `λ = Σ_k Σ_{ij} Θ̄²_{ijk}`: every orbit entry is `±1`, so this is the total
    /// orbit support.
    pub fn lambda(&self) -> f64 {
        self.orbits.iter().map(|o| o.len() as f64).sum()
    }

    /// `W = Σ_k β_k unvec(Θ̄_k)` as a row-major `m × n` buffer.
    pub fn materialize(&self, coeffs: &[f64]) -> Vec<f64> {
        assert_eq!(coeffs.len(), self.rank(), "one coefficient per orbit");
        let mut w = vec![0.0; self.m * self.n];
        for (orbit, &beta) in self.orbits.iter().zip(coeffs) {
            for &(idx, s) in &orbit.entries {
                w[idx] = f64::from(s) * beta;
            }
        }
        w
    }

    /// Parameter-sharing contraction `dL/dβ_k = Σ_{(idx, s) ∈ orbit k} s · dL/dW_idx`.
    pub fn contract(&self, grad_w: &[f64]) -> Vec<f64> {
        assert_eq!(grad_w.len(), self.m * self.n);
        self.orbits
            .iter()
            .map(|o| o.entries.iter().map(|&(idx, s)| f64::from(s) * grad_w[idx]).sum())
            .collect()
    }
}

/// The action of `ρ_W(g) = ρ_out(g) ⊗ ρ_in(g⁻¹)ᵀ` on flat indices, evaluated
/// per index without building any `mn`-sized object.
pub(crate) struct LinearMapAction<'a> {
    out: &'a Representation,
    in_t: Vec<GenPerm>,
    n: usize,
}

impl<'a> LinearMapAction<'a> {
    pub(crate) fn new(rep_in: &Representation, rep_out: &'a Representation) -> Result<Self, BasisError> {
        if !rep_in.group().same_as(rep_out.group()) {
            return Err(BasisError::GroupMismatch);
        }
        let group = rep_out.group();
        let in_t = group.elements().map(|g| rep_in.matrix(group.inverse(g)).transpose()).collect();
        Ok(LinearMapAction { out: rep_out, in_t, n: rep_in.dim() })
    }

    #[inline]
    pub(crate) fn image(&self, g: usize, flat: usize) -> (usize, i8) {
        let (ti, si) = self.out.matrix(g).image(flat / self.n);
        let (tj, sj) = self.in_t[g].image(flat % self.n);
        (ti * self.n + tj, si * sj)
    }
}

/// Basis of equivariant linear maps `ℝⁿ → ℝᵐ` by orbit search.
///
/// Each flat index of `vec(W)` is visited once; an unvisited index seeds an
/// orbit traced under all `|G|` elements, so the total work is `O(|G|·mn)`.
/// An index reached with both signs pins its whole orbit to zero. Orbits are
/// emitted in increasing canonical index.
pub fn orbit_basis(rep_in: &Representation, rep_out: &Representation) -> Result<EquivBasis, BasisError> {
    let action = LinearMapAction::new(rep_in, rep_out)?;
    let (m, n) = (rep_out.dim(), rep_in.dim());
    let order = rep_out.group().order();
    let mut visited = vec![false; m * n];
    // sign with which an index was reached in the orbit being traced; 0 = not yet
    let mut reached = vec![0i8; m * n];
    let mut orbits = Vec::new();
    let mut zero_forced = Vec::new();
    let mut members = Vec::with_capacity(order);

    for seed in 0..m * n {
        if visited[seed] {
            continue;
        }
        members.clear();
        let mut contradiction = false;
        for g in 0..order {
            let (t, s) = action.image(g, seed);
            match reached[t] {
                0 => {
                    reached[t] = s;
                    visited[t] = true;
                    members.push(t);
                }
                prev if prev != s => contradiction = true,
                _ => {}
            }
        }
        members.sort_unstable();
        let entries: Vec<(usize, i8)> = members.iter().map(|&t| (t, reached[t])).collect();
        for &t in &members {
            reached[t] = 0;
        }
        let orbit = SignedOrbit { entries };
        if contradiction {
            zero_forced.push(orbit);
        } else {
            orbits.push(orbit);
        }
    }
    Ok(EquivBasis { m, n, orbits, zero_forced })
}

/// Basis of `G`-invariant bias vectors `ρ_out(g) b = b`, as an `m × 1` basis.
pub fn bias_basis(rep_out: &Representation) -> EquivBasis {
    let scalar = Representation::trivial(rep_out.group().clone(), 1);
    orbit_basis(&scalar, rep_out).expect("same group by construction")
}
