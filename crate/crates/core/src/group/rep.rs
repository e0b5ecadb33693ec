use std::sync::Arc;

use super::{FiniteGroup, GenPerm, GroupError};

/// A representation of a finite group by generalized permutation matrices.
#[derive(Debug, Clone)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<GenPerm>,
}

/// Outcome of an exhaustive homomorphism check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomomorphismReport {
    pub pairs_checked: usize,
    /// First `(g, h)` with `ρ(gh) ≠ ρ(g)ρ(h)`, in row-major pair order.
    pub first_violation: Option<(usize, usize)>,
}

impl HomomorphismReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

impl Representation {
    /// Wraps one matrix per group element. Only shapes are validated; use
    /// [`Representation::verify_homomorphism`] for the group axioms.
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<GenPerm>) -> Result<Self, GroupError> {
        if matrices.len() != group.order() {
            return Err(GroupError::DimMismatch { expected: group.order(), got: matrices.len() });
        }
        let dim = matrices[0].dim();
        if let Some(m) = matrices.iter().find(|m| m.dim() != dim) {
            return Err(GroupError::DimMismatch { expected: dim, got: m.dim() });
        }
        Ok(Representation { group, dim, matrices })
    }

    /// Extends generator images to the whole group along the BFS words of
    /// `group`, then checks the result is a homomorphism.
    pub fn from_generator_images(group: Arc<FiniteGroup>, images: &[GenPerm]) -> Result<Self, GroupError> {
        if images.len() != group.generators().len() {
            return Err(GroupError::GeneratorCountMismatch { expected: group.generators().len(), got: images.len() });
        }
        let dim = images.first().map(GenPerm::dim).ok_or(GroupError::NoGenerators)?;
        if let Some(m) = images.iter().find(|m| m.dim() != dim) {
            return Err(GroupError::DimMismatch { expected: dim, got: m.dim() });
        }
        let mut matrices = vec![GenPerm::identity(dim); group.order()];
        // BFS order guarantees parents precede children
        for g in group.elements() {
            if let Some((parent, slot)) = group.word_step(g) {
                matrices[g] = matrices[parent].compose(&images[slot]);
            }
        }
        let rep = Representation { group, dim, matrices };
        match rep.verify_homomorphism().first_violation {
            None => Ok(rep),
            Some((g, h)) => Err(GroupError::NotAHomomorphism { g, h }),
        }
    }

    /// `dim`-dimensional trivial representation.
    pub fn trivial(group: Arc<FiniteGroup>, dim: usize) -> Self {
        let matrices = vec![GenPerm::identity(dim); group.order()];
        Representation { group, dim, matrices }
    }

    /// The left-regular representation: `ρ(g) e_h = e_{gh}`.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let matrices = group
            .elements()
            .map(|g| GenPerm::permutation(group.cayley_row(g).to_vec()).expect("Cayley rows are permutations"))
            .collect();
        Representation { dim: group.order(), group, matrices }
    }

    /// `copies` stacked copies of the regular representation.
    pub fn regular_tiled(group: Arc<FiniteGroup>, copies: usize) -> Self {
        let reg = Self::regular(group);
        let parts = vec![reg; copies.max(1)];
        Self::direct_sum(&parts).expect("same group")
    }

    /// Block-diagonal direct sum of representations of the same group.
    pub fn direct_sum(reps: &[Representation]) -> Result<Self, GroupError> {
        let (first, rest) = reps.split_first().ok_or(GroupError::GroupMismatch)?;
        if rest.iter().any(|r| !r.group.same_as(&first.group)) {
            return Err(GroupError::GroupMismatch);
        }
        let matrices = first
            .group
            .elements()
            .map(|g| rest.iter().fold(first.matrices[g].clone(), |acc, r| acc.direct_sum(&r.matrices[g])))
            .collect();
        let dim = reps.iter().map(|r| r.dim).sum();
        Ok(Representation { group: first.group.clone(), dim, matrices })
    }

    /// Kronecker product representation `ρ_a(g) ⊗ ρ_b(g)`.
    pub fn kron(a: &Representation, b: &Representation) -> Result<Self, GroupError> {
        if !a.group.same_as(&b.group) {
            return Err(GroupError::GroupMismatch);
        }
        let matrices = a.group.elements().map(|g| a.matrices[g].kron(&b.matrices[g])).collect();
        Ok(Representation { group: a.group.clone(), dim: a.dim * b.dim, matrices })
    }

    /// Representation on row-major vectorized `m × n` linear maps:
    /// `ρ_W(g) = ρ_out(g) ⊗ ρ_in(g⁻¹)ᵀ`, with `vec(W)[i·n + j] = W[i, j]`.
    pub fn on_linear_maps(rep_in: &Representation, rep_out: &Representation) -> Result<Self, GroupError> {
        if !rep_in.group.same_as(&rep_out.group) {
            return Err(GroupError::GroupMismatch);
        }
        let group = rep_out.group.clone();
        let matrices = group
            .elements()
            .map(|g| rep_out.matrices[g].kron(&rep_in.matrices[group.inverse(g)].transpose()))
            .collect();
        Ok(Representation { dim: rep_out.dim * rep_in.dim, group, matrices })
    }

    #[inline]
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn matrix(&self, g: usize) -> &GenPerm {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[GenPerm] {
        &self.matrices
    }

    /// True when some element carries a `-1` entry.
    pub fn is_signed(&self) -> bool {
        self.matrices.iter().any(|m| !m.is_unsigned())
    }

    /// Signed character `χ(g) = tr ρ(g)`.
    pub fn character(&self) -> Vec<i64> {
        self.matrices.iter().map(GenPerm::trace).collect()
    }

    /// `ρ(g) x` in `O(dim)`.
    pub fn act<T>(&self, g: usize, x: &[T]) -> Result<Vec<T>, GroupError>
    where
        T: Copy + Default + std::ops::Neg<Output = T>,
    {
        if x.len() != self.dim {
            return Err(GroupError::DimMismatch { expected: self.dim, got: x.len() });
        }
        if g >= self.group.order() {
            return Err(GroupError::UnknownElement(g));
        }
        Ok(self.matrices[g].apply(x))
    }

    /// Checks `ρ(gh) = ρ(g)ρ(h)` over every ordered pair, exactly.
    pub fn verify_homomorphism(&self) -> HomomorphismReport {
        let mut pairs_checked = 0;
        for g in self.group.elements() {
            for h in self.group.elements() {
                pairs_checked += 1;
                if self.matrices[self.group.mul(g, h)] != self.matrices[g].compose(&self.matrices[h]) {
                    return HomomorphismReport { pairs_checked, first_violation: Some((g, h)) };
                }
            }
        }
        HomomorphismReport { pairs_checked, first_violation: None }
    }
}
