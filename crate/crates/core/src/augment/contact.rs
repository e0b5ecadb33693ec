use super::AugmentError;
use crate::group::GenPerm;

/// Largest leg count for which `2^L` contact states are enumerated.
pub const MAX_LEGS: usize = 16;

/// Action of a leg permutation on the `2^L` binary contact states.
///
/// A state is an `L`-bit string in leg order with the first leg as the most
/// significant bit, so for legs `(RF, LF, RH, LH)` state `1` means only `LH`
/// touches the ground. The image state has leg `perm(l)` in contact exactly
/// when leg `l` was.
pub fn contact_state_rep(num_legs: usize, leg_perm: &GenPerm) -> Result<GenPerm, AugmentError> {
    if num_legs > MAX_LEGS {
        return Err(AugmentError::TooManyLegs(num_legs));
    }
    if leg_perm.dim() != num_legs {
        return Err(AugmentError::DimMismatch { expected: num_legs, got: leg_perm.dim() });
    }
    if !leg_perm.is_unsigned() {
        return Err(AugmentError::Isometry("leg permutations cannot carry signs".into()));
    }
    let bit = |leg: usize| num_legs - 1 - leg;
    let target = (0..1usize << num_legs)
        .map(|s| {
            (0..num_legs)
                .filter(|&l| s >> bit(l) & 1 == 1)
                .fold(0usize, |acc, l| acc | 1 << bit(leg_perm.target()[l]))
        })
        .collect();
    Ok(GenPerm::permutation(target).expect("relabeling bits is a bijection"))
}
