//! Canonical block-permutation constructions of the small groups that show up
//! as morphological symmetry groups.

use std::sync::Arc;

use super::{group_closure, FiniteGroup, GenPerm, GroupError, Representation, DEFAULT_ORDER_CAP};

/// Permutation of `blocks` blocks of `block_dim` coordinates sending block `b`
/// to block `map(b)`.
fn block_permutation(blocks: usize, block_dim: usize, map: impl Fn(usize) -> usize) -> GenPerm {
    let target = (0..blocks * block_dim).map(|i| map(i / block_dim) * block_dim + i % block_dim).collect();
    GenPerm::permutation(target).expect("block map is a bijection")
}

/// Cyclic group `C_k` acting on `k · block_dim` coordinates by cycling blocks.
///
/// The generator has the block pattern of `[[0,1,0],[0,0,1],[1,0,0]]` for
/// `k = 3`: block `b` moves to block `b - 1 (mod k)`.
pub fn make_cyclic(k: usize, block_dim: usize) -> (Arc<FiniteGroup>, Representation) {
    assert!(k >= 1 && block_dim >= 1, "make_cyclic needs k >= 1 and block_dim >= 1");
    let gen = block_permutation(k, block_dim, |b| (b + k - 1) % k);
    group_closure(&[gen], DEFAULT_ORDER_CAP).expect("cyclic group of order k")
}

/// Klein four-group acting on four blocks (legs) by the pair swaps
/// `(0 1)(2 3)` and `(0 2)(1 3)`.
pub fn make_klein_four(block_dim: usize) -> (Arc<FiniteGroup>, Representation) {
    assert!(block_dim >= 1);
    let s = block_permutation(4, block_dim, |b| b ^ 1);
    let t = block_permutation(4, block_dim, |b| b ^ 2);
    group_closure(&[s, t], DEFAULT_ORDER_CAP).expect("Klein four-group")
}

/// Dihedral group of order `2n` acting on the `n` vertices of a regular
/// polygon (one block per vertex). Generators: rotation, then reflection.
pub fn make_dihedral(n: usize, block_dim: usize) -> (Arc<FiniteGroup>, Representation) {
    assert!(n >= 3, "the vertex action is only faithful for n >= 3");
    let rot = block_permutation(n, block_dim, |b| (b + n - 1) % n);
    let refl = block_permutation(n, block_dim, |b| (n - b) % n);
    group_closure(&[rot, refl], DEFAULT_ORDER_CAP).expect("dihedral group")
}

/// Looks up a group by short name: `trivial`, `c<k>`, `k4`, `d<2n>`.
///
/// The returned representation is the canonical permutation action with
/// `block_dim = 1`.
pub fn builtin_group(name: &str) -> Result<(Arc<FiniteGroup>, Representation), GroupError> {
    let lower = name.trim().to_ascii_lowercase();
    let parse = |s: &str| s.parse::<usize>().ok();
    match lower.as_str() {
        "trivial" | "c1" => Ok(make_cyclic(1, 1)),
        "k4" | "klein" | "v4" => Ok(make_klein_four(1)),
        _ => {
            if let Some(k) = lower.strip_prefix('c').and_then(parse).filter(|&k| k >= 1) {
                Ok(make_cyclic(k, 1))
            } else if let Some(order) = lower.strip_prefix('d').and_then(parse).filter(|&o| o >= 6 && o % 2 == 0) {
                Ok(make_dihedral(order / 2, 1))
            } else if lower == "d4" {
                Ok(make_klein_four(1))
            } else {
                Err(GroupError::UnknownGroup(name.to_string()))
            }
        }
    }
}
